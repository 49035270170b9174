#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netprop/csr.hpp"

namespace netprop {

// One undirected weighted edge; endpoints are node ids in [0, n).
struct Edge {
  index_t u;
  index_t v;
  double weight;
};

// Symmetric non-negative weighted graph over n nodes. Invariants enforced on
// construction: every stored entry (i,j,w) has a mirror (j,i,w) with the
// identical weight, the diagonal is empty, and all stored weights are
// strictly positive (zero weights are simply absent).
class SparseNetwork {
public:
  SparseNetwork() = default;

  // Builds from undirected edges; each pair may appear once. Throws Error on
  // self-loops, non-positive weights, out-of-range endpoints, or duplicate
  // pairs with conflicting weights. Duplicate pairs with identical weights
  // collapse to a single edge. Zero-weight edges are dropped.
  static SparseNetwork from_edges(index_t n, const std::vector<Edge>& edges);

  index_t n() const noexcept { return adj_.n; }
  std::int64_t nnz() const noexcept { return adj_.nnz(); }
  const CsrMatrix& adjacency() const noexcept { return adj_; }

private:
  CsrMatrix adj_;
};

// Ordered list of networks over one shared node index. m >= 1 and all
// members have the same n; node_names maps id -> name.
struct NetworkCollection {
  index_t n = 0;
  std::vector<std::string> node_names;
  std::vector<SparseNetwork> networks;

  std::size_t m() const noexcept { return networks.size(); }

  // Throws Error unless m >= 1, every network has node count n, and
  // node_names has exactly n entries.
  void validate() const;
};

struct DegreeVector {
  std::vector<double> d;
};

// d_i = sum_j W_ij; isolated nodes get 0.
DegreeVector degrees(const SparseNetwork& net);

enum class AffinityExponent {
  norm,          // exp(-||x_i - x_j|| / (2 sigma^2))
  norm_squared,  // exp(-||x_i - x_j||^2 / (2 sigma^2))
};

struct AffinityParams {
  double sigma = 1.0;
  AffinityExponent exponent = AffinityExponent::norm;
  // Entries below this floor are dropped so the analytically dense affinity
  // matrix keeps a sparse representation.
  double floor = 1e-12;
};

// Gaussian-style affinity network from an n x p row-major feature matrix.
// W_ii = 0; off-diagonal entries use the configured exponent on the
// Euclidean distance. Throws Error for sigma <= 0 or a feature buffer whose
// size is not n*p.
SparseNetwork build_affinity(const std::vector<double>& features, index_t n,
                             std::size_t p, const AffinityParams& params);

}  // namespace netprop
