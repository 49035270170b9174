#include "netprop/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netprop/errors.hpp"

namespace netprop {

// --------------------------------------------------------------------------
// CSR

CsrMatrix csr_from_triplets(index_t n, std::vector<Triplet> triplets) {
  std::vector<std::int64_t> start(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& t : triplets) ++start[t.row + 1];
  for (index_t i = 0; i < n; ++i) start[i + 1] += start[i];

  // Bucket by row, preserving insertion order within a row.
  std::vector<Triplet> by_row(triplets.size());
  std::vector<std::int64_t> cursor(start.begin(), start.end() - 1);
  for (const auto& t : triplets) by_row[cursor[t.row]++] = t;

  CsrMatrix out;
  out.n = n;
  out.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  out.col.reserve(triplets.size());
  out.val.reserve(triplets.size());
  for (index_t i = 0; i < n; ++i) {
    const auto begin = by_row.begin() + start[i];
    const auto end = by_row.begin() + start[i + 1];
    std::stable_sort(begin, end,
                     [](const Triplet& a, const Triplet& b) { return a.col < b.col; });
    const std::size_t row_start = out.col.size();
    for (auto it = begin; it != end; ++it) {
      if (out.col.size() > row_start && out.col.back() == it->col) {
        out.val.back() += it->value;  // duplicates sum
      } else {
        out.col.push_back(it->col);
        out.val.push_back(it->value);
      }
    }
    out.row_ptr[i + 1] = static_cast<std::int64_t>(out.col.size());
  }
  return out;
}

std::vector<double> CsrMatrix::row_sums() const {
  std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k];
    sums[i] = acc;
  }
  return sums;
}

double CsrMatrix::at(index_t i, index_t j) const {
  const auto begin = col.begin() + row_ptr[i];
  const auto end = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (index_t i = 0; i < n; ++i) {
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double diff = std::fabs(val[k] - at(col[k], i));
      if (diff > worst) worst = diff;
    }
  }
  return worst;
}

// --------------------------------------------------------------------------
// SparseNetwork

SparseNetwork SparseNetwork::from_edges(index_t n, const std::vector<Edge>& edges) {
  if (n < 0) throw Error("node count must be non-negative");

  struct Undirected {
    index_t u, v;  // u < v
    double w;
  };
  std::vector<Undirected> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw Error("edge endpoint out of range");
    }
    if (e.u == e.v) throw Error("self-loops are not allowed");
    if (e.weight < 0.0) throw Error("edge weights must be non-negative");
    if (!(std::isfinite(e.weight))) throw Error("edge weight is not finite");
    if (e.weight == 0.0) continue;  // zero weight = absent edge
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  std::sort(canon.begin(), canon.end(), [](const Undirected& a, const Undirected& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::vector<Triplet> triplets;
  triplets.reserve(canon.size() * 2);
  for (std::size_t i = 0; i < canon.size(); ++i) {
    if (i > 0 && canon[i].u == canon[i - 1].u && canon[i].v == canon[i - 1].v) {
      if (canon[i].w != canon[i - 1].w) {
        throw Error("duplicate edge with conflicting weights");
      }
      continue;  // identical restatement of the same edge
    }
    // Mirror with the identical value so symmetry holds bitwise.
    triplets.push_back({canon[i].u, canon[i].v, canon[i].w});
    triplets.push_back({canon[i].v, canon[i].u, canon[i].w});
  }
  SparseNetwork net;
  net.adj_ = csr_from_triplets(n, std::move(triplets));
  return net;
}

void NetworkCollection::validate() const {
  if (networks.empty()) throw Error("collection must contain at least one network");
  if (static_cast<index_t>(node_names.size()) != n) {
    throw Error("node name table does not match node count");
  }
  for (const auto& net : networks) {
    if (net.n() != n) throw Error("all networks in a collection must share one node count");
  }
}

// --------------------------------------------------------------------------
// Degrees and affinity

DegreeVector degrees(const SparseNetwork& net) {
  return DegreeVector{net.adjacency().row_sums()};
}

SparseNetwork build_affinity(const std::vector<double>& features, index_t n,
                             std::size_t p, const AffinityParams& params) {
  if (params.sigma <= 0.0) throw Error("affinity sigma must be positive");
  if (n < 1) throw Error("affinity needs at least one feature row");
  if (features.size() != static_cast<std::size_t>(n) * p) {
    throw Error("feature buffer size does not match n*p");
  }

  const auto& ops = kernels::active();
  const double denom = 2.0 * params.sigma * params.sigma;
  std::vector<Edge> edges;
  for (index_t i = 0; i < n; ++i) {
    const double* xi = features.data() + static_cast<std::size_t>(i) * p;
    for (index_t j = i + 1; j < n; ++j) {
      const double* xj = features.data() + static_cast<std::size_t>(j) * p;
      const double dist_sq = ops.sum_sq_diff(p, xi, xj);
      const double arg =
          params.exponent == AffinityExponent::norm ? std::sqrt(dist_sq) : dist_sq;
      const double w = std::exp(-arg / denom);
      if (w >= params.floor) edges.push_back({i, j, w});
    }
  }
  return SparseNetwork::from_edges(n, edges);
}

}  // namespace netprop
