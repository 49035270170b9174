#include "netprop/operators.hpp"

#include <cmath>

#include "netprop/errors.hpp"

namespace netprop {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::random_walk: return "random-walk";
    case OperatorKind::sym_normalized: return "symmetric-normalized";
    case OperatorKind::unnorm_laplacian: return "unnormalized-laplacian";
    case OperatorKind::sym_laplacian: return "symmetric-laplacian";
  }
  return "?";
}

namespace {

// Entries of (1/m) sum_k D_k^-1/2 W_k D_k^-1/2. The two orientations of an
// undirected edge receive the bitwise-identical value: the scaling product
// s_i*s_j is computed first, so symmetry is exact, not approximate.
std::vector<Triplet> sym_normalized_triplets(const NetworkCollection& coll) {
  const double inv_m = 1.0 / static_cast<double>(coll.m());
  std::vector<Triplet> triplets;
  for (const auto& net : coll.networks) {
    const CsrMatrix& w = net.adjacency();
    const std::vector<double> deg = w.row_sums();
    std::vector<double> inv_sqrt(deg.size(), 0.0);
    for (std::size_t i = 0; i < deg.size(); ++i) {
      if (deg[i] > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(deg[i]);
    }
    for (index_t i = 0; i < w.n; ++i) {
      for (std::int64_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
        const index_t j = w.col[k];
        const double scale = inv_sqrt[i] * inv_sqrt[j];
        if (scale == 0.0) continue;  // node isolated in this network
        triplets.push_back({i, j, w.val[k] * scale * inv_m});
      }
    }
  }
  return triplets;
}

}  // namespace

PropagationOperator integrate_random_walk(const NetworkCollection& coll) {
  coll.validate();
  const double inv_m = 1.0 / static_cast<double>(coll.m());
  std::vector<Triplet> triplets;
  for (const auto& net : coll.networks) {
    const CsrMatrix& w = net.adjacency();
    const std::vector<double> deg = w.row_sums();
    for (index_t i = 0; i < w.n; ++i) {
      if (deg[i] <= 0.0) continue;  // zero row for this network's term
      const double inv_d = 1.0 / deg[i];
      for (std::int64_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
        triplets.push_back({i, w.col[k], w.val[k] * inv_d * inv_m});
      }
    }
  }
  return {OperatorKind::random_walk, coll.n, coll.m(), csr_from_triplets(coll.n, std::move(triplets))};
}

PropagationOperator integrate_symmetric(const NetworkCollection& coll) {
  coll.validate();
  return {OperatorKind::sym_normalized, coll.n, coll.m(),
          csr_from_triplets(coll.n, sym_normalized_triplets(coll))};
}

PropagationOperator integrate_unnormalized(const NetworkCollection& coll) {
  coll.validate();
  const double inv_m = 1.0 / static_cast<double>(coll.m());
  std::vector<Triplet> triplets;
  for (const auto& net : coll.networks) {
    const CsrMatrix& w = net.adjacency();
    const std::vector<double> deg = w.row_sums();
    for (index_t i = 0; i < w.n; ++i) {
      if (deg[i] > 0.0) triplets.push_back({i, i, deg[i] * inv_m});
      for (std::int64_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
        triplets.push_back({i, w.col[k], -w.val[k] * inv_m});
      }
    }
  }
  return {OperatorKind::unnorm_laplacian, coll.n, coll.m(),
          csr_from_triplets(coll.n, std::move(triplets))};
}

PropagationOperator integrate_sym_laplacian(const NetworkCollection& coll) {
  coll.validate();
  std::vector<Triplet> triplets = sym_normalized_triplets(coll);
  for (auto& t : triplets) t.value = -t.value;
  // Every network contributes I regardless of isolated nodes, so the average
  // identity term is exactly I and the result equals I - S_sym entrywise.
  triplets.reserve(triplets.size() + static_cast<std::size_t>(coll.n));
  for (index_t i = 0; i < coll.n; ++i) triplets.push_back({i, i, 1.0});
  return {OperatorKind::sym_laplacian, coll.n, coll.m(),
          csr_from_triplets(coll.n, std::move(triplets))};
}

}  // namespace netprop
