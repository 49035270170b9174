#pragma once

#include <cstdint>
#include <vector>

#include "netprop/kernels.hpp"

namespace netprop {

using index_t = std::int32_t;

struct Triplet {
  index_t row;
  index_t col;
  double value;
};

// Square sparse matrix, compressed sparse row, column indices sorted within
// each row. Immutable after construction; only explicit nonzeros are stored.
struct CsrMatrix {
  index_t n = 0;
  std::vector<std::int64_t> row_ptr;  // size n+1
  std::vector<index_t> col;
  std::vector<double> val;

  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(col.size()); }

  // out = A*x; x and out have length n.
  void matvec(const double* x, double* out) const {
    kernels::active().csr_matvec(static_cast<std::size_t>(n), row_ptr.data(), col.data(),
                                 val.data(), x, out);
  }

  // out = A*X for row-major X with ncols columns.
  void matmat(const double* x, std::size_t ncols, double* out) const {
    kernels::active().csr_matmat(static_cast<std::size_t>(n), row_ptr.data(), col.data(),
                                 val.data(), ncols, x, out);
  }

  std::vector<double> row_sums() const;

  // Entry lookup by binary search; absent entries read as 0.
  double at(index_t i, index_t j) const;

  // max |A_ij - A_ji| over all stored positions (0 for an exactly symmetric
  // matrix, including structure).
  double max_asymmetry() const;
};

// Accumulating builder: duplicate (row, col) contributions are summed in
// insertion order. Construction cost is O(nnz) plus per-row column sorts.
CsrMatrix csr_from_triplets(index_t n, std::vector<Triplet> triplets);

}  // namespace netprop
