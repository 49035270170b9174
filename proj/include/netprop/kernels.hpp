#pragma once

#include <cstddef>
#include <cstdint>

namespace netprop::kernels {

// Double-precision inner loops shared by the operator builders and the
// solvers. Every entry exists in a scalar reference form; on x86-64 an AVX2
// variant is compiled alongside and selected at runtime when the CPU
// supports it. Each implementation uses a fixed reduction order, so results
// are reproducible for a given selection; scalar and SIMD variants agree to
// rounding and are equivalence-tested against each other.
struct Ops {
  const char* name;

  // sum_i x[i]*y[i]
  double (*dot)(std::size_t n, const double* x, const double* y);
  // sum_i (x[i]-y[i])^2
  double (*sum_sq_diff)(std::size_t n, const double* x, const double* y);
  // max_i |x[i]-y[i]|
  double (*max_abs_diff)(std::size_t n, const double* x, const double* y);
  // y += a*x
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  // y = x + a*y
  void (*xpay)(std::size_t n, const double* x, double a, double* y);
  // out = a*x + b*y   (out may alias x or y)
  void (*axpby)(std::size_t n, double a, const double* x, double b, const double* y,
                double* out);
  // out = A*x for CSR A (nrows rows, sorted columns)
  void (*csr_matvec)(std::size_t nrows, const std::int64_t* row_ptr,
                     const std::int32_t* col, const double* val, const double* x,
                     double* out);
  // out = A*X for row-major X with ncols columns; out is nrows x ncols
  void (*csr_matmat)(std::size_t nrows, const std::int64_t* row_ptr,
                     const std::int32_t* col, const double* val, std::size_t ncols,
                     const double* x, double* out);
};

// Portable reference implementation.
const Ops& scalar();

// AVX2+FMA implementation, or nullptr when not compiled in.
const Ops* avx2();

// Runtime-selected implementation. Honors the NETPROP_KERNELS environment
// variable ("scalar" or "avx2") for forcing a path; otherwise picks the
// widest variant the CPU supports.
const Ops& active();

}  // namespace netprop::kernels
