#include "netprop/kernels.hpp"

#include <cmath>

namespace netprop::kernels {
namespace {

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_diff_scalar(std::size_t n, const double* x, const double* y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

double max_abs_diff_scalar(std::size_t n, const double* x, const double* y) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(x[i] - y[i]);
    if (d > best) best = d;
  }
  return best;
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(std::size_t n, const double* x, double a, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void axpby_scalar(std::size_t n, double a, const double* x, double b, const double* y,
                  double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void csr_matvec_scalar(std::size_t nrows, const std::int64_t* row_ptr,
                       const std::int32_t* col, const double* val, const double* x,
                       double* out) {
  for (std::size_t i = 0; i < nrows; ++i) {
    double acc = 0.0;
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      acc += val[k] * x[col[k]];
    }
    out[i] = acc;
  }
}

void csr_matmat_scalar(std::size_t nrows, const std::int64_t* row_ptr,
                       const std::int32_t* col, const double* val, std::size_t ncols,
                       const double* x, double* out) {
  for (std::size_t i = 0; i < nrows; ++i) {
    double* out_row = out + i * ncols;
    for (std::size_t j = 0; j < ncols; ++j) out_row[j] = 0.0;
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const double w = val[k];
      const double* x_row = x + static_cast<std::size_t>(col[k]) * ncols;
      for (std::size_t j = 0; j < ncols; ++j) out_row[j] += w * x_row[j];
    }
  }
}

}  // namespace

const Ops& scalar() {
  static const Ops ops = {
      "scalar",         dot_scalar,  sum_sq_diff_scalar, max_abs_diff_scalar,
      axpy_scalar,      xpay_scalar, axpby_scalar,       csr_matvec_scalar,
      csr_matmat_scalar,
  };
  return ops;
}

}  // namespace netprop::kernels
