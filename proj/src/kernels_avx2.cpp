// AVX2+FMA variants of the double-precision kernels. This translation unit
// is compiled with -mavx2 -mfma and reached only through the dispatch table,
// after a runtime CPU check. Reductions use one vector accumulator whose
// lanes are combined in a fixed order, so results are stable run to run.

#include "netprop/kernels.hpp"

#ifdef NETPROP_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace netprop::kernels {
namespace {

double hsum(__m256d v) {
  // lanes summed as ((l0+l2)+(l1+l3))
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return hsum(acc) + tail;
}

double sum_sq_diff_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    tail += d * d;
  }
  return hsum(acc) + tail;
}

double max_abs_diff_avx2(std::size_t n, const double* x, const double* y) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    best = _mm256_max_pd(best, _mm256_andnot_pd(sign_mask, d));
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, best);
  double result = lanes[0];
  for (int l = 1; l < 4; ++l) result = result > lanes[l] ? result : lanes[l];
  for (; i < n; ++i) {
    const double d = std::fabs(x[i] - y[i]);
    if (d > result) result = d;
  }
  return result;
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(std::size_t n, const double* x, double a, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void axpby_avx2(std::size_t n, double a, const double* x, double b, const double* y,
                double* out) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), t));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void csr_matvec_avx2(std::size_t nrows, const std::int64_t* row_ptr,
                     const std::int32_t* col, const double* val, const double* x,
                     double* out) {
  for (std::size_t i = 0; i < nrows; ++i) {
    const std::int64_t begin = row_ptr[i];
    const std::int64_t end = row_ptr[i + 1];
    __m256d acc = _mm256_setzero_pd();
    std::int64_t k = begin;
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + k));
      const __m256d gathered = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), gathered, acc);
    }
    double tail = 0.0;
    for (; k < end; ++k) tail += val[k] * x[col[k]];
    out[i] = hsum(acc) + tail;
  }
}

void csr_matmat_avx2(std::size_t nrows, const std::int64_t* row_ptr,
                     const std::int32_t* col, const double* val, std::size_t ncols,
                     const double* x, double* out) {
  for (std::size_t i = 0; i < nrows; ++i) {
    double* out_row = out + i * ncols;
    std::size_t j = 0;
    for (; j + 4 <= ncols; j += 4) _mm256_storeu_pd(out_row + j, _mm256_setzero_pd());
    for (; j < ncols; ++j) out_row[j] = 0.0;
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const __m256d w = _mm256_set1_pd(val[k]);
      const double* x_row = x + static_cast<std::size_t>(col[k]) * ncols;
      j = 0;
      for (; j + 4 <= ncols; j += 4) {
        _mm256_storeu_pd(out_row + j, _mm256_fmadd_pd(w, _mm256_loadu_pd(x_row + j),
                                                      _mm256_loadu_pd(out_row + j)));
      }
      for (; j < ncols; ++j) out_row[j] += val[k] * x_row[j];
    }
  }
}

}  // namespace

const Ops* avx2() {
  static const Ops ops = {
      "avx2",         dot_avx2,  sum_sq_diff_avx2, max_abs_diff_avx2,
      axpy_avx2,      xpay_avx2, axpby_avx2,       csr_matvec_avx2,
      csr_matmat_avx2,
  };
  return &ops;
}

}  // namespace netprop::kernels

#endif  // NETPROP_HAVE_AVX2
