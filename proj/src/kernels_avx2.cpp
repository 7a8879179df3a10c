#include <algorithm>
#include <cmath>

#include "convexlse/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace convexlse::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

double dot_v(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_v(const double* a, std::size_t n) { return dot_v(a, a, n); }

double sum_sq_diff_v(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    r += d * d;
  }
  return r;
}

double sum_abs_v(const double* a, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
  double r = hsum(acc);
  for (; i < n; ++i) r += std::fabs(a[i]);
  return r;
}

void axpy_v(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_scaled_v(const double* x, double a, const double* z, double* out, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(av, _mm256_loadu_pd(z + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = x[i] + a * z[i];
}

void clamp_v(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    v = _mm256_max_pd(v, _mm256_loadu_pd(lo + i));
    v = _mm256_min_pd(v, _mm256_loadu_pd(hi + i));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

void clamp_uniform_v(const double* x, double lo, double hi, double* out, std::size_t n) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_min_pd(_mm256_max_pd(_mm256_loadu_pd(x + i), lov), hiv);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = std::min(std::max(x[i], lo), hi);
}

double box_dist_sq_v(const double* x, double lo, double hi, std::size_t n) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d d = _mm256_max_pd(_mm256_max_pd(_mm256_sub_pd(lov, v), _mm256_sub_pd(v, hiv)), zero);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double d = std::max(std::max(lo - x[i], x[i] - hi), 0.0);
    r += d * d;
  }
  return r;
}

void soft_threshold_v(const double* x, double theta, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d th = _mm256_set1_pd(theta);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(sign, v), th), zero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(sign, v)));
  }
  for (; i < n; ++i) {
    const double mag = std::fabs(x[i]) - theta;
    out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
  }
}

void gemv_col_v(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  std::fill(y, y + rows, 0.0);
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    const double* c0 = a + (j + 0) * rows;
    const double* c1 = a + (j + 1) * rows;
    const double* c2 = a + (j + 2) * rows;
    const double* c3 = a + (j + 3) * rows;
    const __m256d x0 = _mm256_set1_pd(x[j + 0]);
    const __m256d x1 = _mm256_set1_pd(x[j + 1]);
    const __m256d x2 = _mm256_set1_pd(x[j + 2]);
    const __m256d x3 = _mm256_set1_pd(x[j + 3]);
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
      __m256d acc = _mm256_loadu_pd(y + i);
      acc = _mm256_fmadd_pd(x0, _mm256_loadu_pd(c0 + i), acc);
      acc = _mm256_fmadd_pd(x1, _mm256_loadu_pd(c1 + i), acc);
      acc = _mm256_fmadd_pd(x2, _mm256_loadu_pd(c2 + i), acc);
      acc = _mm256_fmadd_pd(x3, _mm256_loadu_pd(c3 + i), acc);
      _mm256_storeu_pd(y + i, acc);
    }
    for (; i < rows; ++i)
      y[i] += x[j] * c0[i] + x[j + 1] * c1[i] + x[j + 2] * c2[i] + x[j + 3] * c3[i];
  }
  for (; j < cols; ++j) axpy_v(x[j], a + j * rows, y, rows);
}

void gemv_col_t_v(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = dot_v(a + j * rows, x, rows);
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops table = {
      dot_v,      sum_sq_v,     sum_sq_diff_v, sum_abs_v,  axpy_v,
      add_scaled_v, clamp_v,    clamp_uniform_v, box_dist_sq_v, soft_threshold_v,
      gemv_col_v, gemv_col_t_v, "avx2",
  };
  return &table;
}

}  // namespace convexlse::kernels

#else

namespace convexlse::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace convexlse::kernels

#endif
