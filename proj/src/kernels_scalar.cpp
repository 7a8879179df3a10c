#include <algorithm>
#include <cmath>

#include "convexlse/kernels.hpp"

namespace convexlse::kernels {
namespace {

double dot_s(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_s(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double sum_sq_diff_s(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_abs_s(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

void axpy_s(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scaled_s(const double* x, double a, const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * z[i];
}

void clamp_s(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

void clamp_uniform_s(const double* x, double lo, double hi, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(std::max(x[i], lo), hi);
}

double box_dist_sq_s(const double* x, double lo, double hi, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::max(std::max(lo - x[i], x[i] - hi), 0.0);
    acc += d * d;
  }
  return acc;
}

void soft_threshold_s(const double* x, double theta, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::fabs(x[i]) - theta;
    out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
  }
}

void gemv_col_s(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  std::fill(y, y + rows, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a + j * rows;
    const double xj = x[j];
    for (std::size_t i = 0; i < rows; ++i) y[i] += xj * col[i];
  }
}

void gemv_col_t_s(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = dot_s(a + j * rows, x, rows);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table = {
      dot_s,      sum_sq_s,         sum_sq_diff_s, sum_abs_s,  axpy_s,
      add_scaled_s, clamp_s,        clamp_uniform_s, box_dist_sq_s, soft_threshold_s,
      gemv_col_s, gemv_col_t_s,     "scalar",
  };
  return table;
}

}  // namespace convexlse::kernels
