#pragma once

#include <cmath>
#include <cstddef>

#include "convexlse/types.hpp"

// Data-parallel inner loops used throughout the library. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime when
// the CPU supports it. Both variants are equivalence-tested against each
// other. The environment variable CONVEX_LSE_KERNELS=scalar|avx2|auto (or
// set_backend) overrides the automatic choice.

namespace convexlse::kernels {

enum class Backend { Auto, Scalar, Avx2 };

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  double (*sum_sq_diff)(const double*, const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  // out = x + a * z
  void (*add_scaled)(const double*, double, const double*, double*, std::size_t);
  void (*clamp)(const double*, const double*, const double*, double*, std::size_t);
  void (*clamp_uniform)(const double*, double, double, double*, std::size_t);
  double (*box_dist_sq)(const double*, double, double, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
  // column-major A (rows x cols): y = A x  /  y = A^T x
  void (*gemv_col)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*gemv_col_t)(const double*, std::size_t, std::size_t, const double*, double*);
  const char* name;
};

const Ops& ops();
const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when unavailable
void set_backend(Backend b);
Backend active_backend();

}  // namespace convexlse::kernels

namespace convexlse {

inline double dot(ConstSpan a, ConstSpan b) {
  return kernels::ops().dot(a.data(), b.data(), a.size());
}
inline double norm_sq(ConstSpan a) { return kernels::ops().sum_sq(a.data(), a.size()); }
inline double norm(ConstSpan a) { return std::sqrt(norm_sq(a)); }
inline double dist_sq(ConstSpan a, ConstSpan b) {
  return kernels::ops().sum_sq_diff(a.data(), b.data(), a.size());
}
inline double dist(ConstSpan a, ConstSpan b) { return std::sqrt(dist_sq(a, b)); }
inline double l1_norm(ConstSpan a) { return kernels::ops().sum_abs(a.data(), a.size()); }

}  // namespace convexlse
