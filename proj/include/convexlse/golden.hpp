#pragma once

#include <cmath>
#include <utility>

namespace convexlse {

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

// Golden-section minimization of a unimodal (convex) function on [a, b].
// Runs until the interval drops below x_tol or max_iters evaluations of the
// shrink step, whichever comes first.
template <class F>
GoldenResult golden_minimize(F&& f, double a, double b, int max_iters, double x_tol = 0.0) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  for (; it < max_iters && (b - a) > x_tol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  GoldenResult r;
  r.x = 0.5 * (a + b);
  r.fx = f1 <= f2 ? f1 : f2;
  r.iterations = it;
  return r;
}

}  // namespace convexlse
