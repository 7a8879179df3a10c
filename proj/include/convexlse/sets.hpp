#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "convexlse/linalg.hpp"
#include "convexlse/types.hpp"

namespace convexlse {

enum class SetKind { Subspace, L1Ball, LassoImage, IsotonicCone, Counterexample, Box };

std::string set_kind_name(SetKind k);

struct ProjectionResult {
  Vec point;
  double distance = 0.0;
  int iterations = 0;
  bool converged = true;
};

namespace detail {
struct SetData;
}

// A closed convex constraint set given by an exact projection oracle.
// Immutable after construction; copies share the underlying data and all
// operations are safe to call concurrently.
class ConstraintSet {
 public:
  static ConstraintSet subspace(Matrix basis);
  static ConstraintSet l1_ball(std::size_t n, double radius);
  static ConstraintSet lasso_image(Matrix design, double radius);
  static ConstraintSet isotonic(std::size_t n);
  static ConstraintSet counterexample(std::size_t n);
  static ConstraintSet box(Vec lower, Vec upper);
  static ConstraintSet singleton(Vec point);  // box with lower == upper

  static ConstraintSet from_json(const nlohmann::json& descriptor);
  nlohmann::json descriptor() const;

  SetKind kind() const { return kind_; }
  std::size_t dim() const { return n_; }
  bool bounded() const { return bounded_; }

  ProjectionResult project(ConstSpan y, double tol = 1e-12) const;
  double distance_to(ConstSpan y) const;
  bool contains(ConstSpan y) const;  // tolerance 1e-8 * (1 + |y|)
  bool contains(ConstSpan y, double tol) const;

  // LassoImage only: the coefficient vector behind the projected point.
  Vec lasso_coefficients(ConstSpan y, double tol = 1e-12) const;

  const Matrix& subspace_basis() const;
  const Matrix& lasso_design() const;
  const Matrix& lasso_gram() const;
  double lasso_lipschitz() const;
  double radius() const;  // L1Ball / LassoImage
  ConstSpan box_lower() const;
  ConstSpan box_upper() const;
  // Coordinate bounds of the counterexample set at alpha = 1.
  double counterexample_lo() const;
  double counterexample_hi() const;

 private:
  friend class LassoSolver;
  ConstraintSet(SetKind kind, std::size_t n, bool bounded,
                std::shared_ptr<const detail::SetData> data);
  void check_dim(ConstSpan y) const;

  SetKind kind_;
  std::size_t n_;
  bool bounded_;
  std::shared_ptr<const detail::SetData> data_;
};

// mu_i = alpha n^{-1/4} + alpha theta_i n^{-1/2}
Vec make_counterexample_point(std::size_t n, double alpha, ConstSpan theta);

// Warm-startable solver for min |y - X beta|^2 over |beta|_1 <= L, working in
// coefficient space from c = X^T y. One instance per worker; the bound set is
// shared and immutable.
class LassoSolver {
 public:
  explicit LassoSolver(const ConstraintSet& set, double obj_tol = 1e-12);

  // beta is the warm start on entry and the solution on exit. y_sq = |y|^2
  // anchors the relative-decrease stop. Returns iterations used.
  int solve(ConstSpan c, double y_sq, MutSpan beta);

  bool converged() const { return converged_; }
  // G beta at the returned solution.
  ConstSpan gram_beta() const { return gb_; }

  static constexpr int kMaxIterations = 20000;

 private:
  std::shared_ptr<const detail::SetData> data_;
  double obj_tol_;
  bool converged_ = true;
  Vec gb_, gb_prev_, beta_prev_, v_, gv_, candidate_, scratch_;
};

}  // namespace convexlse
