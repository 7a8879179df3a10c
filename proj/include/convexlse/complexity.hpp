#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "convexlse/sets.hpp"
#include "convexlse/types.hpp"

namespace convexlse {

// Monte Carlo estimate of f_mu(t) = E sup { z.(v - mu) : v in K, |v - mu| <= t } - t^2/2
// on a grid, with common random numbers across t.
struct ComplexityCurve {
  Vec mu;
  Vec grid;     // sorted, positive
  Vec f_hat;    // m_hat - t^2/2 exactly; -inf below t_c_hat
  Vec stderr_;  // standard error of m_hat (0 at -inf rows)
  Vec m_hat;    // mean of per-sample suprema
  double t_c_hat = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct BracketCertificate {
  double r1 = 0.0;  // t_mu >= r1 on the estimated curve
  double r2 = 0.0;  // t_mu <= r2
};

struct TmuEstimate {
  double t_mu = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<BracketCertificate> bracket;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct ErrorSample {
  double t_star = 0.0;
  double sq_error = 0.0;
  std::uint64_t seed_index = 0;
};

enum class BracketVerdictKind { LowerBound, UpperBound, Inconclusive };

struct BracketVerdict {
  BracketVerdictKind kind = BracketVerdictKind::Inconclusive;
  double value = 0.0;  // the certified bound (r1 or r2)
};

struct ConcentrationRow {
  double x = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double stderr_ = 0.0;
  bool violation = false;
};

struct RiskSandwich {
  bool inside = false;
  double risk = 0.0;
  double risk_stderr = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double t_mu = 0.0;
  double c = 0.0;
};

// Per-sample supremum M(t) along the projection path v(s) = P_K(mu + s z).
// v(s) maximizes z.v - |v - mu|^2 / (2s) over K, so z.(v(s) - mu) equals
// M(|v(s) - mu|) exactly; the radius is root-found in s for each requested t.
// One instance per Gaussian draw; caches path points, not thread-safe.
class ProjectionPath {
 public:
  ProjectionPath(const ConstraintSet& set, ConstSpan mu, ConstSpan z);
  ~ProjectionPath();
  ProjectionPath(ProjectionPath&&) noexcept;
  ProjectionPath& operator=(ProjectionPath&&) noexcept;

  double t_c() const;
  // M(t); -inf when t < t_c - feas_tol. Radius matched to max(feas_tol, 1e-6 t).
  double value_at_radius(double t, double feas_tol = 1e-8);
  int evaluations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double sample_M(const ConstraintSet& set, ConstSpan mu, ConstSpan z, double t,
                double tol = 1e-8);
ErrorSample sample_t_star(const ConstraintSet& set, ConstSpan mu, ConstSpan z);

ComplexityCurve estimate_curve(const ConstraintSet& set, ConstSpan mu, ConstSpan grid,
                               std::size_t n_samples, std::uint64_t seed);

TmuEstimate solve_tmu(const ConstraintSet& set, ConstSpan mu, std::size_t n_samples,
                      std::uint64_t seed, double tol = 1e-3);

BracketVerdict bracket_tmu(const ComplexityCurve& curve, double r1, double r2);

std::vector<ConcentrationRow> concentration_check(const ConstraintSet& set, ConstSpan mu,
                                                  double t_mu, std::size_t n_samples,
                                                  std::uint64_t seed, ConstSpan x_grid);

RiskSandwich risk_vs_tmu_check(const ConstraintSet& set, ConstSpan mu, double t_mu,
                               std::size_t n_samples, std::uint64_t seed, double c = 10.0);

// Default curve grid: log-spaced, 40 points on [max(t_c, 1e-2), 4 sqrt(n)].
Vec default_curve_grid(const ConstraintSet& set, ConstSpan mu, std::size_t points = 40);

}  // namespace convexlse
