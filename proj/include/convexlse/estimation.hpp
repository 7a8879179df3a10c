#pragma once

#include <cstdint>
#include <optional>

#include "convexlse/sets.hpp"
#include "convexlse/types.hpp"

namespace convexlse {

enum class EstimatorKind { LSE, CoordinateMean, Identity };

struct RiskEstimate {
  double mean_sq_error = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// An estimator closed over its configuration: the constrained least squares
// estimator P_K(y), the all-coordinates-average comparator, or the identity.
class Estimator {
 public:
  static Estimator lse(ConstraintSet set) { return Estimator(EstimatorKind::LSE, std::move(set)); }
  static Estimator coordinate_mean() { return Estimator(EstimatorKind::CoordinateMean, {}); }
  static Estimator identity() { return Estimator(EstimatorKind::Identity, {}); }

  EstimatorKind kind() const { return kind_; }
  const ConstraintSet& set() const { return *set_; }

  Vec apply(ConstSpan y) const;

 private:
  Estimator(EstimatorKind kind, std::optional<ConstraintSet> set)
      : kind_(kind), set_(std::move(set)) {}
  EstimatorKind kind_;
  std::optional<ConstraintSet> set_;
};

// Monte Carlo mean of |est(mu + Z) - mu|^2 with a 10-batch standard error.
RiskEstimate estimate_risk(const Estimator& est, ConstSpan mu, std::size_t n_samples,
                           std::uint64_t seed);

}  // namespace convexlse
