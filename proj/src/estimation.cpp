#include "convexlse/estimation.hpp"

#include <cmath>
#include <numeric>

#include "convexlse/errors.hpp"
#include "convexlse/kernels.hpp"
#include "convexlse/parallel.hpp"
#include "convexlse/rng.hpp"

namespace convexlse {

Vec Estimator::apply(ConstSpan y) const {
  switch (kind_) {
    case EstimatorKind::Identity:
      return Vec(y.begin(), y.end());
    case EstimatorKind::CoordinateMean: {
      const double mean =
          std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
      return Vec(y.size(), mean);
    }
    case EstimatorKind::LSE:
      return set_->project(y).point;
  }
  return {};
}

RiskEstimate estimate_risk(const Estimator& est, ConstSpan mu, std::size_t n_samples,
                           std::uint64_t seed) {
  if (n_samples < 2) throw ParameterOutOfRange("need at least 2 samples");
  if (est.kind() == EstimatorKind::LSE && est.set().dim() != mu.size())
    throw DimensionMismatch("mu length does not match the estimator's set");

  Vec sq(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    rng::GaussianStream stream(seed, i);
    Vec y(mu.size());
    stream.fill(y);
    kernels::ops().axpy(1.0, mu.data(), y.data(), y.size());
    const Vec fitted = est.apply(y);
    sq[i] = dist_sq(fitted, mu);
  });

  const std::size_t batches = std::min<std::size_t>(10, n_samples);
  Vec batch_mean(batches, 0.0), batch_count(batches, 0.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    mean += sq[i];
    const std::size_t b = i * batches / n_samples;
    batch_mean[b] += sq[i];
    batch_count[b] += 1.0;
  }
  mean /= static_cast<double>(n_samples);
  double ss = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    batch_mean[b] /= batch_count[b];
    const double d = batch_mean[b] - mean;
    ss += d * d;
  }
  RiskEstimate out;
  out.mean_sq_error = mean;
  out.stderr_ = batches > 1 ? std::sqrt(ss / static_cast<double>(batches - 1) /
                                        static_cast<double>(batches))
                            : 0.0;
  out.n_samples = n_samples;
  out.seed = seed;
  return out;
}

}  // namespace convexlse
