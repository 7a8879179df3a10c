#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "convexlse/complexity.hpp"
#include "convexlse/estimation.hpp"
#include "convexlse/types.hpp"

namespace convexlse {

struct SweepRow {
  std::size_t n = 0;
  nlohmann::json params;
  double t_mu_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double risk = 0.0;
  double risk_stderr = 0.0;
};

struct SweepReport {
  std::string experiment;
  std::vector<SweepRow> rows;  // sorted by n
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::uint64_t seed = 0;
  // Wall time is diagnostic only; it never enters serialized output so that
  // re-runs with different worker counts stay byte-identical.
  double wall_time_seconds = 0.0;
};

// OLS of log y on log x. Returns (slope, stderr of slope).
std::pair<double, double> fit_loglog_slope(ConstSpan xs, ConstSpan ys);

SweepReport subspace_sweep(std::vector<std::size_t> p_list, std::size_t n, std::size_t samples,
                           std::uint64_t seed);

struct LassoSweepConfig {
  double ratio = 0.5;        // p = ratio * n
  std::size_t sparsity = 2;  // beta = (1, ..., 1, 0, ..., 0) with this many ones
  double beta_value = 1.0;
  double penalty = 3.0;      // L; delta = L - |beta|_1
  double tmu_tol = 2e-3;
};

SweepReport lasso_sweep(std::vector<std::size_t> n_list, const LassoSweepConfig& config,
                        std::size_t samples, std::uint64_t seed);

// Truth mu_i = scale * i / n; scale = 0 gives the flat (vacuous lower bound)
// case and scale < 0 is rejected.
SweepReport isotonic_sweep(std::vector<std::size_t> n_list, double mu_scale,
                           std::size_t samples, std::uint64_t seed);

SweepReport counterexample_risk(std::vector<std::size_t> n_list, std::size_t samples,
                                std::uint64_t seed);

// Deterministic inputs used by the sweeps, exposed for reuse and tests.
Matrix random_orthonormal_basis(std::size_t n, std::size_t p, std::uint64_t seed);
Matrix rademacher_design(std::size_t n, std::size_t p, std::uint64_t seed);
Vec isotonic_truth(std::size_t n, double scale);

}  // namespace convexlse
