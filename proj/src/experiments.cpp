#include "convexlse/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "convexlse/errors.hpp"
#include "convexlse/rng.hpp"

namespace convexlse {

namespace {

constexpr std::uint64_t kTagTmu = 1;
constexpr std::uint64_t kTagRisk = 2;
constexpr std::uint64_t kTagDesign = 3;
constexpr std::uint64_t kTagBasis = 4;
constexpr std::uint64_t kTagMeanRisk = 5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void fit_report_slope(SweepReport& report, ConstSpan xs, ConstSpan ys) {
  const auto [slope, stderr_] = fit_loglog_slope(xs, ys);
  report.slope = slope;
  report.slope_stderr = stderr_;
}

}  // namespace

std::pair<double, double> fit_loglog_slope(ConstSpan xs, ConstSpan ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("x/y length mismatch");
  if (xs.size() < 3) throw TooFewPoints("log-log fit needs at least 3 points");
  const std::size_t m = xs.size();
  Vec lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw NonPositiveValue("log-log fit needs positive values");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw NonPositiveValue("log-log fit needs at least two distinct x");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - intercept - slope * lx[i];
    rss += r * r;
  }
  const double var = rss / static_cast<double>(m - 2);
  return {slope, std::sqrt(var / sxx)};
}

Matrix random_orthonormal_basis(std::size_t n, std::size_t p, std::uint64_t seed) {
  Matrix basis(n, p);
  rng::GaussianStream stream(seed, 0);
  for (std::size_t j = 0; j < p; ++j) stream.fill(MutSpan(basis.col(j), n));
  orthonormalize_columns(basis);
  return basis;
}

Matrix rademacher_design(std::size_t n, std::size_t p, std::uint64_t seed) {
  Matrix x(n, p);
  rng::GaussianStream stream(seed, 0);
  for (std::size_t j = 0; j < p; ++j) {
    double* col = x.col(j);
    for (std::size_t i = 0; i < n; ++i) col[i] = stream.next() < 0.0 ? -1.0 : 1.0;
  }
  return x;
}

Vec isotonic_truth(std::size_t n, double scale) {
  if (scale < 0.0) throw NonMonotoneTruth("isotonic truth requires scale >= 0");
  Vec mu(n);
  for (std::size_t i = 0; i < n; ++i)
    mu[i] = scale * static_cast<double>(i + 1) / static_cast<double>(n);
  return mu;
}

SweepReport subspace_sweep(std::vector<std::size_t> p_list, std::size_t n, std::size_t samples,
                           std::uint64_t seed) {
  const auto start = Clock::now();
  std::sort(p_list.begin(), p_list.end());
  SweepReport report;
  report.experiment = "subspace";
  report.seed = seed;
  Vec ps, tmus;
  for (std::size_t p : p_list) {
    if (p == 0 || p > n) throw ParameterOutOfRange("subspace sweep needs 1 <= p <= n");
    const ConstraintSet set =
        ConstraintSet::subspace(random_orthonormal_basis(n, p, rng::derive_seed(seed, kTagBasis, p)));
    const Vec mu(n, 0.0);
    const TmuEstimate tmu =
        solve_tmu(set, mu, samples, rng::derive_seed(seed, kTagTmu, p), 2e-3);
    const RiskEstimate risk =
        estimate_risk(Estimator::lse(set), mu, samples, rng::derive_seed(seed, kTagRisk, p));
    SweepRow row;
    row.n = n;
    row.params = {{"p", p}};
    row.t_mu_hat = tmu.t_mu;
    row.ci_low = tmu.ci_low;
    row.ci_high = tmu.ci_high;
    row.risk = risk.mean_sq_error;
    row.risk_stderr = risk.stderr_;
    report.rows.push_back(std::move(row));
    ps.push_back(static_cast<double>(p));
    tmus.push_back(tmu.t_mu);
  }
  // Rate in the subspace dimension, not the ambient one.
  fit_report_slope(report, ps, tmus);
  report.wall_time_seconds = seconds_since(start);
  return report;
}

SweepReport lasso_sweep(std::vector<std::size_t> n_list, const LassoSweepConfig& config,
                        std::size_t samples, std::uint64_t seed) {
  const auto start = Clock::now();
  std::sort(n_list.begin(), n_list.end());
  SweepReport report;
  report.experiment = "lasso";
  report.seed = seed;
  Vec ns, tmus;
  for (std::size_t n : n_list) {
    const std::size_t p =
        std::max<std::size_t>(1, static_cast<std::size_t>(config.ratio * static_cast<double>(n)));
    if (config.sparsity > p) throw ParameterOutOfRange("sparsity exceeds p");
    // The design and beta depend on (seed, n) only, so the delta regimes see
    // identical problems and differ in the penalty alone.
    Matrix x = rademacher_design(n, p, rng::derive_seed(seed, kTagDesign, n));
    for (std::size_t j = 0; j < p; ++j) {
      const double diag = kernels::ops().sum_sq(x.col(j), n) / static_cast<double>(n);
      if (std::fabs(diag - 1.0) > 1e-8)
        throw BadDesign("design must have unit diagonal in X^T X / n");
    }
    Vec beta(p, 0.0);
    for (std::size_t j = 0; j < config.sparsity; ++j) beta[j] = config.beta_value;
    Vec mu(n);
    matvec(x, beta, mu);
    const double beta_l1 = l1_norm(beta);
    const ConstraintSet set = ConstraintSet::lasso_image(std::move(x), config.penalty);
    const TmuEstimate tmu =
        solve_tmu(set, mu, samples, rng::derive_seed(seed, kTagTmu, n), config.tmu_tol);
    const RiskEstimate risk =
        estimate_risk(Estimator::lse(set), mu, samples, rng::derive_seed(seed, kTagRisk, n));
    SweepRow row;
    row.n = n;
    row.params = {{"p", p},
                  {"L", config.penalty},
                  {"beta_l1", beta_l1},
                  {"delta", config.penalty - beta_l1},
                  {"s", config.sparsity}};
    row.t_mu_hat = tmu.t_mu;
    row.ci_low = tmu.ci_low;
    row.ci_high = tmu.ci_high;
    row.risk = risk.mean_sq_error;
    row.risk_stderr = risk.stderr_;
    report.rows.push_back(std::move(row));
    ns.push_back(static_cast<double>(n));
    tmus.push_back(tmu.t_mu);
  }
  fit_report_slope(report, ns, tmus);
  report.wall_time_seconds = seconds_since(start);
  return report;
}

SweepReport isotonic_sweep(std::vector<std::size_t> n_list, double mu_scale,
                           std::size_t samples, std::uint64_t seed) {
  const auto start = Clock::now();
  std::sort(n_list.begin(), n_list.end());
  SweepReport report;
  report.experiment = "isotonic";
  report.seed = seed;
  Vec ns, tmus;
  for (std::size_t n : n_list) {
    const Vec mu = isotonic_truth(n, mu_scale);
    const ConstraintSet set = ConstraintSet::isotonic(n);
    const TmuEstimate tmu =
        solve_tmu(set, mu, samples, rng::derive_seed(seed, kTagTmu, n), 2e-3);
    const RiskEstimate risk =
        estimate_risk(Estimator::lse(set), mu, samples, rng::derive_seed(seed, kTagRisk, n));
    SweepRow row;
    row.n = n;
    const double d = std::max(mu.empty() ? 0.0 : mu.back() - mu.front(), 1.0);
    row.params = {{"A", mu_scale}, {"B", mu_scale}, {"D", d}, {"scale", mu_scale}};
    row.t_mu_hat = tmu.t_mu;
    row.ci_low = tmu.ci_low;
    row.ci_high = tmu.ci_high;
    row.risk = risk.mean_sq_error;
    row.risk_stderr = risk.stderr_;
    report.rows.push_back(std::move(row));
    if (tmu.t_mu > 0.0) {
      ns.push_back(static_cast<double>(n));
      tmus.push_back(tmu.t_mu);
    }
  }
  fit_report_slope(report, ns, tmus);
  report.wall_time_seconds = seconds_since(start);
  return report;
}

SweepReport counterexample_risk(std::vector<std::size_t> n_list, std::size_t samples,
                                std::uint64_t seed) {
  const auto start = Clock::now();
  if (n_list.empty()) throw ParameterOutOfRange("n_list must be nonempty");
  std::sort(n_list.begin(), n_list.end());
  SweepReport report;
  report.experiment = "counterexample";
  report.seed = seed;
  Vec ns, risks;
  for (std::size_t n : n_list) {
    const ConstraintSet set = ConstraintSet::counterexample(n);
    const Vec mu(n, 0.0);  // alpha = 0 member of K
    const RiskEstimate lse_risk =
        estimate_risk(Estimator::lse(set), mu, samples, rng::derive_seed(seed, kTagRisk, n));
    const RiskEstimate mean_risk = estimate_risk(Estimator::coordinate_mean(), mu, samples,
                                                 rng::derive_seed(seed, kTagMeanRisk, n));
    SweepRow row;
    row.n = n;
    row.params = {{"mean_risk", mean_risk.mean_sq_error},
                  {"mean_risk_stderr", mean_risk.stderr_}};
    // No t_mu is solved here; the slope tracks the LSE risk itself.
    row.t_mu_hat = std::numeric_limits<double>::quiet_NaN();
    row.ci_low = std::numeric_limits<double>::quiet_NaN();
    row.ci_high = std::numeric_limits<double>::quiet_NaN();
    row.risk = lse_risk.mean_sq_error;
    row.risk_stderr = lse_risk.stderr_;
    report.rows.push_back(std::move(row));
    ns.push_back(static_cast<double>(n));
    risks.push_back(lse_risk.mean_sq_error);
  }
  fit_report_slope(report, ns, risks);
  report.wall_time_seconds = seconds_since(start);
  return report;
}

}  // namespace convexlse
