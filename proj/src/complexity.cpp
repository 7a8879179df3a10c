#include "convexlse/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "convexlse/errors.hpp"
#include "convexlse/kernels.hpp"
#include "convexlse/parallel.hpp"
#include "convexlse/rng.hpp"

namespace convexlse {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double radius_match_tol(double t, double feas_tol) {
  return std::max(std::max(feas_tol, 1e-8), 1e-6 * t);
}
}  // namespace

// ---------------------------------------------------------------------------
// ProjectionPath

struct ProjectionPath::Impl {
  struct Pt {
    double s = 0.0;
    double r = 0.0;
    double val = 0.0;
  };

  const ConstraintSet* set = nullptr;
  Vec mu, z;
  double z_dot_mu = 0.0, mu_sq = 0.0, z_sq = 0.0;
  std::vector<Pt> pts;  // sorted by s; r verified nondecreasing
  double mono_slack = 1e-9;
  bool degenerate = false;
  std::vector<Pt> grid_pts;  // fallback cache, only on monotonicity violation
  bool plateau = false;
  double plateau_r = 0.0, plateau_val = 0.0;
  double t_c = 0.0, value0 = 0.0;
  int evals = 0;

  // lasso fast path: everything stays in coefficient space
  bool lasso = false;
  std::unique_ptr<LassoSolver> solver;
  Vec c_mu, c_z, c_buf, beta;

  Vec ybuf;

  Impl(const ConstraintSet& s_, ConstSpan mu_, ConstSpan z_) : set(&s_) {
    if (mu_.size() != set->dim() || z_.size() != set->dim())
      throw DimensionMismatch("mu/z length does not match set dimension");
    mu.assign(mu_.begin(), mu_.end());
    z.assign(z_.begin(), z_.end());
    z_dot_mu = dot(z, mu);
    mu_sq = norm_sq(mu);
    z_sq = norm_sq(z);
    if (set->kind() == SetKind::LassoImage && set->radius() > 0.0) {
      lasso = true;
      // Iterative projections carry solver noise; widen the monotonicity
      // slack accordingly.
      mono_slack = 1e-6;
      const Matrix& x = set->lasso_design();
      c_mu.assign(x.cols(), 0.0);
      c_z.assign(x.cols(), 0.0);
      c_buf.assign(x.cols(), 0.0);
      beta.assign(x.cols(), 0.0);
      matvec_t(x, mu, c_mu);
      matvec_t(x, z, c_z);
      solver = std::make_unique<LassoSolver>(*set, 1e-11);
    } else {
      ybuf.assign(set->dim(), 0.0);
    }
    const Pt origin = eval(0.0);
    pts.push_back(origin);
    t_c = origin.r;
    value0 = origin.val;
  }

  Pt eval(double s) {
    ++evals;
    Pt p;
    p.s = s;
    if (lasso) {
      kernels::ops().add_scaled(c_mu.data(), s, c_z.data(), c_buf.data(), c_buf.size());
      const double y_sq = mu_sq + 2.0 * s * z_dot_mu + s * s * z_sq;
      solver->solve(c_buf, y_sq, beta);
      const ConstSpan gb = solver->gram_beta();
      const double r_sq = dot(beta, gb) - 2.0 * dot(beta, c_mu) + mu_sq;
      p.r = std::sqrt(std::max(0.0, r_sq));
      p.val = dot(beta, c_z) - z_dot_mu;
    } else {
      kernels::ops().add_scaled(mu.data(), s, z.data(), ybuf.data(), ybuf.size());
      const ProjectionResult pr = set->project(ybuf, 1e-12);
      p.r = dist(pr.point, mu);
      p.val = dot(z, pr.point) - z_dot_mu;
    }
    return p;
  }

  // Insert keeping s-order; flag a radius monotonicity violation beyond slack.
  Pt insert(const Pt& p) {
    auto it = std::lower_bound(pts.begin(), pts.end(), p.s,
                               [](const Pt& a, double s) { return a.s < s; });
    const double slack = mono_slack * (1.0 + std::fabs(p.r));
    if (it != pts.begin() && (it - 1)->r > p.r + slack) degenerate = true;
    if (it != pts.end() && p.r > it->r + slack) degenerate = true;
    pts.insert(it, p);
    return p;
  }

  // Grid fallback: M(t) from below over a fixed 512-point geometric sweep.
  double degenerate_value(double t, double tau) {
    if (grid_pts.empty()) {
      double s_max = std::max(1.0, pts.back().s);
      grid_pts.reserve(513);
      grid_pts.push_back(pts.front());  // s = 0
      for (int k = 0; k < 512; ++k) {
        const double frac = static_cast<double>(k + 1) / 512.0;
        grid_pts.push_back(eval(s_max * std::pow(1e12, frac - 1.0)));
      }
    }
    double best = -kInf;
    if (t >= t_c - tau) best = value0;
    for (const Pt& p : grid_pts)
      if (p.r <= t + tau) best = std::max(best, p.val);
    return best;
  }

  double value_at(double t, double feas_tol) {
    if (t < 0.0) throw NegativeRadius("sample_M requires t >= 0");
    if (t < t_c - feas_tol) return -kInf;
    const double tau = radius_match_tol(t, feas_tol);
    if (t <= t_c + tau) return value0;
    if (degenerate) return degenerate_value(t, tau);
    if (plateau && t >= plateau_r - tau) return plateau_val;

    // Bracket the target radius from the cache (r is monotone in s).
    auto hi_it = std::lower_bound(pts.begin(), pts.end(), t,
                                  [](const Pt& a, double r) { return a.r < r; });
    Pt lo = (hi_it == pts.begin()) ? pts.front() : *(hi_it - 1);
    Pt hi;
    bool have_hi = hi_it != pts.end();
    if (have_hi) hi = *hi_it;

    if (t - lo.r <= tau && lo.r <= t) return lo.val;
    if (have_hi && hi.r - t <= tau) return hi.val;

    if (!have_hi) {
      // Doubling search for an upper bracket, from s = 1 when cold.
      Pt prev = lo;
      double s = lo.s >= 1.0 ? 2.0 * lo.s : 1.0;
      while (true) {
        const Pt cur = insert(eval(s));
        if (degenerate) return degenerate_value(t, tau);
        if (cur.r >= t) {
          hi = cur;
          break;
        }
        if (prev.s > 0.0 && s >= 2.0 * prev.s &&
            cur.r - prev.r <= 1e-10 * (1.0 + std::fabs(cur.r))) {
          // Radius stalled below t: bounded reach in this direction, and the
          // value has stalled at sup_K z.(v - mu) with it.
          plateau = true;
          plateau_r = cur.r;
          plateau_val = cur.val;
          return cur.val;
        }
        prev = cur;
        if (s > 1e18) {
          plateau = true;
          plateau_r = cur.r;
          plateau_val = cur.val;
          return cur.val;
        }
        s *= 2.0;
      }
      if (hi.r - t <= tau) return hi.val;
      lo = prev;
    }

    // Safeguarded false position on r(s) = t, alternating with bisection.
    for (int iter = 0; iter < 200; ++iter) {
      const double width = hi.s - lo.s;
      if (width <= 1e-12 * std::max(1.0, hi.s)) break;
      double s_next;
      if (iter % 2 == 0 && hi.r > lo.r) {
        s_next = lo.s + (t - lo.r) * width / (hi.r - lo.r);
        s_next = std::clamp(s_next, lo.s + 0.05 * width, hi.s - 0.05 * width);
      } else {
        s_next = lo.s + 0.5 * width;
      }
      const Pt cur = insert(eval(s_next));
      if (degenerate) return degenerate_value(t, tau);
      if (std::fabs(cur.r - t) <= tau) return cur.val;
      if (cur.r < t)
        lo = cur;
      else
        hi = cur;
    }
    return (t - lo.r <= hi.r - t) ? lo.val : hi.val;
  }
};

ProjectionPath::ProjectionPath(const ConstraintSet& set, ConstSpan mu, ConstSpan z)
    : impl_(std::make_unique<Impl>(set, mu, z)) {}
ProjectionPath::~ProjectionPath() = default;
ProjectionPath::ProjectionPath(ProjectionPath&&) noexcept = default;
ProjectionPath& ProjectionPath::operator=(ProjectionPath&&) noexcept = default;

double ProjectionPath::t_c() const { return impl_->t_c; }
double ProjectionPath::value_at_radius(double t, double feas_tol) {
  return impl_->value_at(t, feas_tol);
}
int ProjectionPath::evaluations() const { return impl_->evals; }

// ---------------------------------------------------------------------------

double sample_M(const ConstraintSet& set, ConstSpan mu, ConstSpan z, double t, double tol) {
  if (t < 0.0) throw NegativeRadius("sample_M requires t >= 0");
  if (tol <= 0.0) throw ParameterOutOfRange("tolerance must be positive");
  ProjectionPath path(set, mu, z);
  return path.value_at_radius(t, tol);
}

ErrorSample sample_t_star(const ConstraintSet& set, ConstSpan mu, ConstSpan z) {
  if (mu.size() != set.dim() || z.size() != set.dim())
    throw DimensionMismatch("mu/z length does not match set dimension");
  Vec y(mu.size());
  kernels::ops().add_scaled(mu.data(), 1.0, z.data(), y.data(), y.size());
  const ProjectionResult pr = set.project(y, 1e-12);
  ErrorSample out;
  out.t_star = dist(pr.point, mu);
  out.sq_error = out.t_star * out.t_star;
  return out;
}

// ---------------------------------------------------------------------------

ComplexityCurve estimate_curve(const ConstraintSet& set, ConstSpan mu, ConstSpan grid,
                               std::size_t n_samples, std::uint64_t seed) {
  if (grid.empty()) throw EmptyGrid("curve grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw ParameterOutOfRange("grid points must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ParameterOutOfRange("grid points must be strictly increasing");
  }
  if (n_samples < 2) throw ParameterOutOfRange("need at least 2 samples");
  if (mu.size() != set.dim()) throw DimensionMismatch("mu length does not match set dimension");

  const std::size_t m = grid.size();
  Vec values(n_samples * m);
  parallel_for(n_samples, [&](std::size_t i) {
    rng::GaussianStream stream(seed, i);
    Vec z(set.dim());
    stream.fill(z);
    ProjectionPath path(set, mu, z);
    for (std::size_t j = 0; j < m; ++j) values[i * m + j] = path.value_at_radius(grid[j]);
  });

  ComplexityCurve curve;
  curve.mu.assign(mu.begin(), mu.end());
  curve.grid.assign(grid.begin(), grid.end());
  curve.f_hat.resize(m);
  curve.stderr_.resize(m);
  curve.m_hat.resize(m);
  curve.t_c_hat = set.distance_to(mu);
  curve.n_samples = n_samples;
  curve.seed = seed;
  for (std::size_t j = 0; j < m; ++j) {
    bool finite = true;
    double mean = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double v = values[i * m + j];
      if (v == -kInf) {
        finite = false;
        break;
      }
      mean += v;
    }
    if (!finite) {
      curve.m_hat[j] = -kInf;
      curve.f_hat[j] = -kInf;
      curve.stderr_[j] = 0.0;
      continue;
    }
    mean /= static_cast<double>(n_samples);
    double ss = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double d = values[i * m + j] - mean;
      ss += d * d;
    }
    curve.m_hat[j] = mean;
    curve.stderr_[j] =
        std::sqrt(ss / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
    curve.f_hat[j] = mean - 0.5 * grid[j] * grid[j];
  }
  return curve;
}

// ---------------------------------------------------------------------------

namespace {

struct ProbeRecord {
  double t = 0.0;
  double f_bar = 0.0;       // mean F(t) over all samples
  Vec batch_f;              // per-batch F(t)
};

class TmuSearch {
 public:
  TmuSearch(const ConstraintSet& set, ConstSpan mu, std::size_t n_samples, std::uint64_t seed)
      : set_(set), mu_(mu), n_samples_(n_samples), seed_(seed),
        batches_(std::min<std::size_t>(10, n_samples)) {
    paths_.resize(n_samples);
    values_.resize(n_samples);
  }

  double probe(double t) {
    parallel_for(n_samples_, [&](std::size_t i) {
      if (!paths_[i]) {
        rng::GaussianStream stream(seed_, i);
        Vec z(set_.dim());
        stream.fill(z);
        paths_[i] = std::make_unique<ProjectionPath>(set_, mu_, z);
      }
      values_[i] = paths_[i]->value_at_radius(t);
    });
    ProbeRecord rec;
    rec.t = t;
    rec.batch_f.assign(batches_, 0.0);
    Vec batch_count(batches_, 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < n_samples_; ++i) {
      mean += values_[i];
      const std::size_t b = i * batches_ / n_samples_;
      rec.batch_f[b] += values_[i];
      batch_count[b] += 1.0;
    }
    mean /= static_cast<double>(n_samples_);
    const double penalty = 0.5 * t * t;
    for (std::size_t b = 0; b < batches_; ++b)
      rec.batch_f[b] = rec.batch_f[b] / batch_count[b] - penalty;
    rec.f_bar = mean - penalty;
    records_.push_back(rec);
    return rec.f_bar;
  }

  const std::vector<ProbeRecord>& records() const { return records_; }
  std::size_t batches() const { return batches_; }

 private:
  const ConstraintSet& set_;
  ConstSpan mu_;
  std::size_t n_samples_;
  std::uint64_t seed_;
  std::size_t batches_;
  std::vector<std::unique_ptr<ProjectionPath>> paths_;
  Vec values_;
  std::vector<ProbeRecord> records_;
};

}  // namespace

TmuEstimate solve_tmu(const ConstraintSet& set, ConstSpan mu, std::size_t n_samples,
                      std::uint64_t seed, double tol) {
  if (n_samples < 2) throw ParameterOutOfRange("need at least 2 samples");
  if (tol <= 0.0) throw ParameterOutOfRange("tolerance must be positive");
  if (mu.size() != set.dim()) throw DimensionMismatch("mu length does not match set dimension");

  TmuSearch search(set, mu, n_samples, seed);
  const double t_c = set.distance_to(mu);

  // Bracket: double t_hi from max(1, t_c) until the averaged F decreases.
  double f_prev = search.probe(t_c);
  double t_hi = std::max(1.0, t_c);
  if (t_hi <= t_c) t_hi = 2.0 * t_c;
  while (true) {
    const double f = search.probe(t_hi);
    if (f < f_prev) break;
    f_prev = f;
    t_hi *= 2.0;
    if (t_hi > 1e6) throw BracketFailure("averaged F still increasing at t = 1e6");
  }

  // Golden-section maximization of the common-random-numbers average, which
  // inherits concavity from the per-sample objectives.
  constexpr double inv_phi = 0.6180339887498948482;
  double a = t_c, b = t_hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = search.probe(x1);
  double f2 = search.probe(x2);
  while (b - a > tol * std::max(1.0, b)) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = search.probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = search.probe(x2);
    }
  }

  TmuEstimate est;
  est.t_mu = 0.5 * (a + b);
  est.n_samples = n_samples;
  est.seed = seed;
  est.bracket = BracketCertificate{a, b};

  // Batch maximizers over the probed points; their spread is the interval.
  double lo = est.t_mu, hi = est.t_mu;
  for (std::size_t bi = 0; bi < search.batches(); ++bi) {
    double best_f = -kInf, best_t = est.t_mu;
    for (const ProbeRecord& rec : search.records()) {
      if (rec.batch_f[bi] > best_f) {
        best_f = rec.batch_f[bi];
        best_t = rec.t;
      }
    }
    lo = std::min(lo, best_t);
    hi = std::max(hi, best_t);
  }
  est.ci_low = lo;
  est.ci_high = hi;
  return est;
}

// ---------------------------------------------------------------------------

BracketVerdict bracket_tmu(const ComplexityCurve& curve, double r1, double r2) {
  if (!(r1 >= 0.0 && r1 < r2)) throw ParameterOutOfRange("need 0 <= r1 < r2");
  auto locate = [&](double r) -> std::size_t {
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
      if (std::fabs(curve.grid[i] - r) <= 1e-12 * (1.0 + std::fabs(r))) return i;
    throw PointsNotOnGrid("bracket point is not on the curve grid");
  };
  const std::size_t i1 = locate(r1);
  const std::size_t i2 = locate(r2);
  const double f1 = curve.f_hat[i1], s1 = curve.stderr_[i1];
  const double f2 = curve.f_hat[i2], s2 = curve.stderr_[i2];
  const bool mu_in_set = curve.t_c_hat <= 1e-10;

  // Third clause of the proposition gives the tighter upper bound when it
  // applies at r1; otherwise the two-point comparison decides.
  if (mu_in_set && f1 + 3.0 * s1 <= 0.0) return {BracketVerdictKind::UpperBound, r1};
  if (f1 + 3.0 * s1 <= f2 - 3.0 * s2) return {BracketVerdictKind::LowerBound, r1};
  if (f1 - 3.0 * s1 >= f2 + 3.0 * s2) return {BracketVerdictKind::UpperBound, r2};
  if (mu_in_set && f2 + 3.0 * s2 <= 0.0) return {BracketVerdictKind::UpperBound, r2};
  return {BracketVerdictKind::Inconclusive, 0.0};
}

// ---------------------------------------------------------------------------

std::vector<ConcentrationRow> concentration_check(const ConstraintSet& set, ConstSpan mu,
                                                  double t_mu, std::size_t n_samples,
                                                  std::uint64_t seed, ConstSpan x_grid) {
  if (!(t_mu > 0.0)) throw NonPositiveTmu("concentration check requires t_mu > 0");
  if (n_samples < 1) throw ParameterOutOfRange("need at least 1 sample");
  Vec t_star(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    rng::GaussianStream stream(seed, i);
    Vec z(set.dim());
    stream.fill(z);
    t_star[i] = sample_t_star(set, mu, z).t_star;
  });
  const double root = std::sqrt(t_mu);
  std::vector<ConcentrationRow> rows;
  rows.reserve(x_grid.size());
  for (double x : x_grid) {
    ConcentrationRow row;
    row.x = x;
    std::size_t count = 0;
    for (double ts : t_star)
      if (std::fabs(ts - t_mu) >= x * root) ++count;
    row.empirical = static_cast<double>(count) / static_cast<double>(n_samples);
    const double ratio = 1.0 + x / root;
    row.bound = 3.0 * std::exp(-std::pow(x, 4) / (32.0 * ratio * ratio));
    row.stderr_ =
        std::sqrt(row.empirical * (1.0 - row.empirical) / static_cast<double>(n_samples));
    row.violation = row.empirical > row.bound + 3.0 * row.stderr_;
    rows.push_back(row);
  }
  return rows;
}

RiskSandwich risk_vs_tmu_check(const ConstraintSet& set, ConstSpan mu, double t_mu,
                               std::size_t n_samples, std::uint64_t seed, double c) {
  if (!(c > 0.0)) throw ParameterOutOfRange("C must be positive");
  if (t_mu < 0.0) throw ParameterOutOfRange("t_mu must be nonnegative");
  if (n_samples < 2) throw ParameterOutOfRange("need at least 2 samples");
  Vec sq(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    rng::GaussianStream stream(seed, i);
    Vec z(set.dim());
    stream.fill(z);
    sq[i] = sample_t_star(set, mu, z).sq_error;
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
  RiskSandwich out;
  out.risk = mean;
  out.risk_stderr = batches > 1
                        ? std::sqrt(ss / static_cast<double>(batches - 1) /
                                    static_cast<double>(batches))
                        : 0.0;
  out.t_mu = t_mu;
  out.c = c;
  if (t_mu >= 1.0) {
    out.lo = t_mu * t_mu - c * std::pow(t_mu, 1.5);
    out.hi = t_mu * t_mu + c * std::pow(t_mu, 1.5);
  } else {
    out.lo = 0.0;
    out.hi = c;
  }
  out.inside = out.risk >= out.lo - 3.0 * out.risk_stderr &&
               out.risk <= out.hi + 3.0 * out.risk_stderr;
  return out;
}

Vec default_curve_grid(const ConstraintSet& set, ConstSpan mu, std::size_t points) {
  const double t_c = set.distance_to(mu);
  const double lo = std::max(t_c, 1e-2);
  const double hi = 4.0 * std::sqrt(static_cast<double>(set.dim()));
  Vec grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double ratio = std::max(hi, lo * 1.0001) / lo;
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = lo * std::pow(ratio, static_cast<double>(k) / static_cast<double>(points - 1));
  return grid;
}

}  // namespace convexlse
