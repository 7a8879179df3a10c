#include "convexlse/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "convexlse/errors.hpp"
#include "convexlse/golden.hpp"
#include "convexlse/kernels.hpp"

namespace convexlse {

namespace detail {
struct SetData {
  Matrix basis;    // Subspace
  Matrix design;   // LassoImage
  Matrix gram;     // LassoImage, X^T X
  double lip = 0.0;
  double radius = 0.0;  // L1Ball / LassoImage
  Vec lower, upper;     // Box
  double ce_lo = 0.0, ce_hi = 0.0;  // Counterexample bounds at alpha = 1
};
}  // namespace detail

using detail::SetData;

std::string set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::Subspace: return "subspace";
    case SetKind::L1Ball: return "l1ball";
    case SetKind::LassoImage: return "lasso";
    case SetKind::IsotonicCone: return "isotonic";
    case SetKind::Counterexample: return "counterexample";
    case SetKind::Box: return "box";
  }
  return "unknown";
}

namespace {

// Pool-adjacent-violators, single left-to-right pass with back-merging.
// Blocks carry (sum, count); a strict mean decrease triggers a merge.
int isotonic_project(ConstSpan y, MutSpan out) {
  const std::size_t n = y.size();
  std::vector<double> sum(n);
  std::vector<std::size_t> cnt(n);
  std::size_t m = 0;
  int merges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum[m] = y[i];
    cnt[m] = 1;
    ++m;
    while (m >= 2 && sum[m - 2] * static_cast<double>(cnt[m - 1]) >
                         sum[m - 1] * static_cast<double>(cnt[m - 2])) {
      sum[m - 2] += sum[m - 1];
      cnt[m - 2] += cnt[m - 1];
      --m;
      ++merges;
    }
  }
  std::size_t pos = 0;
  for (std::size_t b = 0; b < m; ++b) {
    const double mean = sum[b] / static_cast<double>(cnt[b]);
    for (std::size_t k = 0; k < cnt[b]; ++k) out[pos++] = mean;
  }
  return merges;
}

// Sort-and-soft-threshold projection onto {|x|_1 <= L}.
void l1_ball_project(ConstSpan y, double radius, MutSpan out, Vec& scratch) {
  const std::size_t n = y.size();
  if (radius <= 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (l1_norm(y) <= radius) {
    std::copy(y.begin(), y.end(), out.begin());
    return;
  }
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = std::fabs(y[i]);
  std::sort(scratch.begin(), scratch.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += scratch[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (scratch[j] > candidate)
      theta = candidate;
    else
      break;
  }
  kernels::ops().soft_threshold(y.data(), theta, out.data(), n);
}

void subspace_project(const Matrix& basis, ConstSpan y, MutSpan out) {
  Vec coeff(basis.cols());
  matvec_t(basis, y, coeff);
  matvec(basis, coeff, out);
}

}  // namespace

ConstraintSet::ConstraintSet(SetKind kind, std::size_t n, bool bounded,
                             std::shared_ptr<const SetData> data)
    : kind_(kind), n_(n), bounded_(bounded), data_(std::move(data)) {
  if (n_ == 0) throw ParameterOutOfRange("set dimension must be at least 1");
}

void ConstraintSet::check_dim(ConstSpan y) const {
  if (y.size() != n_) throw DimensionMismatch("vector length does not match set dimension");
}

ConstraintSet ConstraintSet::subspace(Matrix basis) {
  if (basis.cols() == 0 || basis.rows() == 0)
    throw ParameterOutOfRange("subspace basis must have at least one column");
  if (basis.cols() > basis.rows())
    throw ParameterOutOfRange("subspace basis has more columns than rows");
  if (orthonormality_defect(basis) > 1e-10)
    throw ParameterOutOfRange("subspace basis is not orthonormal");
  auto data = std::make_shared<SetData>();
  const std::size_t n = basis.rows();
  data->basis = std::move(basis);
  return ConstraintSet(SetKind::Subspace, n, false, std::move(data));
}

ConstraintSet ConstraintSet::l1_ball(std::size_t n, double radius) {
  if (radius < 0.0 || !std::isfinite(radius))
    throw ParameterOutOfRange("l1 ball radius must be nonnegative");
  auto data = std::make_shared<SetData>();
  data->radius = radius;
  return ConstraintSet(SetKind::L1Ball, n, true, std::move(data));
}

ConstraintSet ConstraintSet::lasso_image(Matrix design, double radius) {
  if (radius < 0.0 || !std::isfinite(radius))
    throw ParameterOutOfRange("lasso radius must be nonnegative");
  if (design.cols() == 0 || design.rows() == 0)
    throw ParameterOutOfRange("lasso design must be nonempty");
  for (std::size_t j = 0; j < design.cols(); ++j)
    if (kernels::ops().sum_sq(design.col(j), design.rows()) == 0.0)
      throw ParameterOutOfRange("lasso design has an all-zero column");
  auto data = std::make_shared<SetData>();
  const std::size_t n = design.rows();
  data->radius = radius;
  data->gram = gram(design);
  // Power iteration approaches lambda_max from below; pad so 1/lip is a
  // valid gradient step.
  data->lip = lambda_max(data->gram, 50) * 1.02 + 1e-30;
  data->design = std::move(design);
  return ConstraintSet(SetKind::LassoImage, n, true, std::move(data));
}

ConstraintSet ConstraintSet::isotonic(std::size_t n) {
  return ConstraintSet(SetKind::IsotonicCone, n, false, std::make_shared<SetData>());
}

ConstraintSet ConstraintSet::counterexample(std::size_t n) {
  auto data = std::make_shared<SetData>();
  const double root4 = std::pow(static_cast<double>(n), -0.25);
  const double root2 = 1.0 / std::sqrt(static_cast<double>(n));
  data->ce_lo = root4 - root2;
  data->ce_hi = root4 + root2;
  return ConstraintSet(SetKind::Counterexample, n, true, std::move(data));
}

ConstraintSet ConstraintSet::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size()) throw DimensionMismatch("box bounds differ in length");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i])) throw ParameterOutOfRange("box requires lower <= upper");
  auto data = std::make_shared<SetData>();
  const std::size_t n = lower.size();
  data->lower = std::move(lower);
  data->upper = std::move(upper);
  return ConstraintSet(SetKind::Box, n, true, std::move(data));
}

ConstraintSet ConstraintSet::singleton(Vec point) {
  Vec upper = point;
  return box(std::move(point), std::move(upper));
}

ProjectionResult ConstraintSet::project(ConstSpan y, double tol) const {
  check_dim(y);
  if (tol <= 0.0) throw ParameterOutOfRange("projection tolerance must be positive");
  ProjectionResult r;
  r.point.assign(n_, 0.0);
  switch (kind_) {
    case SetKind::Subspace:
      subspace_project(data_->basis, y, r.point);
      break;
    case SetKind::L1Ball: {
      Vec scratch;
      l1_ball_project(y, data_->radius, r.point, scratch);
      break;
    }
    case SetKind::IsotonicCone:
      r.iterations = isotonic_project(y, r.point);
      break;
    case SetKind::Box:
      kernels::ops().clamp(y.data(), data_->lower.data(), data_->upper.data(), r.point.data(),
                           n_);
      break;
    case SetKind::Counterexample: {
      // Squared distance to the box [alpha*lo, alpha*hi]^n is convex in
      // alpha; golden-section over [0, 1] then project onto the best box.
      const double lo = data_->ce_lo, hi = data_->ce_hi;
      auto objective = [&](double alpha) {
        return kernels::ops().box_dist_sq(y.data(), alpha * lo, alpha * hi, n_);
      };
      const GoldenResult g = golden_minimize(objective, 0.0, 1.0, 200);
      kernels::ops().clamp_uniform(y.data(), g.x * lo, g.x * hi, r.point.data(), n_);
      r.iterations = g.iterations;
      break;
    }
    case SetKind::LassoImage: {
      if (data_->radius <= 0.0) break;  // singleton {X 0}
      Vec c(data_->design.cols());
      matvec_t(data_->design, y, c);
      LassoSolver solver(*this, tol);
      Vec beta(data_->design.cols(), 0.0);
      r.iterations = solver.solve(c, norm_sq(y), beta);
      r.converged = solver.converged();
      matvec(data_->design, beta, r.point);
      break;
    }
  }
  r.distance = dist(y, r.point);
  return r;
}

double ConstraintSet::distance_to(ConstSpan y) const { return project(y).distance; }

bool ConstraintSet::contains(ConstSpan y) const {
  return contains(y, 1e-8 * (1.0 + norm(y)));
}

bool ConstraintSet::contains(ConstSpan y, double tol) const { return distance_to(y) <= tol; }

Vec ConstraintSet::lasso_coefficients(ConstSpan y, double tol) const {
  check_dim(y);
  if (kind_ != SetKind::LassoImage)
    throw ParameterOutOfRange("lasso_coefficients is only defined for lasso sets");
  Vec beta(data_->design.cols(), 0.0);
  if (data_->radius <= 0.0) return beta;
  Vec c(data_->design.cols());
  matvec_t(data_->design, y, c);
  LassoSolver solver(*this, tol);
  solver.solve(c, norm_sq(y), beta);
  return beta;
}

const Matrix& ConstraintSet::subspace_basis() const {
  if (kind_ != SetKind::Subspace) throw ParameterOutOfRange("not a subspace set");
  return data_->basis;
}
const Matrix& ConstraintSet::lasso_design() const {
  if (kind_ != SetKind::LassoImage) throw ParameterOutOfRange("not a lasso set");
  return data_->design;
}
const Matrix& ConstraintSet::lasso_gram() const {
  if (kind_ != SetKind::LassoImage) throw ParameterOutOfRange("not a lasso set");
  return data_->gram;
}
double ConstraintSet::lasso_lipschitz() const {
  if (kind_ != SetKind::LassoImage) throw ParameterOutOfRange("not a lasso set");
  return data_->lip;
}
double ConstraintSet::radius() const {
  if (kind_ != SetKind::L1Ball && kind_ != SetKind::LassoImage)
    throw ParameterOutOfRange("set has no radius");
  return data_->radius;
}
ConstSpan ConstraintSet::box_lower() const {
  if (kind_ != SetKind::Box) throw ParameterOutOfRange("not a box set");
  return data_->lower;
}
ConstSpan ConstraintSet::box_upper() const {
  if (kind_ != SetKind::Box) throw ParameterOutOfRange("not a box set");
  return data_->upper;
}
double ConstraintSet::counterexample_lo() const {
  if (kind_ != SetKind::Counterexample) throw ParameterOutOfRange("not a counterexample set");
  return data_->ce_lo;
}
double ConstraintSet::counterexample_hi() const {
  if (kind_ != SetKind::Counterexample) throw ParameterOutOfRange("not a counterexample set");
  return data_->ce_hi;
}

Vec make_counterexample_point(std::size_t n, double alpha, ConstSpan theta) {
  if (theta.size() != n) throw DimensionMismatch("theta length does not match n");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterOutOfRange("alpha must lie in [0, 1]");
  for (double t : theta)
    if (!(t >= -1.0 && t <= 1.0)) throw ParameterOutOfRange("theta entries must lie in [-1, 1]");
  const double root4 = std::pow(static_cast<double>(n), -0.25);
  const double root2 = 1.0 / std::sqrt(static_cast<double>(n));
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * root4 + alpha * theta[i] * root2;
  return out;
}

// ---------------------------------------------------------------------------
// JSON descriptors

namespace {

Vec json_floats(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array())
    throw BadDescriptor(std::string("missing or non-array field: ") + field);
  Vec out;
  out.reserve(j[field].size());
  for (const auto& v : j[field]) {
    if (!v.is_number()) throw BadDescriptor(std::string("non-numeric entry in ") + field);
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t json_count(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer() || j[field].get<long long>() <= 0)
    throw BadDescriptor(std::string("missing or non-positive field: ") + field);
  return static_cast<std::size_t>(j[field].get<long long>());
}

}  // namespace

ConstraintSet ConstraintSet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw BadDescriptor("set descriptor must be an object with a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  const std::size_t n = json_count(j, "n");
  if (kind == "isotonic") return isotonic(n);
  if (kind == "counterexample") return counterexample(n);
  if (kind == "l1ball") {
    if (!j.contains("L") || !j["L"].is_number()) throw BadDescriptor("l1ball needs \"L\"");
    return l1_ball(n, j["L"].get<double>());
  }
  if (kind == "lasso") {
    const std::size_t p = json_count(j, "p");
    const Vec x = json_floats(j, "X");
    if (x.size() != n * p) throw BadDescriptor("X has wrong number of entries");
    if (!j.contains("L") || !j["L"].is_number()) throw BadDescriptor("lasso needs \"L\"");
    return lasso_image(Matrix::from_row_major(n, p, x), j["L"].get<double>());
  }
  if (kind == "subspace") {
    const Vec b = json_floats(j, "basis");
    if (b.empty() || b.size() % n != 0) throw BadDescriptor("basis has wrong number of entries");
    const std::size_t p = b.size() / n;
    return subspace(Matrix::from_row_major(n, p, b));
  }
  if (kind == "box") {
    Vec lo = json_floats(j, "lower");
    Vec hi = json_floats(j, "upper");
    if (lo.size() != n || hi.size() != n) throw BadDescriptor("box bounds must have length n");
    return box(std::move(lo), std::move(hi));
  }
  throw BadDescriptor("unknown set kind: " + kind);
}

nlohmann::json ConstraintSet::descriptor() const {
  nlohmann::json j;
  j["kind"] = set_kind_name(kind_);
  j["n"] = n_;
  switch (kind_) {
    case SetKind::L1Ball:
      j["L"] = data_->radius;
      break;
    case SetKind::LassoImage:
      j["L"] = data_->radius;
      j["p"] = data_->design.cols();
      j["X"] = data_->design.to_row_major();
      break;
    case SetKind::Subspace:
      j["basis"] = data_->basis.to_row_major();
      break;
    case SetKind::Box:
      j["lower"] = data_->lower;
      j["upper"] = data_->upper;
      break;
    default:
      break;
  }
  return j;
}

// ---------------------------------------------------------------------------
// LassoSolver: FISTA on the coefficient-space objective
//   f(b) = 1/2 b^T G b - c.b  (+ |y|^2/2),  G = X^T X,
// with exact l1-ball projection each step and restart on objective increase.
// G v at the extrapolated point is formed from cached G beta values, so each
// iteration costs one gram matvec.

LassoSolver::LassoSolver(const ConstraintSet& set, double obj_tol)
    : data_(set.data_), obj_tol_(obj_tol) {
  if (set.kind() != SetKind::LassoImage)
    throw ParameterOutOfRange("LassoSolver requires a lasso set");
  const std::size_t p = data_->gram.cols();
  gb_.assign(p, 0.0);
  gb_prev_.assign(p, 0.0);
  beta_prev_.assign(p, 0.0);
  v_.assign(p, 0.0);
  gv_.assign(p, 0.0);
  candidate_.assign(p, 0.0);
}

int LassoSolver::solve(ConstSpan c, double y_sq, MutSpan beta) {
  const std::size_t p = data_->gram.cols();
  const double radius = data_->radius;
  converged_ = true;
  if (radius <= 0.0) {
    std::fill(beta.begin(), beta.end(), 0.0);
    std::fill(gb_.begin(), gb_.end(), 0.0);
    return 0;
  }
  l1_ball_project(beta, radius, beta, scratch_);
  const double step = 1.0 / data_->lip;
  const double step_tol = obj_tol_ * (1.0 + radius);
  const ConstSpan beta_view(beta.data(), p);
  matvec(data_->gram, beta_view, gb_);
  double f = 0.5 * dot(beta_view, gb_) - dot(beta_view, c);
  std::copy(beta.begin(), beta.end(), beta_prev_.begin());
  std::copy(gb_.begin(), gb_.end(), gb_prev_.begin());
  double theta = 1.0;
  double momentum = 0.0;

  int it = 1;
  for (; it <= kMaxIterations; ++it) {
    for (std::size_t i = 0; i < p; ++i) {
      const double gvi = gb_[i] + momentum * (gb_[i] - gb_prev_[i]);
      const double vi = beta[i] + momentum * (beta[i] - beta_prev_[i]);
      v_[i] = vi - step * (gvi - c[i]);
    }
    l1_ball_project(v_, radius, candidate_, scratch_);
    matvec(data_->gram, candidate_, gv_);  // gv_ = G * candidate from here on
    const ConstSpan cand_view(candidate_.data(), p);
    const double f_new = 0.5 * dot(cand_view, gv_) - dot(cand_view, c);

    if (momentum != 0.0 && f_new > f + 1e-15 * (1.0 + std::fabs(f))) {
      // Momentum overshot; restart from the current iterate.
      theta = 1.0;
      momentum = 0.0;
      std::copy(beta.begin(), beta.end(), beta_prev_.begin());
      std::copy(gb_.begin(), gb_.end(), gb_prev_.begin());
      continue;
    }

    const double decrease = f - f_new;
    const double shift = dist(cand_view, beta_view);
    std::copy(beta.begin(), beta.end(), beta_prev_.begin());
    std::copy(gb_.begin(), gb_.end(), gb_prev_.begin());
    std::copy(candidate_.begin(), candidate_.end(), beta.begin());
    std::swap(gb_, gv_);
    const double f_old = f;
    f = f_new;
    const double theta_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    momentum = (theta - 1.0) / theta_new;
    theta = theta_new;

    const double rel = decrease / std::max(1.0, std::fabs(f_old + 0.5 * y_sq));
    if (rel < obj_tol_ && shift <= step_tol) return it;
  }
  converged_ = false;
  return kMaxIterations;
}

}  // namespace convexlse
