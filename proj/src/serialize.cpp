#include "convexlse/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "convexlse/errors.hpp"

namespace convexlse {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const ComplexityCurve& curve) {
  std::string out = "t,f_hat,stderr,m_hat\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out += format_double(curve.grid[i]);
    out += ',';
    out += format_double(curve.f_hat[i]);
    out += ',';
    out += format_double(curve.stderr_[i]);
    out += ',';
    out += format_double(curve.m_hat[i]);
    out += '\n';
  }
  return out;
}

namespace {

// JSON embedded in a CSV cell: quote it and double any inner quotes.
std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_csv(const SweepReport& report) {
  std::string out = "n,param_json,t_mu_hat,ci_low,ci_high,risk,risk_stderr\n";
  for (const SweepRow& row : report.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += csv_quote(row.params.dump());
    out += ',';
    out += format_double(row.t_mu_hat);
    out += ',';
    out += format_double(row.ci_low);
    out += ',';
    out += format_double(row.ci_high);
    out += ',';
    out += format_double(row.risk);
    out += ',';
    out += format_double(row.risk_stderr);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const ProjectionResult& r) {
  return {{"point", r.point},
          {"distance", r.distance},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

nlohmann::json to_json(const TmuEstimate& est) {
  nlohmann::json bracket = nullptr;
  if (est.bracket)
    bracket = {{"r1", est.bracket->r1}, {"r2", est.bracket->r2},
               {"r1_verdict", "lower_bound"}, {"r2_verdict", "upper_bound"}};
  return {{"t_mu", est.t_mu},   {"ci_low", est.ci_low},       {"ci_high", est.ci_high},
          {"bracket", bracket}, {"n_samples", est.n_samples}, {"seed", est.seed}};
}

nlohmann::json to_json(const BracketVerdict& v) {
  const char* kind = v.kind == BracketVerdictKind::LowerBound   ? "lower_bound"
                     : v.kind == BracketVerdictKind::UpperBound ? "upper_bound"
                                                                : "inconclusive";
  nlohmann::json j = {{"verdict", kind}};
  if (v.kind != BracketVerdictKind::Inconclusive) j["value"] = v.value;
  return j;
}

nlohmann::json to_json(const RiskEstimate& r) {
  return {{"mse", r.mean_sq_error},
          {"stderr", r.stderr_},
          {"n_samples", r.n_samples},
          {"seed", r.seed}};
}

nlohmann::json to_json(const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : report.rows) {
    nlohmann::json r = {{"n", row.n},       {"params", row.params},
                        {"ci_low", row.ci_low}, {"ci_high", row.ci_high},
                        {"risk", row.risk}, {"risk_stderr", row.risk_stderr}};
    if (std::isnan(row.t_mu_hat))
      r["t_mu_hat"] = nullptr;
    else
      r["t_mu_hat"] = row.t_mu_hat;
    rows.push_back(std::move(r));
  }
  return {{"experiment", report.experiment},
          {"rows", rows},
          {"slope", report.slope},
          {"slope_stderr", report.slope_stderr},
          {"seed", report.seed}};
}

nlohmann::json to_json(const ConcentrationRow& row) {
  return {{"x", row.x},
          {"empirical", row.empirical},
          {"bound", row.bound},
          {"stderr", row.stderr_},
          {"violation", row.violation}};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace convexlse
