#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "convexlse/complexity.hpp"
#include "convexlse/errors.hpp"
#include "convexlse/estimation.hpp"
#include "convexlse/experiments.hpp"
#include "convexlse/parallel.hpp"
#include "convexlse/serialize.hpp"
#include "convexlse/sets.hpp"
#include "convexlse/svg.hpp"

namespace {

using convexlse::ConstSpan;
using convexlse::Vec;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitIo = 5;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

Vec parse_csv_floats(const std::string& text) {
  Vec out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &pos);
    } catch (const std::exception&) {
      throw CliError(kExitParse, "cannot parse number: " + token);
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size()) throw CliError(kExitParse, "cannot parse number: " + token);
    out.push_back(v);
  }
  if (out.empty()) throw CliError(kExitParse, "empty vector literal");
  return out;
}

std::vector<std::size_t> parse_csv_counts(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_csv_floats(text)) {
    if (v <= 0 || v != std::floor(v)) throw CliError(kExitParse, "expected positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

bool looks_numeric(const std::string& text) {
  return text.find_first_of("0123456789") != std::string::npos &&
         text.find_first_not_of("0123456789+-.eE, \t") == std::string::npos;
}

Vec read_vector_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CliError(kExitIo, "cannot open: " + path);
  Vec out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw CliError(kExitParse, "bad number in " + path + ": " + line);
    }
  }
  if (out.empty()) throw CliError(kExitParse, "no numbers in " + path);
  return out;
}

// inline vector, file path, or generator name ("zero", "linear")
Vec resolve_mu(const std::string& mu_arg, const std::string& mu_file, std::size_t n) {
  if (!mu_file.empty()) return read_vector_file(mu_file);
  if (mu_arg.empty() || mu_arg == "zero") return Vec(n, 0.0);
  if (mu_arg == "linear") {
    Vec mu(n);
    for (std::size_t i = 0; i < n; ++i)
      mu[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return mu;
  }
  if (!looks_numeric(mu_arg)) throw CliError(kExitParse, "unknown mu generator: " + mu_arg);
  return parse_csv_floats(mu_arg);
}

convexlse::ConstraintSet parse_set(const std::string& descriptor) {
  json j;
  try {
    j = json::parse(descriptor);
  } catch (const json::parse_error& e) {
    throw CliError(kExitParse, std::string("bad set JSON: ") + e.what());
  }
  return convexlse::ConstraintSet::from_json(j);
}

struct GridSpec {
  double min = 0.0, max = 0.0;
  std::size_t points = 0;
  bool log_spaced = false;
  bool given = false;
};

GridSpec parse_grid_spec(const std::string& text) {
  GridSpec g;
  if (text.empty()) return g;
  std::vector<std::string> parts;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ':')) parts.push_back(token);
  if (parts.size() < 3 || parts.size() > 4)
    throw CliError(kExitParse, "grid spec must be min:max:points[:log]");
  try {
    g.min = std::stod(parts[0]);
    g.max = std::stod(parts[1]);
    g.points = static_cast<std::size_t>(std::stoul(parts[2]));
  } catch (const std::exception&) {
    throw CliError(kExitParse, "bad grid spec: " + text);
  }
  if (parts.size() == 4) {
    if (parts[3] != "log") throw CliError(kExitParse, "grid flag must be 'log'");
    g.log_spaced = true;
  }
  if (!(g.min < g.max) || g.points < 2)
    throw CliError(kExitParse, "grid needs min < max and points >= 2");
  g.given = true;
  return g;
}

Vec build_grid(const GridSpec& g) {
  Vec grid(g.points);
  for (std::size_t k = 0; k < g.points; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(g.points - 1);
    grid[k] = g.log_spaced ? g.min * std::pow(g.max / g.min, f) : g.min + f * (g.max - g.min);
  }
  return grid;
}

std::string out_stem(const std::string& path) {
  for (const char* ext : {".csv", ".json", ".svg"}) {
    const std::size_t len = std::string(ext).size();
    if (path.size() > len && path.compare(path.size() - len, len, ext) == 0)
      return path.substr(0, path.size() - len);
  }
  return path;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CONVEX_LSE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CliError(kExitParse, std::string("bad CONVEX_LSE_SEED: ") + env);
    }
  }
  return 0;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (!out_path.empty())
    convexlse::write_file(out_path, text);
  else
    std::cout << text;
}

struct Options {
  std::string set_json;
  std::string y_csv;
  std::string mu_arg;
  std::string mu_file;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t samples = 0;
  bool samples_given = false;
  std::string grid_spec;
  std::string out;
  std::string format = "csv";
  bool plot = false;
  unsigned threads = 0;
  std::string name;
  std::string n_list;
  std::string p_list = "4,8,16,32,64";
  std::size_t ambient_n = 128;
  double tol = 0.0;
  bool tol_given = false;
  std::string estimator = "lse";
  double penalty = 3.0;
  double mu_scale = 1.0;
};

json base_config(const Options& opt, const char* command) {
  json cfg;
  cfg["command"] = command;
  cfg["seed"] = opt.seed;
  if (!opt.out.empty()) cfg["out"] = opt.out;
  cfg["format"] = opt.format;
  cfg["plot"] = opt.plot;
  return cfg;
}

int cmd_project(Options& opt) {
  if (opt.set_json.empty() || opt.y_csv.empty())
    throw CliError(kExitParse, "project needs --set and --y");
  const auto set = parse_set(opt.set_json);
  const Vec y = parse_csv_floats(opt.y_csv);
  const double tol = opt.tol_given ? opt.tol : 1e-12;
  const auto result = set.project(y, tol);
  json out = convexlse::to_json(result);
  json cfg = base_config(opt, "project");
  cfg["set"] = set.descriptor();
  cfg["y"] = y;
  cfg["tol"] = tol;
  out["config"] = cfg;
  emit(out, opt.out);
  return result.converged ? kExitOk : kExitNoConvergence;
}

int cmd_curve(Options& opt) {
  if (opt.set_json.empty()) throw CliError(kExitParse, "curve needs --set");
  const auto set = parse_set(opt.set_json);
  const Vec mu = resolve_mu(opt.mu_arg, opt.mu_file, set.dim());
  const std::size_t samples = opt.samples_given ? opt.samples : 2000;
  const GridSpec spec = parse_grid_spec(opt.grid_spec);
  const Vec grid = spec.given ? build_grid(spec) : convexlse::default_curve_grid(set, mu);
  const auto curve = convexlse::estimate_curve(set, mu, grid, samples, opt.seed);

  const std::string out_path = opt.out.empty() ? "curve.csv" : opt.out;
  json cfg = base_config(opt, "curve");
  cfg["set"] = set.descriptor();
  cfg["mu_source"] = opt.mu_file.empty() ? (opt.mu_arg.empty() ? "zero" : opt.mu_arg) : opt.mu_file;
  cfg["samples"] = samples;
  cfg["grid"] = opt.grid_spec.empty() ? "default" : opt.grid_spec;
  cfg["out"] = out_path;

  if (opt.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      json r = {{"t", curve.grid[i]}, {"stderr", curve.stderr_[i]}};
      r["f_hat"] = std::isinf(curve.f_hat[i]) ? json() : json(curve.f_hat[i]);
      r["m_hat"] = std::isinf(curve.m_hat[i]) ? json() : json(curve.m_hat[i]);
      rows.push_back(std::move(r));
    }
    emit(json{{"config", cfg}, {"t_c_hat", curve.t_c_hat}, {"rows", rows}}, out_path);
  } else {
    convexlse::write_file(out_path, convexlse::to_csv(curve));
  }

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i)
    if (curve.f_hat[i] > curve.f_hat[argmax]) argmax = i;

  if (opt.plot) {
    convexlse::SvgPlot plot("complexity curve", "t", "f_hat");
    Vec lo(curve.grid.size()), hi(curve.grid.size());
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      lo[i] = curve.f_hat[i] - 2.0 * curve.stderr_[i];
      hi[i] = curve.f_hat[i] + 2.0 * curve.stderr_[i];
    }
    plot.add_band(curve.grid, lo, hi);
    plot.add_line(curve.grid, curve.f_hat);
    plot.add_vline(curve.grid[argmax]);
    plot.set_caption("argmax t = " + convexlse::format_double(curve.grid[argmax]));
    convexlse::write_file(out_stem(out_path) + ".svg", plot.render());
  }

  json summary = {{"config", cfg},
                  {"out", out_path},
                  {"t_c_hat", curve.t_c_hat},
                  {"grid_argmax", curve.grid[argmax]}};
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_tmu(Options& opt) {
  if (opt.set_json.empty()) throw CliError(kExitParse, "tmu needs --set");
  const auto set = parse_set(opt.set_json);
  const Vec mu = resolve_mu(opt.mu_arg, opt.mu_file, set.dim());
  const std::size_t samples = opt.samples_given ? opt.samples : 2000;
  const double tol = opt.tol_given ? opt.tol : 1e-3;
  const auto est = convexlse::solve_tmu(set, mu, samples, opt.seed, tol);
  json out = convexlse::to_json(est);
  json cfg = base_config(opt, "tmu");
  cfg["set"] = set.descriptor();
  cfg["mu_source"] = opt.mu_file.empty() ? (opt.mu_arg.empty() ? "zero" : opt.mu_arg) : opt.mu_file;
  cfg["samples"] = samples;
  cfg["tol"] = tol;
  out["config"] = cfg;
  emit(out, opt.out);
  if (!opt.out.empty()) std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_risk(Options& opt) {
  const std::size_t samples = opt.samples_given ? opt.samples : 2000;
  std::optional<convexlse::ConstraintSet> set;
  if (!opt.set_json.empty()) set = parse_set(opt.set_json);

  std::optional<convexlse::Estimator> est;
  std::size_t n = 0;
  if (opt.estimator == "lse") {
    if (!set) throw CliError(kExitParse, "risk --estimator lse needs --set");
    n = set->dim();
    est = convexlse::Estimator::lse(*set);
  } else if (opt.estimator == "mean") {
    est = convexlse::Estimator::coordinate_mean();
  } else if (opt.estimator == "identity") {
    est = convexlse::Estimator::identity();
  } else {
    throw CliError(kExitParse, "unknown estimator: " + opt.estimator);
  }
  if (n == 0) {
    if (set)
      n = set->dim();
    else if (!opt.mu_arg.empty() && looks_numeric(opt.mu_arg))
      n = parse_csv_floats(opt.mu_arg).size();
    else if (!opt.mu_file.empty())
      n = read_vector_file(opt.mu_file).size();
    else
      throw CliError(kExitParse, "risk needs --set or an explicit --mu vector");
  }
  const Vec mu = resolve_mu(opt.mu_arg, opt.mu_file, n);
  const auto risk = convexlse::estimate_risk(*est, mu, samples, opt.seed);
  json out = convexlse::to_json(risk);
  json cfg = base_config(opt, "risk");
  if (set) cfg["set"] = set->descriptor();
  cfg["estimator"] = opt.estimator;
  cfg["mu_source"] = opt.mu_file.empty() ? (opt.mu_arg.empty() ? "zero" : opt.mu_arg) : opt.mu_file;
  cfg["samples"] = samples;
  out["config"] = cfg;
  emit(out, opt.out);
  if (!opt.out.empty()) std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_experiment(Options& opt) {
  const std::size_t samples = opt.samples_given ? opt.samples : 400;
  convexlse::SweepReport report;
  json cfg = base_config(opt, "experiment");
  cfg["name"] = opt.name;
  cfg["samples"] = samples;

  if (opt.name == "subspace") {
    const auto p_list = parse_csv_counts(opt.p_list);
    report = convexlse::subspace_sweep(p_list, opt.ambient_n, samples, opt.seed);
    cfg["p_list"] = p_list;
    cfg["n"] = opt.ambient_n;
  } else if (opt.name == "lasso") {
    const auto n_list =
        parse_csv_counts(opt.n_list.empty() ? "128,256,512,1024,2048" : opt.n_list);
    convexlse::LassoSweepConfig lasso;
    lasso.penalty = opt.penalty;
    report = convexlse::lasso_sweep(n_list, lasso, samples, opt.seed);
    cfg["n_list"] = n_list;
    cfg["L"] = opt.penalty;
  } else if (opt.name == "isotonic") {
    const auto n_list =
        parse_csv_counts(opt.n_list.empty() ? "64,128,256,512,1024,2048,4096" : opt.n_list);
    report = convexlse::isotonic_sweep(n_list, opt.mu_scale, samples, opt.seed);
    cfg["n_list"] = n_list;
    cfg["mu_scale"] = opt.mu_scale;
  } else if (opt.name == "counterexample") {
    const auto n_list = parse_csv_counts(opt.n_list.empty() ? "256,1024,4096" : opt.n_list);
    report = convexlse::counterexample_risk(n_list, samples, opt.seed);
    cfg["n_list"] = n_list;
  } else {
    throw CliError(kExitParse, "unknown experiment name: " + opt.name);
  }

  std::cerr << "[time] " << report.experiment << " sweep: " << report.wall_time_seconds
            << " s\n";

  const std::string stem = opt.out.empty() ? report.experiment : out_stem(opt.out);
  convexlse::write_file(stem + ".csv", convexlse::to_csv(report));

  json out = convexlse::to_json(report);
  out["config"] = cfg;
  emit(out, opt.out.empty() ? "" : stem + ".json");
  if (!opt.out.empty()) std::cout << out.dump(2) << "\n";

  if (opt.plot) {
    Vec xs, ys;
    for (const auto& row : report.rows) {
      const double y = opt.name == "counterexample" ? row.risk : row.t_mu_hat;
      const double x = opt.name == "subspace" ? row.params.value("p", 0.0)
                                              : static_cast<double>(row.n);
      if (y > 0.0) {
        xs.push_back(x);
        ys.push_back(y);
      }
    }
    const std::string y_name = opt.name == "counterexample" ? "risk" : "t_mu";
    const std::string x_name = opt.name == "subspace" ? "p" : "n";
    convexlse::SvgPlot plot(report.experiment + " sweep", x_name, y_name);
    plot.set_log_log(true, true);
    plot.add_line(xs, ys);
    plot.add_points(xs, ys);
    plot.set_caption("slope = " + convexlse::format_double(report.slope) + " +/- " +
                     convexlse::format_double(report.slope_stderr));
    convexlse::write_file(stem + ".svg", plot.render());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  Options opt;

  CLI::App app{"constrained least squares: projections, complexity curves, t_mu, experiments"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--set", opt.set_json, "constraint set JSON descriptor");
    cmd->add_option("--seed", opt.seed, "RNG seed")->each([&](const std::string&) {
      opt.seed_given = true;
    });
    cmd->add_option("--samples", opt.samples, "Monte Carlo sample count")
        ->each([&](const std::string&) { opt.samples_given = true; });
    cmd->add_option("--out", opt.out, "output file path");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--plot", opt.plot, "also write an SVG plot");
    cmd->add_option("--threads", opt.threads, "worker cap (output is identical for any value)");
    cmd->add_option("--tol", opt.tol, "tolerance")->each([&](const std::string&) {
      opt.tol_given = true;
    });
    cmd->add_option("--mu", opt.mu_arg, "truth vector: csv values, 'zero', or 'linear'");
    cmd->add_option("--mu-file", opt.mu_file, "truth vector file, one float per line");
  };

  CLI::App* project = app.add_subcommand("project", "project a point onto a set");
  add_common(project);
  project->add_option("--y", opt.y_csv, "point to project, comma separated");

  CLI::App* curve = app.add_subcommand("curve", "estimate the complexity curve");
  add_common(curve);
  curve->add_option("--grid", opt.grid_spec, "grid spec min:max:points[:log]");

  CLI::App* tmu = app.add_subcommand("tmu", "solve for the complexity maximizer");
  add_common(tmu);

  CLI::App* risk = app.add_subcommand("risk", "Monte Carlo risk of an estimator");
  add_common(risk);
  risk->add_option("--estimator", opt.estimator, "lse, mean, or identity");

  CLI::App* experiment = app.add_subcommand("experiment", "run a rate sweep");
  add_common(experiment);
  experiment->add_option("--name", opt.name, "subspace, lasso, isotonic, or counterexample");
  experiment->add_option("--n-list", opt.n_list, "comma separated dimensions");
  experiment->add_option("--p-list", opt.p_list, "subspace dimensions (subspace sweep)");
  experiment->add_option("--n", opt.ambient_n, "ambient dimension (subspace sweep)");
  experiment->add_option("--L", opt.penalty, "l1 budget (lasso sweep)");
  experiment->add_option("--mu-scale", opt.mu_scale, "truth scale (isotonic sweep)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    if (!opt.seed_given) opt.seed = default_seed();
    if (opt.threads > 0) convexlse::set_max_threads(opt.threads);
    if (project->parsed()) return cmd_project(opt);
    if (curve->parsed()) return cmd_curve(opt);
    if (tmu->parsed()) return cmd_tmu(opt);
    if (risk->parsed()) return cmd_risk(opt);
    if (experiment->parsed()) return cmd_experiment(opt);
    return kExitParse;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const convexlse::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const convexlse::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const convexlse::BracketFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const convexlse::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const convexlse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
}
