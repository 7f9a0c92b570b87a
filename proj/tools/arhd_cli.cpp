// arhd_cli: simulate, fit, predict, evaluate, cross-validate and benchmark
// curve-on-curve autoregressive forecasts.
//
// Exit codes: 0 success, 1 invalid arguments, data or numerical failure,
// 2 I/O failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "arhd/arhd.hpp"

namespace {

using arhd::ConfigEcho;
using arhd::format_double;

constexpr double kWongDelta = 1.8348;
constexpr int kWongM = 50;

// ---------------------------------------------------------------------------
// --config: a flat key=value file.  Each key names a long option of the
// chosen subcommand; options given explicitly on the command line win.

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file argument");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return rest;

  std::set<std::string> given;
  for (const auto& a : rest)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                                         : a.find('=') - 2));
  std::vector<std::string> injected;
  std::istringstream in(arhd::read_file(*path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto sv = arhd::trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument(*path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key(arhd::trim(sv.substr(0, eq)));
    const std::string value(arhd::trim(sv.substr(eq + 1)));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw std::invalid_argument(*path + ":" + std::to_string(lineno) + ": empty key");
    if (given.count(key)) continue;
    if (value == "true") {
      injected.push_back("--" + key);
    } else if (value != "false") {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  // Subcommand name first, then config-supplied options, then explicit ones.
  std::vector<std::string> out;
  if (!rest.empty()) out.push_back(rest.front());
  out.insert(out.end(), injected.begin(), injected.end());
  if (rest.size() > 1) out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

// ---------------------------------------------------------------------------
// Shared option groups.

struct GeometryOpts {
  std::optional<int> m;
  std::optional<double> delta;
  std::optional<int> n_funcs;
};

void add_geometry(CLI::App* app, GeometryOpts& g) {
  app->add_option("--m", g.m, "grid points per block (default: from the input metadata, else 50)");
  app->add_option("--delta", g.delta, "block length (default: from the input metadata, else 1.8348)");
  app->add_option("--N", g.n_funcs, "number of basis functions, odd >= 3 (default: from m)");
}

struct MethodOpts {
  std::vector<std::string> methods;
  std::vector<std::string> penalties;  // "alpha:beta"
  int k_n = 1;
};

void add_methods(CLI::App* app, MethodOpts& o, std::vector<std::string> default_methods,
                 std::vector<std::string> default_penalties) {
  o.methods = std::move(default_methods);
  o.penalties = std::move(default_penalties);
  app->add_option("--methods", o.methods, "methods to run: arhd, arw, arf, arh")->delimiter(',')->capture_default_str();
  app->add_option("--penalties", o.penalties, "ARHD penalty pairs alpha:beta")->delimiter(',')->capture_default_str();
  app->add_option("--k-n", o.k_n, "projection dimension for ARH/ARF/ARW")->capture_default_str();
}

arhd::PenaltyConfig parse_penalty(const std::string& s) {
  const auto colon = s.find(':');
  double a = 0.0, b = 0.0;
  if (colon == std::string::npos || !arhd::parse_double(std::string_view(s).substr(0, colon), a) ||
      !arhd::parse_double(std::string_view(s).substr(colon + 1), b))
    throw std::invalid_argument("penalty '" + s + "': expected alpha:beta");
  arhd::PenaltyConfig p{a, b, std::nullopt, std::nullopt};
  p.validate();
  return p;
}

std::vector<arhd::MethodSpec> resolve_methods(const MethodOpts& o) {
  if (o.k_n < 1) throw std::invalid_argument("--k-n must be >= 1");
  std::vector<arhd::MethodSpec> out;
  for (const auto& name : o.methods) {
    const arhd::Method m = arhd::method_from_string(name);
    if (m == arhd::Method::arhd) {
      if (o.penalties.empty()) throw std::invalid_argument("arhd requested but --penalties is empty");
      for (const auto& p : o.penalties) out.push_back({m, parse_penalty(p), o.k_n});
    } else {
      out.push_back({m, {}, o.k_n});
    }
  }
  if (out.empty()) throw std::invalid_argument("no methods selected");
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

int meta_int(const std::map<std::string, std::string>& meta, const char* key, int fallback) {
  auto it = meta.find(key);
  if (it == meta.end()) return fallback;
  double v = 0.0;
  if (!arhd::parse_double(it->second, v) || v != static_cast<int>(v))
    throw std::invalid_argument(std::string("input metadata '") + key + "' is not an integer");
  return static_cast<int>(v);
}

double meta_double(const std::map<std::string, std::string>& meta, const char* key, double fallback) {
  auto it = meta.find(key);
  if (it == meta.end()) return fallback;
  double v = 0.0;
  if (!arhd::parse_double(it->second, v)) throw std::invalid_argument(std::string("input metadata '") + key + "' is not a number");
  return v;
}

struct Loaded {
  arhd::Trajectory traj;
  arhd::BasisSpec spec;
};

Loaded load(const std::string& path, const GeometryOpts& g, int default_m, double default_delta) {
  const arhd::SeriesCsv csv = arhd::read_series_csv(path);
  arhd::Trajectory traj;
  traj.values = csv.values;
  traj.m = g.m ? *g.m : meta_int(csv.meta, "m", default_m);
  traj.delta = g.delta ? *g.delta : meta_double(csv.meta, "delta", default_delta);
  if (traj.m < 1) throw std::invalid_argument("--m must be >= 1");
  traj.validate();
  arhd::BasisSpec spec(traj.delta, g.n_funcs ? *g.n_funcs : arhd::default_truncation(traj.m));
  return {std::move(traj), spec};
}

void echo_geometry(ConfigEcho& echo, const Loaded& l) {
  echo.emplace_back("m", std::to_string(l.traj.m));
  echo.emplace_back("delta", format_double(l.traj.delta));
  echo.emplace_back("N", std::to_string(l.spec.size()));
}

void write_report(const arhd::EvalReport& r, const std::string& csv_path, const std::string& json_path) {
  arhd::print_report(std::cout, r);
  if (!csv_path.empty()) arhd::write_file_atomic(csv_path, arhd::report_csv(r));
  if (!json_path.empty()) arhd::write_file_atomic(json_path, arhd::report_json(r).dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional autoregressive forecasting with derivative information"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // simulate ---------------------------------------------------------------
  arhd::wong::WongConfig sim_cfg;
  bool sim_wong = false;
  std::string sim_out, sim_manifest;
  auto* sim = app.add_subcommand("simulate", "simulate a Wong process trajectory");
  sim->add_flag("--wong", sim_wong, "use the Wong process (the only generator)")->required();
  sim->add_option("--n", sim_cfg.n_blocks, "number of blocks")->capture_default_str();
  sim->add_option("--m", sim_cfg.m, "grid points per block")->capture_default_str();
  sim->add_option("--delta", sim_cfg.delta, "block length")->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed, "random seed")->capture_default_str();
  sim->add_option("--burn-in", sim_cfg.burn_in, "discarded leading blocks")->capture_default_str();
  sim->add_option("--inner-steps", sim_cfg.inner_steps, "Brownian sub-steps per grid interval")->capture_default_str();
  sim->add_option("--out", sim_out, "output CSV")->required();
  sim->add_option("--manifest", sim_manifest, "JSON sidecar (default: <out>.json)");

  // fit --------------------------------------------------------------------
  GeometryOpts fit_geo;
  std::string fit_in, fit_out;
  arhd::PenaltyConfig fit_pen;
  std::optional<double> fit_rate_a, fit_rate_b;
  auto* fitc = app.add_subcommand("fit", "fit the ARHD estimator to a trajectory");
  fitc->add_option("--in", fit_in, "trajectory CSV")->required();
  fitc->add_option("--out", fit_out, "fit file")->required();
  fitc->add_option("--alpha", fit_pen.alpha, "inner penalty")->capture_default_str();
  fitc->add_option("--beta", fit_pen.beta, "outer penalty")->capture_default_str();
  fitc->add_option("--rate-a", fit_rate_a, "use alpha_n = n^-a instead of --alpha");
  fitc->add_option("--rate-b", fit_rate_b, "use beta_n = n^-b instead of --beta");
  add_geometry(fitc, fit_geo);

  // predict ----------------------------------------------------------------
  GeometryOpts pred_geo;
  std::string pred_in, pred_out, pred_fit, pred_method = "arhd";
  bool pred_holdout = false;
  double pred_alpha = 0.1, pred_beta = 0.5;
  int pred_kn = 1;
  auto* pred = app.add_subcommand("predict", "forecast the block after the last one");
  pred->add_option("--in", pred_in, "trajectory CSV")->required();
  pred->add_option("--out", pred_out, "prediction CSV")->required();
  pred->add_option("--fit", pred_fit, "ARHD fit file (otherwise the method is fitted on the input)");
  pred->add_option("--method", pred_method, "arhd, arw, arf or arh")->capture_default_str();
  pred->add_option("--alpha", pred_alpha, "ARHD inner penalty")->capture_default_str();
  pred->add_option("--beta", pred_beta, "ARHD outer penalty")->capture_default_str();
  pred->add_option("--k-n", pred_kn, "projection dimension for ARH/ARF/ARW")->capture_default_str();
  pred->add_flag("--holdout", pred_holdout, "forecast the last block from the earlier ones and report its error");
  add_geometry(pred, pred_geo);

  // evaluate ---------------------------------------------------------------
  GeometryOpts ev_geo;
  MethodOpts ev_methods;
  std::string ev_in, ev_out, ev_json;
  int ev_horizon = 1;
  auto* ev = app.add_subcommand("evaluate", "rolling one-block-ahead scores on the last blocks of a trajectory");
  ev->add_option("--in", ev_in, "trajectory CSV")->required();
  ev->add_option("--horizon", ev_horizon, "number of trailing blocks to forecast")->capture_default_str();
  ev->add_option("--out", ev_out, "report CSV");
  ev->add_option("--json", ev_json, "report JSON");
  add_methods(ev, ev_methods, {"arhd", "arh", "arf", "arw"}, {"0.1:0.5"});
  add_geometry(ev, ev_geo);

  // cv ---------------------------------------------------------------------
  GeometryOpts cv_geo;
  std::string cv_in, cv_out;
  std::vector<double> cv_alphas{0.01, 0.03, 0.1, 0.3, 1.0}, cv_betas{0.01, 0.03, 0.1, 0.3, 1.0};
  std::optional<int> cv_folds;
  auto* cv = app.add_subcommand("cv", "rolling-origin cross-validation of the ARHD penalties");
  cv->add_option("--in", cv_in, "trajectory CSV")->required();
  cv->add_option("--alphas", cv_alphas, "alpha grid")->delimiter(',')->capture_default_str();
  cv->add_option("--betas", cv_betas, "beta grid")->delimiter(',')->capture_default_str();
  cv->add_option("--folds", cv_folds, "trailing blocks used as folds (default: min(10, n/4))");
  cv->add_option("--out", cv_out, "score grid CSV");
  add_geometry(cv, cv_geo);

  // bench-wong -------------------------------------------------------------
  arhd::wong::WongConfig bw_cfg;
  MethodOpts bw_methods;
  int bw_reps = 50, bw_jobs = 1;
  std::optional<int> bw_n_funcs;
  std::string bw_out, bw_json;
  auto* bw = app.add_subcommand("bench-wong", "Wong simulation benchmark");
  bw->add_option("--replicates", bw_reps, "simulated trajectories")->capture_default_str();
  bw->add_option("--seed", bw_cfg.seed, "base seed")->capture_default_str();
  bw->add_option("--jobs", bw_jobs, "worker threads")->capture_default_str();
  bw->add_option("--n", bw_cfg.n_blocks, "blocks per replicate (last one held out)")->capture_default_str();
  bw->add_option("--m", bw_cfg.m, "grid points per block")->capture_default_str();
  bw->add_option("--delta", bw_cfg.delta, "block length")->capture_default_str();
  bw->add_option("--burn-in", bw_cfg.burn_in, "discarded leading blocks")->capture_default_str();
  bw->add_option("--inner-steps", bw_cfg.inner_steps, "Brownian sub-steps per grid interval")->capture_default_str();
  bw->add_option("--N", bw_n_funcs, "number of basis functions (default: from m)");
  bw->add_option("--out", bw_out, "report CSV");
  bw->add_option("--json", bw_json, "report JSON");
  add_methods(bw, bw_methods, {"arh", "arf", "arw", "arhd"}, {"0.3:0.65", "0.1:0.5"});

  // bench-sst --------------------------------------------------------------
  GeometryOpts bs_geo;
  MethodOpts bs_methods;
  std::string bs_in, bs_out, bs_json, bs_study;
  std::optional<int> bs_first_year, bs_horizon;
  auto* bs = app.add_subcommand("bench-sst", "rolling yearly forecasts of a monthly temperature series");
  bs->add_option("--in", bs_in, "monthly series CSV, one value per month")->required();
  bs->add_option("--study", bs_study, "1986 (one-shot) or 1987-96 (rolling); needs --first-year")
      ->check(CLI::IsMember({"1986", "1987-96"}));
  bs->add_option("--first-year", bs_first_year, "calendar year of the first block");
  bs->add_option("--horizon-years", bs_horizon, "trailing years to forecast (when --study is not given)");
  bs->add_option("--out", bs_out, "report CSV");
  bs->add_option("--json", bs_json, "report JSON");
  add_methods(bs, bs_methods, {"arhd", "arh"}, {"0.1:0.4", "0.4:0.8"});
  add_geometry(bs, bs_geo);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const arhd::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*sim) {
      ConfigEcho echo{{"command", "simulate"},
                      {"generator", "wong"},
                      {"n", std::to_string(sim_cfg.n_blocks)},
                      {"m", std::to_string(sim_cfg.m)},
                      {"delta", format_double(sim_cfg.delta)},
                      {"seed", std::to_string(sim_cfg.seed)},
                      {"burn_in", std::to_string(sim_cfg.burn_in)},
                      {"inner_steps", std::to_string(sim_cfg.inner_steps)}};
      const auto result = arhd::wong::simulate(sim_cfg);
      nlohmann::json manifest;
      for (const auto& [k, v] : echo) manifest[k] = v;
      manifest["values"] = result.trajectory.values.size();
      manifest["output"] = std::filesystem::path(sim_out).filename().string();
      arhd::write_file_atomic(sim_out, arhd::trajectory_csv(result.trajectory, echo));
      arhd::write_file_atomic(sim_manifest.empty() ? sim_out + ".json" : sim_manifest, manifest.dump(2) + "\n");
      std::cout << "wrote " << result.trajectory.values.size() << " values (" << sim_cfg.n_blocks << " blocks of "
                << sim_cfg.m << ") to " << sim_out << '\n';
    } else if (*fitc) {
      const Loaded l = load(fit_in, fit_geo, kWongM, kWongDelta);
      const arhd::CurvePanel panel = arhd::center(arhd::slice(l.traj, l.spec));
      arhd::PenaltyConfig pen = fit_pen;
      if (fit_rate_a || fit_rate_b) {
        if (!fit_rate_a || !fit_rate_b) throw std::invalid_argument("--rate-a and --rate-b must be given together");
        pen = arhd::PenaltyConfig::schedule(panel.n(), *fit_rate_a, *fit_rate_b);
      }
      const arhd::ArhdFit f = arhd::fit(panel, pen);
      ConfigEcho echo{{"command", "fit"}, {"in", fit_in}};
      echo_geometry(echo, l);
      echo.emplace_back("alpha", format_double(pen.alpha));
      echo.emplace_back("beta", format_double(pen.beta));
      echo.emplace_back("n", std::to_string(panel.n()));
      echo.emplace_back("s_phi_min_eigenvalue", format_double(f.diagnostics.s_phi_min_eigenvalue));
      echo.emplace_back("s_psi_min_eigenvalue", format_double(f.diagnostics.s_psi_min_eigenvalue));
      echo.emplace_back("a_hat_norm", format_double(f.diagnostics.a_hat_norm));
      arhd::write_file_atomic(fit_out, arhd::serialize_fit(f, echo));
      std::cout << "fitted N=" << l.spec.size() << " on " << panel.n() << " blocks; ||A_hat||_2 = "
                << format_double(f.diagnostics.a_hat_norm) << '\n';
    } else if (*pred) {
      GeometryOpts geo = pred_geo;
      std::optional<arhd::ArhdFit> fitted;
      if (!pred_fit.empty()) {
        fitted = arhd::deserialize_fit(arhd::read_file(pred_fit));
        if (!geo.delta) geo.delta = fitted->spec.delta();
        if (geo.n_funcs && *geo.n_funcs != fitted->spec.size())
          throw std::invalid_argument("--N differs from the fit file");
        geo.n_funcs = fitted->spec.size();
      }
      const Loaded l = load(pred_in, geo, kWongM, kWongDelta);
      if (fitted && std::abs(fitted->spec.delta() - l.traj.delta) > 1e-12)
        throw std::invalid_argument("input block length differs from the fit file");
      const arhd::CurvePanel raw = arhd::slice(l.traj, l.spec);
      const int n_in = pred_holdout ? raw.n() - 1 : raw.n();
      const arhd::CurvePanel history = raw.columns(0, n_in);
      arhd::Prediction p;
      ConfigEcho echo{{"command", "predict"}, {"in", pred_in}, {"holdout", pred_holdout ? "true" : "false"}};
      echo_geometry(echo, l);
      if (fitted) {
        arhd::CoeffVec last = history.curve(n_in - 1);
        last.coeffs -= fitted->mean_curve.coeffs;
        p = arhd::predict_arhd(*fitted, last, arhd::differentiate(l.spec, last), l.traj.m);
        echo.emplace_back("fit", pred_fit);
      } else {
        const arhd::MethodSpec ms{arhd::method_from_string(pred_method), {pred_alpha, pred_beta, {}, {}}, pred_kn};
        if (pred_kn < 1) throw std::invalid_argument("--k-n must be >= 1");
        p = arhd::forecast_next(history, ms, l.traj.m);
        echo.emplace_back("method", pred_method);
        echo.emplace_back("params", ms.params());
      }
      std::optional<Eigen::VectorXd> observed;
      if (pred_holdout) {
        observed = raw.samples()->col(raw.n() - 1);
        const double e = arhd::mse(*observed, p.values);
        const auto r = arhd::rmae(*observed, p.values);
        echo.emplace_back("mse", format_double(e));
        echo.emplace_back("rmae", format_double(r.value));
        std::cout << p.method << " holdout MSE " << format_double(e) << "  RMAE " << format_double(r.value) << '\n';
      }
      const double t0 = l.traj.t0 + n_in * l.traj.delta;
      arhd::write_file_atomic(pred_out,
                              arhd::prediction_csv(p, l.traj.delta, observed ? &*observed : nullptr, echo, t0));
      std::cout << "wrote " << p.values.size() << " predicted values to " << pred_out << '\n';
    } else if (*ev) {
      const Loaded l = load(ev_in, ev_geo, kWongM, kWongDelta);
      arhd::RollingOptions opt{resolve_methods(ev_methods), l.spec.size()};
      arhd::EvalReport r = arhd::rolling_benchmark(l.traj, ev_horizon, opt);
      r.config_echo.emplace_back("in", ev_in);
      r.config_echo.emplace_back("methods", join(ev_methods.methods));
      r.config_echo.emplace_back("penalties", join(ev_methods.penalties));
      r.config_echo.emplace_back("k_n", std::to_string(ev_methods.k_n));
      write_report(r, ev_out, ev_json);
    } else if (*cv) {
      const Loaded l = load(cv_in, cv_geo, kWongM, kWongDelta);
      const arhd::CurvePanel raw = arhd::slice(l.traj, l.spec);
      std::vector<arhd::PenaltyConfig> grid;
      for (double a : cv_alphas)
        for (double b : cv_betas) grid.push_back({a, b, std::nullopt, std::nullopt});
      const int folds = cv_folds ? *cv_folds : arhd::default_cv_folds(raw.n());
      const arhd::CvResult res = arhd::cross_validate(raw, grid, folds, l.traj.m);
      ConfigEcho echo{{"command", "cv"}, {"in", cv_in}, {"folds", std::to_string(folds)}};
      echo_geometry(echo, l);
      echo.emplace_back("best_alpha", format_double(res.best.alpha));
      echo.emplace_back("best_beta", format_double(res.best.beta));
      std::string csv = arhd::echo_as_comments(echo) + "alpha,beta,mse\n";
      for (std::size_t g = 0; g < grid.size(); ++g)
        csv += format_double(grid[g].alpha) + "," + format_double(grid[g].beta) + "," +
               format_double(res.scores[g]) + "\n";
      if (!cv_out.empty()) arhd::write_file_atomic(cv_out, csv);
      std::cout << "best alpha=" << format_double(res.best.alpha) << " beta=" << format_double(res.best.beta)
                << " over " << folds << " folds\n";
    } else if (*bw) {
      arhd::WongBenchmarkOptions opt{resolve_methods(bw_methods), bw_n_funcs.value_or(0), bw_jobs};
      if (bw_jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
      arhd::EvalReport r = arhd::benchmark_wong(bw_reps, bw_cfg, opt);
      r.config_echo.emplace_back("methods", join(bw_methods.methods));
      r.config_echo.emplace_back("penalties", join(bw_methods.penalties));
      r.config_echo.emplace_back("k_n", std::to_string(bw_methods.k_n));
      write_report(r, bw_out, bw_json);
    } else if (*bs) {
      GeometryOpts geo = bs_geo;
      if (!geo.m) geo.m = 12;
      const Loaded full = load(bs_in, geo, 12, 1.0);
      arhd::Trajectory traj = full.traj;
      int horizon = bs_horizon.value_or(1);
      if (!bs_study.empty()) {
        if (!bs_first_year) throw std::invalid_argument("--study needs --first-year");
        if (bs_horizon) throw std::invalid_argument("--study and --horizon-years are exclusive");
        const int last_year = bs_study == "1986" ? 1986 : 1996;
        horizon = bs_study == "1986" ? 1 : 10;
        const int keep = last_year - *bs_first_year + 1;
        if (keep < 1 || keep > traj.n_blocks())
          throw std::invalid_argument("series from " + std::to_string(*bs_first_year) + " does not cover " +
                                      std::to_string(last_year));
        traj.values.resize(static_cast<std::size_t>(keep) * static_cast<std::size_t>(traj.m));
      }
      arhd::RollingOptions opt{resolve_methods(bs_methods), full.spec.size()};
      arhd::EvalReport r = arhd::benchmark_sst(traj, horizon, opt);
      r.config_echo.emplace_back("in", bs_in);
      if (!bs_study.empty()) r.config_echo.emplace_back("study", bs_study);
      if (bs_first_year) r.config_echo.emplace_back("first_year", std::to_string(*bs_first_year));
      r.config_echo.emplace_back("methods", join(bs_methods.methods));
      r.config_echo.emplace_back("penalties", join(bs_methods.penalties));
      r.config_echo.emplace_back("k_n", std::to_string(bs_methods.k_n));
      write_report(r, bs_out, bs_json);
    }
  } catch (const arhd::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
