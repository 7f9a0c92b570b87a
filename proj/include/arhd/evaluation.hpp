#pragma once

// Benchmarks: the Wong simulation study and rolling one-year-ahead sea
// surface temperature forecasts, with report writers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "arhd/basis.hpp"
#include "arhd/curve_model.hpp"
#include "arhd/io.hpp"
#include "arhd/metrics.hpp"
#include "arhd/predictors.hpp"
#include "arhd/wong.hpp"

namespace arhd {

struct MethodScore {
  std::string method;
  std::string params;
  double mse = 0.0;     // mean over replicates / forecast blocks
  double rmae = 0.0;    // mean over replicates / forecast blocks
  double mse_se = 0.0;  // standard error of the mean MSE
  int rmae_excluded = 0;
  std::vector<double> mse_samples;
};

/// Competitor results quoted for context; never computed here.
struct PublishedRow {
  std::string method;
  std::string study;
  double mse = 0.0;
  double rmae = 0.0;
};

struct EvalReport {
  std::vector<MethodScore> per_method;
  int replicates = 0;
  ConfigEcho config_echo;
  std::vector<PublishedRow> published;

  const MethodScore& score(std::string_view method, std::string_view params = {}) const {
    for (const auto& s : per_method)
      if (s.method == method && (params.empty() || s.params == params)) return s;
    throw std::out_of_range("report has no row for " + std::string(method));
  }
};

namespace detail {

struct Outcome {
  double mse = 0.0;
  double rmae = 0.0;
  int excluded = 0;
};

inline MethodScore summarize(const MethodSpec& ms, const std::vector<Outcome>& outcomes) {
  MethodScore s;
  s.method = std::string(method_label(ms.method));
  s.params = ms.params();
  const auto n = static_cast<double>(outcomes.size());
  for (const auto& o : outcomes) {
    s.mse += o.mse / n;
    s.rmae += o.rmae / n;
    s.rmae_excluded += o.excluded;
    s.mse_samples.push_back(o.mse);
  }
  if (outcomes.size() > 1) {
    double var = 0.0;
    for (const auto& o : outcomes) var += (o.mse - s.mse) * (o.mse - s.mse);
    s.mse_se = std::sqrt(var / (n - 1.0) / n);
  }
  return s;
}

inline Outcome score_block(const Eigen::VectorXd& observed, const Prediction& p) {
  const auto r = rmae(observed, p.values);
  return {mse(observed, p.values), r.value, r.excluded};
}

// Runs work(i) for i in [0, count) on up to `jobs` threads.
template <class Fn>
void parallel_for(int count, int jobs, Fn&& work) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (int i = j; i < count; i += jobs) work(i);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

struct WongBenchmarkOptions {
  std::vector<MethodSpec> methods;
  int n_funcs = 0;  // 0: default_truncation(m)
  int jobs = 1;
};

/// Simulates `replicates` independent Wong trajectories; in each, every
/// method is fitted on the first n - 1 blocks and scored on block n.
inline EvalReport benchmark_wong(int replicates, const wong::WongConfig& cfg, const WongBenchmarkOptions& opt) {
  if (replicates < 2) throw std::invalid_argument("benchmark_wong: need at least 2 replicates");
  cfg.validate();
  if (cfg.n_blocks < 4) throw std::invalid_argument("benchmark_wong: need at least 4 blocks per replicate");
  if (opt.methods.empty()) throw std::invalid_argument("benchmark_wong: no methods");
  const BasisSpec spec(cfg.delta, opt.n_funcs > 0 ? opt.n_funcs : default_truncation(cfg.m));

  std::vector<std::vector<detail::Outcome>> outcomes(
      opt.methods.size(), std::vector<detail::Outcome>(static_cast<std::size_t>(replicates)));
  detail::parallel_for(replicates, opt.jobs, [&](int r) {
    auto rng = wong::replicate_rng(cfg.seed, static_cast<std::uint64_t>(r));
    const auto sim = wong::simulate(cfg, rng);
    const CurvePanel panel = slice(sim.trajectory, spec);
    const CurvePanel train = panel.columns(0, panel.n() - 1);
    const Eigen::VectorXd observed = panel.samples()->col(panel.n() - 1);
    for (std::size_t k = 0; k < opt.methods.size(); ++k)
      outcomes[k][static_cast<std::size_t>(r)] =
          detail::score_block(observed, forecast_next(train, opt.methods[k], cfg.m));
  });

  EvalReport report;
  report.replicates = replicates;
  for (std::size_t k = 0; k < opt.methods.size(); ++k)
    report.per_method.push_back(detail::summarize(opt.methods[k], outcomes[k]));
  report.config_echo = {{"command", "bench-wong"},
                        {"replicates", std::to_string(replicates)},
                        {"n", std::to_string(cfg.n_blocks)},
                        {"m", std::to_string(cfg.m)},
                        {"delta", format_double(cfg.delta)},
                        {"seed", std::to_string(cfg.seed)},
                        {"burn_in", std::to_string(cfg.burn_in)},
                        {"inner_steps", std::to_string(cfg.inner_steps)},
                        {"N", std::to_string(spec.size())}};
  return report;
}

/// Quoted competitor rows for the 1986 one-shot and 1987-96 rolling studies
/// (RMAE as a fraction).
inline std::vector<PublishedRow> published_sst_rows(int horizon_years) {
  if (horizon_years == 1)
    return {{"Wavelet II", "1986", 0.063, 0.0089},
            {"FAR", "1986", 0.065, 0.0089},
            {"Wavelet III", "1986", 0.191, 0.0120},
            {"SARIMA", "1986", 1.457, 0.0372}};
  return {{"Local FAR", "1987-96", 0.53, 0.022}, {"FAR", "1987-96", 0.55, 0.023}, {"SARIMA", "1987-96", 1.45, 0.037}};
}

struct RollingOptions {
  std::vector<MethodSpec> methods;
  int n_funcs = 0;  // 0: default_truncation(m)
};

/// Rolling one-block-ahead forecasts of the last `horizon` blocks of a
/// trajectory, each fitted on all earlier blocks.
inline EvalReport rolling_benchmark(const Trajectory& traj, int horizon, const RollingOptions& opt) {
  traj.validate();
  if (horizon < 1) throw std::invalid_argument("rolling_benchmark: horizon must be at least one block");
  if (traj.n_blocks() - horizon < 4)
    throw std::invalid_argument("rolling_benchmark: need at least 4 blocks of history before the forecast period");
  if (opt.methods.empty()) throw std::invalid_argument("rolling_benchmark: no methods");
  const BasisSpec spec(traj.delta, opt.n_funcs > 0 ? opt.n_funcs : default_truncation(traj.m));
  const CurvePanel panel = slice(traj, spec);

  EvalReport report;
  report.replicates = horizon;
  for (const auto& ms : opt.methods) {
    std::vector<detail::Outcome> outcomes;
    for (int h = 0; h < horizon; ++h) {
      const int target = panel.n() - horizon + h;
      const Prediction p = forecast_next(panel.columns(0, target), ms, traj.m);
      outcomes.push_back(detail::score_block(panel.samples()->col(target), p));
    }
    report.per_method.push_back(detail::summarize(ms, outcomes));
  }
  report.config_echo = {{"command", "evaluate"},
                        {"horizon", std::to_string(horizon)},
                        {"n", std::to_string(traj.n_blocks())},
                        {"m", std::to_string(traj.m)},
                        {"delta", format_double(traj.delta)},
                        {"N", std::to_string(spec.size())}};
  return report;
}

/// Monthly sea surface temperature variant: m = 12 and the matching
/// published competitor rows attached.
inline EvalReport benchmark_sst(const Trajectory& traj, int horizon_years, const RollingOptions& opt) {
  if (traj.m != 12) throw std::invalid_argument("benchmark_sst: expected monthly blocks (m = 12)");
  if (horizon_years < 1) throw std::invalid_argument("benchmark_sst: horizon must be at least one year");
  if (traj.n_blocks() - horizon_years < 4)
    throw std::invalid_argument("benchmark_sst: need at least 4 years of history before the forecast period");
  EvalReport report = rolling_benchmark(traj, horizon_years, opt);
  report.published = published_sst_rows(horizon_years);
  report.config_echo[0].second = "bench-sst";
  report.config_echo[1].first = "horizon_years";
  return report;
}

inline void print_report(std::ostream& out, const EvalReport& r) {
  out << std::left << std::setw(8) << "method" << std::setw(26) << "params" << std::right << std::setw(10) << "MSE"
      << std::setw(10) << "RMAE" << std::setw(12) << "replicates" << '\n';
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  for (const auto& s : r.per_method)
    out << std::left << std::setw(8) << s.method << std::setw(26) << s.params << std::right << std::setw(10)
        << s.mse << std::setw(10) << s.rmae << std::setw(12) << r.replicates << '\n';
  if (!r.published.empty()) {
    out << "published, not computed:\n";
    for (const auto& p : r.published)
      out << std::left << std::setw(8) << "" << std::setw(26) << (p.method + " (" + p.study + ")") << std::right
          << std::setw(10) << p.mse << std::setw(10) << p.rmae << '\n';
  }
  out.flags(flags);
}

inline std::string report_csv(const EvalReport& r) {
  std::string out = echo_as_comments(r.config_echo);
  out += "method,params,mse,rmae,replicates,source\n";
  for (const auto& s : r.per_method)
    out += s.method + "," + s.params + "," + format_double(s.mse) + "," + format_double(s.rmae) + "," +
           std::to_string(r.replicates) + ",computed\n";
  for (const auto& p : r.published)
    out += p.method + "," + p.study + "," + format_double(p.mse) + "," + format_double(p.rmae) +
           ",,published not computed\n";
  return out;
}

inline nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json j;
  j["config"] = nlohmann::json::object();
  for (const auto& [k, v] : r.config_echo) j["config"][k] = v;
  j["replicates"] = r.replicates;
  j["methods"] = nlohmann::json::array();
  for (const auto& s : r.per_method)
    j["methods"].push_back({{"method", s.method},
                            {"params", s.params},
                            {"mse", s.mse},
                            {"rmae", s.rmae},
                            {"mse_se", s.mse_se},
                            {"rmae_excluded_points", s.rmae_excluded},
                            {"replicates", r.replicates}});
  j["published_not_computed"] = nlohmann::json::array();
  for (const auto& p : r.published)
    j["published_not_computed"].push_back(
        {{"method", p.method}, {"study", p.study}, {"mse", p.mse}, {"rmae", p.rmae}});
  return j;
}

}  // namespace arhd
