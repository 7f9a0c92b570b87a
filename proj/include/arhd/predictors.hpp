#pragma once

// One-block-ahead predictors: ARHD (derivative-augmented), and the ARH(1)
// projection baselines ARW (Sobolev coordinates), ARF (L2 Fourier coordinates)
// and ARH (raw grid values with linear interpolation).  Also rolling-origin
// cross-validation of the ARHD penalties.

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arhd/basis.hpp"
#include "arhd/covariance.hpp"
#include "arhd/curve_model.hpp"
#include "arhd/estimator.hpp"
#include "arhd/io.hpp"
#include "arhd/metrics.hpp"

namespace arhd {

struct Prediction {
  CoeffVec coeffs;         // W-coordinates, mean added back
  Eigen::VectorXd values;  // reconstruct(coeffs) on the midpoint grid
  std::string method;
  ConfigEcho params;
};

namespace detail {

inline Prediction make_prediction(const BasisSpec& spec, Eigen::VectorXd coeffs, int m, std::string method,
                                  ConfigEcho params) {
  CoeffVec c{Space::W, std::move(coeffs)};
  Eigen::VectorXd values = reconstruct(spec, c, midpoint_grid(spec.delta(), m));
  return {std::move(c), std::move(values), std::move(method), std::move(params)};
}

}  // namespace detail

inline Prediction predict_arhd(const ArhdFit& fit, const CoeffVec& last_curve, const CoeffVec& last_deriv, int m) {
  const auto n = fit.spec.size();
  if (last_curve.size() != n || last_deriv.size() != n)
    throw std::invalid_argument("predict_arhd: coefficient length differs from the fit's N");
  Eigen::VectorXd c = fit.phi.apply(last_curve).coeffs + fit.psi.apply(last_deriv).coeffs + fit.mean_curve.coeffs;
  return detail::make_prediction(fit.spec, std::move(c), m, "ARHD",
                                 {{"alpha", format_double(fit.penalty.alpha)},
                                  {"beta", format_double(fit.penalty.beta)}});
}

/// ARH(1) projection estimator: with (lambda_i, v_i) the top-k eigenpairs of the
/// empirical covariance of the centered columns of `coords`, returns
/// rho = V V^T Delta V diag(1/lambda) V^T.  A sample with no variability at all
/// yields the zero operator.
inline Eigen::MatrixXd projection_autocorrelation(const Eigen::MatrixXd& coords, int k) {
  const auto d = coords.rows();
  const auto n = coords.cols();
  if (k < 1 || k > d)
    throw std::invalid_argument("projection estimator: k_n must lie in [1, " + std::to_string(d) + "], got " +
                                std::to_string(k));
  if (n < 2) throw std::invalid_argument("projection estimator: need at least 2 curves");
  const Eigen::MatrixXd gamma = coords * coords.transpose() / static_cast<double>(n);
  const Eigen::MatrixXd lag =
      coords.rightCols(n - 1) * coords.leftCols(n - 1).transpose() / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gamma + gamma.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("projection estimator: eigensolver failed");
  const double top = es.eigenvalues()(d - 1);
  if (top <= 0.0) return Eigen::MatrixXd::Zero(d, d);
  const Eigen::MatrixXd v = es.eigenvectors().rightCols(k);
  const Eigen::VectorXd lambda = es.eigenvalues().tail(k);
  if (lambda(0) <= 1e-12 * top)
    throw NumericalError("projection estimator: zero eigenvalue inside the retained " + std::to_string(k) +
                         "-dimensional subspace");
  return v * (v.transpose() * lag * v) * lambda.cwiseInverse().asDiagonal() * v.transpose();
}

/// ARW: projection estimator on W-coordinates of a centered panel.
inline Prediction predict_arw(const CurvePanel& panel, int k_n, const CoeffVec& last_curve, int m) {
  if (!panel.centered()) throw std::invalid_argument("predict_arw: panel must be centered");
  if (last_curve.space != Space::W || last_curve.size() != panel.spec().size())
    throw std::invalid_argument("predict_arw: last curve must be W-coordinates of length N");
  const Eigen::MatrixXd rho = projection_autocorrelation(panel.X(), k_n);
  return detail::make_prediction(panel.spec(), rho * last_curve.coeffs + panel.mean_curve().coeffs, m, "ARW",
                                 {{"k_n", std::to_string(k_n)}});
}

/// ARF: projection estimator on L2 Fourier coordinates (no Sobolev weights).
inline Prediction predict_arf(const CurvePanel& panel, int k_n, const CoeffVec& last_curve, int m) {
  if (!panel.centered()) throw std::invalid_argument("predict_arf: panel must be centered");
  if (last_curve.space != Space::W || last_curve.size() != panel.spec().size())
    throw std::invalid_argument("predict_arf: last curve must be W-coordinates of length N");
  const Eigen::VectorXd s = panel.spec().weights();
  const Eigen::MatrixXd l2 = s.asDiagonal() * panel.X();
  const Eigen::MatrixXd rho = projection_autocorrelation(l2, k_n);
  const Eigen::VectorXd next_l2 = rho * s.cwiseProduct(last_curve.coeffs);
  return detail::make_prediction(panel.spec(), next_l2.cwiseQuotient(s) + panel.mean_curve().coeffs, m, "ARF",
                                 {{"k_n", std::to_string(k_n)}});
}

/// Gram matrix of the piecewise-linear interpolant through midpoint-grid
/// samples (held constant over the two half cells at the ends).
inline Eigen::MatrixXd linear_interpolation_gram(double delta, int m) {
  if (m < 2) throw std::invalid_argument("linear_interpolation_gram: need m >= 2");
  const double h = delta / m;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    g(i, i) = 2.0 * h / 3.0;
    if (i + 1 < m) g(i, i + 1) = g(i + 1, i) = h / 6.0;
  }
  g(0, 0) = g(m - 1, m - 1) = 5.0 * h / 6.0;
  return g;
}

/// ARH: projection estimator on raw grid values of an uncentered or centered
/// panel built from a trajectory.  Uses the training grid mean for centering,
/// then expresses the forecast in the panel's basis.
inline Prediction predict_arh_linear(const CurvePanel& panel, int k_n, const Eigen::VectorXd& last_values) {
  if (!panel.samples())
    throw std::invalid_argument("predict_arh_linear: panel carries no raw grid samples");
  const Eigen::MatrixXd& raw = *panel.samples();
  const auto m = static_cast<int>(raw.rows());
  if (last_values.size() != m) throw std::invalid_argument("predict_arh_linear: last block has wrong length");
  const double delta = panel.spec().delta();

  const Eigen::VectorXd mean = raw.rowwise().mean();
  const Eigen::MatrixXd centered = raw.colwise() - mean;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(linear_interpolation_gram(delta, m));
  const Eigen::MatrixXd half = gram.operatorSqrt();
  const Eigen::MatrixXd half_inv = gram.operatorInverseSqrt();

  const Eigen::MatrixXd rho = projection_autocorrelation(half * centered, k_n);
  const Eigen::VectorXd next = half_inv * (rho * (half * (last_values - mean))) + mean;
  Eigen::VectorXd c = project_curve(panel.spec(), std::span<const double>(next.data(), m)).coeffs;
  return detail::make_prediction(panel.spec(), std::move(c), m, "ARH", {{"k_n", std::to_string(k_n)}});
}

enum class Method { arhd, arw, arf, arh };

inline std::string_view method_label(Method m) {
  switch (m) {
    case Method::arhd: return "ARHD";
    case Method::arw: return "ARW";
    case Method::arf: return "ARF";
    case Method::arh: return "ARH";
  }
  return "?";
}

inline Method method_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "arhd") return Method::arhd;
  if (lower == "arw") return Method::arw;
  if (lower == "arf") return Method::arf;
  if (lower == "arh") return Method::arh;
  throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected arhd, arw, arf or arh)");
}

/// One configured predictor.
struct MethodSpec {
  Method method = Method::arhd;
  PenaltyConfig penalty;
  int k_n = 1;

  std::string params() const {
    if (method == Method::arhd)
      return "alpha=" + format_double(penalty.alpha) + " beta=" + format_double(penalty.beta);
    return "k_n=" + std::to_string(k_n);
  }
};

/// Forecast of the block following the last column of an uncentered panel,
/// fitting on the whole panel after centering it on its own mean.
inline Prediction forecast_next(const CurvePanel& raw_panel, const MethodSpec& ms, int m) {
  if (raw_panel.centered()) throw std::invalid_argument("forecast_next: expects an uncentered panel");
  if (ms.method == Method::arh) {
    if (!raw_panel.samples()) throw std::invalid_argument("forecast_next: ARH needs raw grid samples");
    return predict_arh_linear(raw_panel, ms.k_n, raw_panel.samples()->col(raw_panel.n() - 1));
  }
  const CurvePanel panel = center(raw_panel);
  const CoeffVec last = panel.curve(panel.n() - 1);
  switch (ms.method) {
    case Method::arhd:
      return predict_arhd(fit(panel, ms.penalty), last, differentiate(panel.spec(), last), m);
    case Method::arw: return predict_arw(panel, ms.k_n, last, m);
    case Method::arf: return predict_arf(panel, ms.k_n, last, m);
    case Method::arh: break;
  }
  throw std::logic_error("forecast_next: unhandled method");
}

/// Observed grid values of column i: raw samples when present, otherwise the
/// reconstruction of the (uncentered) coefficients.
inline Eigen::VectorXd observed_block(const CurvePanel& panel, int i, int m) {
  if (panel.samples()) return panel.samples()->col(i);
  CoeffVec c = panel.curve(i);
  c.coeffs += panel.mean_curve().coeffs;
  return reconstruct(panel.spec(), c, midpoint_grid(panel.spec().delta(), m));
}

struct CvResult {
  std::vector<PenaltyConfig> grid;
  std::vector<double> scores;  // mean MSE per grid point
  PenaltyConfig best;
};

inline int default_cv_folds(int n) { return std::max(1, std::min(10, n / 4)); }

/// Rolling-origin cross-validation: each of the last `folds` blocks is
/// predicted from all earlier blocks and scored by MSE on the grid.
inline CvResult cross_validate(const CurvePanel& raw_panel, const std::vector<PenaltyConfig>& grid, int folds,
                               int m) {
  if (raw_panel.centered()) throw std::invalid_argument("cross_validate: expects an uncentered panel");
  if (grid.empty()) throw std::invalid_argument("cross_validate: empty penalty grid");
  if (folds < 1) throw std::invalid_argument("cross_validate: need at least one fold");
  if (raw_panel.n() - folds < 3)
    throw std::invalid_argument("cross_validate: insufficient history (n - folds must be >= 3)");
  for (const auto& p : grid) p.validate();

  CvResult out{grid, std::vector<double>(grid.size(), 0.0), grid.front()};
  for (int f = 0; f < folds; ++f) {
    const int target = raw_panel.n() - folds + f;
    const CurvePanel train = center(raw_panel.columns(0, target));
    const Covariances cov = covariances(train);
    const CoeffVec last = train.curve(train.n() - 1);
    const CoeffVec last_d = differentiate(train.spec(), last);
    const Eigen::VectorXd observed = observed_block(raw_panel, target, m);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const ArhdFit fitted = fit(cov, train.spec(), train.mean_curve(), grid[g]);
      const Prediction p = predict_arhd(fitted, last, last_d, m);
      out.scores[g] += mse(observed, p.values) / folds;
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const auto& b = grid[best];
    const auto& c = grid[g];
    const bool better = out.scores[g] < out.scores[best] ||
                        (out.scores[g] == out.scores[best] &&
                         (c.alpha > b.alpha || (c.alpha == b.alpha && c.beta > b.beta)));
    if (better) best = g;
  }
  out.best = grid[best];
  return out;
}

/// Prediction export: `t,observed,predicted,method`; observed left empty when unknown.
inline std::string prediction_csv(const Prediction& p, double delta, const Eigen::VectorXd* observed,
                                  const ConfigEcho& echo, double t0 = 0.0) {
  std::string out = echo_as_comments(echo);
  out += "t,observed,predicted,method\n";
  const auto m = static_cast<int>(p.values.size());
  const Eigen::VectorXd grid = midpoint_grid(delta, m);
  for (int j = 0; j < m; ++j) {
    out += format_double(t0 + grid(j)) + ",";
    if (observed) out += format_double((*observed)(j));
    out += "," + format_double(p.values(j)) + "," + p.method + "\n";
  }
  return out;
}

}  // namespace arhd
