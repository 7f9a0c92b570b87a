#include "arhd/curve_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

namespace arhd {
namespace {

Trajectory repeat_block(const std::vector<double>& block, int n, double delta) {
  Trajectory t;
  t.delta = delta;
  t.m = static_cast<int>(block.size());
  for (int i = 0; i < n; ++i) t.values.insert(t.values.end(), block.begin(), block.end());
  return t;
}

// Band-limited random panel with its raw trajectory.
Trajectory band_limited(std::mt19937_64& rng, const BasisSpec& spec, int n, int m,
                        std::vector<testing::TrigCurve>* curves = nullptr) {
  Trajectory t;
  t.delta = spec.delta();
  t.m = m;
  for (int i = 0; i < n; ++i) {
    const testing::TrigCurve f{testing::gaussian_vector(rng, spec.size()), spec.delta()};
    const auto s = testing::sample_midpoints(f, m);
    t.values.insert(t.values.end(), s.begin(), s.end());
    if (curves) curves->push_back(f);
  }
  return t;
}

TEST(Trajectory, Validation) {
  Trajectory t = repeat_block(std::vector<double>(10, 1.0), 3, 1.0);
  EXPECT_NO_THROW(t.validate());
  t.values.pop_back();
  EXPECT_THROW(t.validate(), std::invalid_argument);
  EXPECT_THROW(repeat_block(std::vector<double>(10, 1.0), 2, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(repeat_block(std::vector<double>(10, 1.0), 3, 0.0).validate(), std::invalid_argument);
}

TEST(Slice, IdenticalBlocksGiveIdenticalColumns) {
  std::vector<double> block(20);
  for (int j = 0; j < 20; ++j) block[j] = std::sin(0.3 * j) + 0.1 * j;
  const CurvePanel p = slice(repeat_block(block, 3, 1.0), BasisSpec(1.0, 7));
  ASSERT_EQ(p.n(), 3);
  EXPECT_EQ((p.X().col(0) - p.X().col(1)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((p.X().col(0) - p.X().col(2)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_FALSE(p.centered());
  EXPECT_EQ(p.mean_curve().coeffs.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Slice, SineTrajectory) {
  const double delta = 1.8348;
  const BasisSpec spec(delta, 9);
  const int m = 50, n = 6;
  Trajectory t;
  t.delta = delta;
  t.m = m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) t.values.push_back(std::sin(2.0 * std::numbers::pi * (j + 0.5) / m));
  const CurvePanel p = slice(t, spec);
  // sin(2 pi t / delta) = sqrt(delta / 2) e_2
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 9; ++k)
      EXPECT_NEAR(p.X()(k, i), k == 2 ? std::sqrt(delta / 2.0) / spec.weight_of_index(2) : 0.0, 1e-12);
}

TEST(Slice, WongGeometry) {
  std::mt19937_64 rng(1);
  const BasisSpec spec(1.8348, 21);
  const CurvePanel p = slice(band_limited(rng, spec, 105, 50), spec);
  EXPECT_EQ(p.n(), 105);
  EXPECT_EQ(p.X().rows(), 21);
  ASSERT_TRUE(p.samples().has_value());
  EXPECT_EQ(p.samples()->rows(), 50);
}

TEST(Slice, Preconditions) {
  std::mt19937_64 rng(1);
  const BasisSpec spec(1.0, 21);
  EXPECT_THROW(slice(band_limited(rng, BasisSpec(1.0, 9), 4, 20), spec), std::invalid_argument);  // m < N
  EXPECT_THROW(slice(band_limited(rng, BasisSpec(2.0, 9), 4, 50), spec), std::invalid_argument);  // delta
}

TEST(Slice, DerivativeConsistency) {
  std::mt19937_64 rng(3);
  const BasisSpec spec(1.8348, 21);
  std::vector<testing::TrigCurve> curves;
  const CurvePanel p = slice(band_limited(rng, spec, 5, 50, &curves), spec);
  const Eigen::VectorXd grid = midpoint_grid(spec.delta(), 50);
  for (int i = 0; i < p.n(); ++i) {
    EXPECT_EQ((p.Xp().col(i) - differentiate(spec, p.curve(i)).coeffs).cwiseAbs().maxCoeff(), 0.0);
    const Eigen::VectorXd slope = reconstruct(spec, p.derivative(i), grid);
    for (int j = 0; j < 50; ++j)
      EXPECT_NEAR(slope(j), curves[i].slope(grid(j)), 1e-8 * (1.0 + std::abs(slope(j))));
  }
}

TEST(Slice, ReconstructRoundTrip) {
  std::mt19937_64 rng(4);
  const BasisSpec spec(1.8348, 21);
  const Trajectory t = band_limited(rng, spec, 4, 50);
  const CurvePanel p = slice(t, spec);
  const Eigen::VectorXd grid = midpoint_grid(spec.delta(), 50);
  for (int i = 0; i < p.n(); ++i) {
    const Eigen::VectorXd v = reconstruct(spec, p.curve(i), grid);
    for (int j = 0; j < 50; ++j) EXPECT_NEAR(v(j), t.values[i * 50 + j], 1e-8);
  }
}

TEST(Center, IdenticalColumns) {
  std::vector<double> block(20);
  for (int j = 0; j < 20; ++j) block[j] = std::cos(0.2 * j);
  const CurvePanel raw = slice(repeat_block(block, 4, 1.0), BasisSpec(1.0, 7));
  const CurvePanel c = center(raw);
  EXPECT_TRUE(c.centered());
  EXPECT_LT(c.X().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((c.mean_curve().coeffs - raw.X().col(0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(center(c), std::invalid_argument);
}

TEST(Center, RoundTripAndDerivatives) {
  std::mt19937_64 rng(5);
  const BasisSpec spec(1.8348, 11);
  const CurvePanel raw = slice(band_limited(rng, spec, 8, 30), spec);
  const CurvePanel c = center(raw);
  EXPECT_LT(c.X().rowwise().mean().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ((c.Xp() - derivative_matrix(spec) * c.X()).cwiseAbs().maxCoeff(), 0.0);
  const CurvePanel back = uncenter(c);
  EXPECT_FALSE(back.centered());
  EXPECT_LT((back.X() - raw.X()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((back.Xp() - raw.Xp()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Center, AssumedZeroMean) {
  std::mt19937_64 rng(6);
  const BasisSpec spec(1.0, 5);
  const CurvePanel p = assume_zero_mean(panel_from_coefficients(spec, testing::gaussian_matrix(rng, 5, 6)));
  EXPECT_TRUE(p.centered());
  EXPECT_EQ(p.mean_curve().coeffs.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(assume_zero_mean(p), std::invalid_argument);
  EXPECT_THROW(panel_from_coefficients(spec, Eigen::MatrixXd::Zero(4, 3)), std::invalid_argument);
}

TEST(Split, Sizes) {
  std::mt19937_64 rng(7);
  const BasisSpec spec(1.0, 5);
  const CurvePanel p = slice(band_limited(rng, spec, 10, 12), spec);
  const auto [train, test] = split(p, 9);
  EXPECT_EQ(train.n(), 9);
  EXPECT_EQ(test.n(), 1);
  EXPECT_THROW(split(p, 10), std::invalid_argument);
  EXPECT_THROW(split(p, 1), std::invalid_argument);
}

TEST(Split, MonthlyHistory) {
  // 37 years of monthly values, 1950 to 1986: train on 1950-85, test on 1986.
  std::mt19937_64 rng(8);
  const BasisSpec spec(1.0, 5);
  const CurvePanel p = slice(band_limited(rng, spec, 37, 12), spec);
  const auto [train, test] = split(p, 36);
  EXPECT_EQ(train.n(), 36);
  EXPECT_EQ(test.n(), 1);
}

TEST(Split, CenteringUsesTrainingMeanOnly) {
  std::mt19937_64 rng(9);
  const BasisSpec spec(1.0, 5);
  const CurvePanel raw = slice(band_limited(rng, spec, 10, 12), spec);
  const auto [train, test] = split(center(raw), 7);
  const Eigen::VectorXd train_mean = raw.X().leftCols(7).rowwise().mean();
  EXPECT_LT((train.mean_curve().coeffs - train_mean).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((test.mean_curve().coeffs - train_mean).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((test.X().col(0) - (raw.X().col(7) - train_mean)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(test.centered());
}

TEST(SeriesCsv, PlainValues) {
  std::istringstream in("1.5\n2\n-3e-1\n");
  const SeriesCsv s = parse_series_csv(in);
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_DOUBLE_EQ(s.values[2], -0.3);
}

TEST(SeriesCsv, HeaderPairsAndMetadata) {
  std::istringstream in("# m=12\n# delta = 1\ndate,sst\n1950-01,24.5\n1950-02, 25.1\n\n");
  const SeriesCsv s = parse_series_csv(in);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_DOUBLE_EQ(s.values[1], 25.1);
  EXPECT_EQ(s.meta.at("m"), "12");
  EXPECT_EQ(s.meta.at("delta"), "1");
}

TEST(SeriesCsv, MissingValuesReportLine) {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_series_csv(in);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(error_of("t,v\n1,2\n2,NA\n3,4\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("1\n\n2\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("1\n2,\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("NA\n1\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("1,2,3\n").find("line 1"), std::string::npos);
}

TEST(SeriesCsv, WriterRoundTrip) {
  Trajectory t = repeat_block({0.1, 0.2, 0.3}, 3, 1.5);
  t.t0 = 10.0;
  const std::string text = trajectory_csv(t, {{"m", "3"}, {"delta", "1.5"}});
  std::istringstream in(text);
  const SeriesCsv s = parse_series_csv(in);
  EXPECT_EQ(s.values, t.values);
  EXPECT_EQ(s.meta.at("m"), "3");
  EXPECT_NE(text.find("10.25,0.1"), std::string::npos);  // first midpoint t0 + h/2
}

}  // namespace
}  // namespace arhd
