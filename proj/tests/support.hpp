#pragma once

// Test-only helpers.  Everything here is written from the textbook formulas
// so that it can act as an oracle for the library code.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace arhd::testing {

// Orthonormal trigonometric family on [0, delta], spelled out directly.
inline double trig(int k, double delta, double t) {
  if (k == 0) return 1.0 / std::sqrt(delta);
  const int j = (k + 1) / 2;
  const double w = 2.0 * std::numbers::pi * j / delta;
  return std::sqrt(2.0 / delta) * (k % 2 ? std::cos(w * t) : std::sin(w * t));
}

inline double trig_slope(int k, double delta, double t) {
  if (k == 0) return 0.0;
  const int j = (k + 1) / 2;
  const double w = 2.0 * std::numbers::pi * j / delta;
  return std::sqrt(2.0 / delta) * w * (k % 2 ? -std::sin(w * t) : std::cos(w * t));
}

// Curve with L2 coefficients `c` in the family above.
struct TrigCurve {
  Eigen::VectorXd c;
  double delta;
  double operator()(double t) const {
    double v = 0.0;
    for (int k = 0; k < c.size(); ++k) v += c(k) * trig(k, delta, t);
    return v;
  }
  double slope(double t) const {
    double v = 0.0;
    for (int k = 0; k < c.size(); ++k) v += c(k) * trig_slope(k, delta, t);
    return v;
  }
};

inline std::vector<double> sample_midpoints(const TrigCurve& f, int m) {
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = f((j + 0.5) * f.delta / m);
  return out;
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, Eigen::Index n, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = nd(rng);
  return m;
}

// Random symmetric PSD matrix of the given rank.
inline Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  const Eigen::MatrixXd b = gaussian_matrix(rng, n, rank);
  Eigen::MatrixXd t = b * b.transpose() / static_cast<double>(rank);
  return 0.5 * (t + t.transpose());
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace arhd::testing
