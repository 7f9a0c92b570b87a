#pragma once

// Orthonormal Fourier basis of L2[0, delta] and the induced orthonormal basis
// of the Sobolev space W = W^{2,1}[0, delta].
//
// Index layout (N = 2J + 1 functions):
//   k = 0        e_0(t)      = 1 / sqrt(delta)
//   k = 2j - 1   e_{2j-1}(t) = sqrt(2 / delta) cos(2 j pi t / delta)
//   k = 2j       e_{2j}(t)   = sqrt(2 / delta) sin(2 j pi t / delta)
// and w_k = s_j e_k with the Sobolev weight s_j = [1 + (2 j pi / delta)^2]^{-1/2}
// (s_0 = 1).  A curve f = sum_k x_k w_k has W-coordinates x and L2-coordinates
// c_k = s_j x_k.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace arhd {

enum class Space { W, L };

inline std::string_view to_string(Space s) { return s == Space::W ? "W" : "L"; }

inline Space space_from_string(std::string_view s) {
  if (s == "W") return Space::W;
  if (s == "L") return Space::L;
  throw std::invalid_argument("unknown space tag '" + std::string(s) + "'");
}

class BasisSpec {
 public:
  BasisSpec(double delta, int n_funcs) : delta_(delta), n_funcs_(n_funcs) {
    if (!(delta > 0.0) || !std::isfinite(delta))
      throw std::invalid_argument("BasisSpec: delta must be positive");
    if (n_funcs < 3 || n_funcs % 2 == 0)
      throw std::invalid_argument("BasisSpec: n_funcs must be odd and >= 3, got " +
                                  std::to_string(n_funcs));
  }

  double delta() const { return delta_; }
  int size() const { return n_funcs_; }
  int harmonics() const { return (n_funcs_ - 1) / 2; }

  /// Angular frequency 2 j pi / delta of harmonic j.
  double frequency(int j) const { return 2.0 * j * std::numbers::pi / delta_; }

  /// Sobolev weight [1 + (2 j pi / delta)^2]^{-1/2}; equals 1 for j = 0.
  double sobolev_weight(int j) const {
    const double w = frequency(j);
    return 1.0 / std::sqrt(1.0 + w * w);
  }

  /// Harmonic number of basis index k.
  static int harmonic_of(int k) { return (k + 1) / 2; }

  double weight_of_index(int k) const { return sobolev_weight(harmonic_of(k)); }

  /// Diagonal of the W -> L2 coordinate rescaling (c = weights .* x).
  Eigen::VectorXd weights() const {
    Eigen::VectorXd s(n_funcs_);
    for (int k = 0; k < n_funcs_; ++k) s(k) = weight_of_index(k);
    return s;
  }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;

 private:
  double delta_;
  int n_funcs_;
};

/// Default truncation for m samples per block: keeps m >= 2N, capped at 21.
inline int default_truncation(int m) {
  if (m < 6) throw std::invalid_argument("default_truncation: need at least 6 points per block");
  return std::min(2 * ((m - 1) / 4) + 1, 21);
}

/// Midpoint grid t_j = (j - 1/2) delta / m, j = 1..m.
inline Eigen::VectorXd midpoint_grid(double delta, int m) {
  if (m < 1) throw std::invalid_argument("midpoint_grid: m must be positive");
  Eigen::VectorXd t(m);
  for (int j = 0; j < m; ++j) t(j) = (j + 0.5) * delta / m;
  return t;
}

struct CoeffVec {
  Space space = Space::W;
  Eigen::VectorXd coeffs;

  Eigen::Index size() const { return coeffs.size(); }
};

namespace detail {

inline void check_index(const BasisSpec& spec, int k) {
  if (k < 0 || k >= spec.size())
    throw std::out_of_range("basis index " + std::to_string(k) + " outside [0, " +
                            std::to_string(spec.size()) + ")");
}

inline void check_time(const BasisSpec& spec, double t) {
  if (!(t >= 0.0 && t <= spec.delta()))
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, delta]");
}

inline void check_coeffs(const BasisSpec& spec, const CoeffVec& x) {
  if (x.size() != spec.size())
    throw std::invalid_argument("coefficient vector has length " + std::to_string(x.size()) +
                                ", basis has " + std::to_string(spec.size()));
}

// L2-orthonormal e_k(t) without domain checks.
inline double l2_function(const BasisSpec& spec, int k, double t) {
  if (k == 0) return 1.0 / std::sqrt(spec.delta());
  const int j = BasisSpec::harmonic_of(k);
  const double amp = std::sqrt(2.0 / spec.delta());
  const double arg = spec.frequency(j) * t;
  return (k % 2 == 1) ? amp * std::cos(arg) : amp * std::sin(arg);
}

}  // namespace detail

/// Value of the k-th orthonormal basis function of `space` at t.
inline double eval_basis(const BasisSpec& spec, Space space, int k, double t) {
  detail::check_index(spec, k);
  detail::check_time(spec, t);
  const double e = detail::l2_function(spec, k, t);
  return space == Space::W ? spec.weight_of_index(k) * e : e;
}

/// N x m matrix of basis values, row k holding the k-th function on the grid.
inline Eigen::MatrixXd basis_matrix(const BasisSpec& spec, Space space,
                                    const Eigen::VectorXd& grid) {
  Eigen::MatrixXd out(spec.size(), grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    detail::check_time(spec, grid(j));
    for (int k = 0; k < spec.size(); ++k) {
      const double e = detail::l2_function(spec, k, grid(j));
      out(k, j) = space == Space::W ? spec.weight_of_index(k) * e : e;
    }
  }
  return out;
}

/// W-coordinates -> L2-coordinates of the same curve.
inline CoeffVec to_l2(const BasisSpec& spec, const CoeffVec& x) {
  detail::check_coeffs(spec, x);
  if (x.space != Space::W) throw std::invalid_argument("to_l2: expected W-coordinates");
  return {Space::L, x.coeffs.cwiseProduct(spec.weights())};
}

/// L2-coordinates -> W-coordinates of the same curve.
inline CoeffVec to_sobolev(const BasisSpec& spec, const CoeffVec& c) {
  detail::check_coeffs(spec, c);
  if (c.space != Space::L) throw std::invalid_argument("to_sobolev: expected L-coordinates");
  return {Space::W, c.coeffs.cwiseQuotient(spec.weights())};
}

/// Projects samples on the midpoint grid onto the first N functions, returning
/// W-coordinates.  Midpoint quadrature is exact for the discrete least-squares
/// fit whenever 2J < m.
inline CoeffVec project_curve(const BasisSpec& spec, std::span<const double> samples) {
  const auto m = static_cast<int>(samples.size());
  if (m < spec.size())
    throw std::invalid_argument("project_curve: " + std::to_string(m) +
                                " samples cannot determine " + std::to_string(spec.size()) +
                                " coefficients");
  const double h = spec.delta() / m;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(spec.size());
  for (int j = 0; j < m; ++j) {
    const double t = (j + 0.5) * h;
    for (int k = 0; k < spec.size(); ++k) c(k) += samples[j] * detail::l2_function(spec, k, t);
  }
  c *= h;
  return to_sobolev(spec, {Space::L, std::move(c)});
}

/// Matrix of the derivative map from W-coordinates of f to L-coordinates of f'.
/// Built from e'_{2j-1} = -w_j e_{2j}, e'_{2j} = w_j e_{2j-1} and the weights s_j.
inline Eigen::MatrixXd derivative_matrix(const BasisSpec& spec) {
  const int n = spec.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j <= spec.harmonics(); ++j) {
    const double scale = spec.frequency(j) * spec.sobolev_weight(j);
    d(2 * j, 2 * j - 1) = -scale;
    d(2 * j - 1, 2 * j) = scale;
  }
  return d;
}

inline CoeffVec differentiate(const BasisSpec& spec, const CoeffVec& x) {
  detail::check_coeffs(spec, x);
  if (x.space != Space::W) throw std::invalid_argument("differentiate: expected W-coordinates");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(spec.size());
  for (int j = 1; j <= spec.harmonics(); ++j) {
    const double scale = spec.frequency(j) * spec.sobolev_weight(j);
    out(2 * j) = -scale * x.coeffs(2 * j - 1);
    out(2 * j - 1) = scale * x.coeffs(2 * j);
  }
  return {Space::L, std::move(out)};
}

/// Pointwise evaluation sum_k x_k b_k(t) of a coefficient vector in its own space.
inline Eigen::VectorXd reconstruct(const BasisSpec& spec, const CoeffVec& x,
                                   const Eigen::VectorXd& grid) {
  detail::check_coeffs(spec, x);
  return basis_matrix(spec, x.space, grid).transpose() * x.coeffs;
}

}  // namespace arhd
