#pragma once

// Wong process: the stationary, zero-mean, unit-variance Gaussian process
//
//   xi_u = sqrt(3) exp(-sqrt(3) u) int_0^{exp(2u/sqrt(3))} W_s ds,
//
// whose blocks X_{i+1}(t) = xi(i delta + t) satisfy exactly
//
//   X_{i+1}(t) = g(t) X_i(delta) + c(t) X_i'(delta) + eps_{i+1}(t),
//   c(t) = sqrt(3)/2 exp(-sqrt(3) t) (exp(2t/sqrt(3)) - 1),
//   g(t) = exp(-sqrt(3) t) + sqrt(3) c(t).
//
// By Brownian scaling the innovation has the block-independent law
//   eps(t) = sqrt(3) exp(-sqrt(3) t) int_0^{v(t)} B_r dr,   v(t) = exp(2t/sqrt(3)) - 1.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "arhd/basis.hpp"
#include "arhd/curve_model.hpp"
#include "arhd/op_matrix.hpp"

namespace arhd::wong {

inline const double kSqrt3 = std::sqrt(3.0);

struct WongConfig {
  int n_blocks = 105;
  double delta = 1.8348;
  int m = 50;
  std::uint64_t seed = 7;
  int burn_in = 50;
  int inner_steps = 16;

  void validate() const {
    if (n_blocks < 1) throw std::invalid_argument("wong: n_blocks must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("wong: delta must be positive");
    if (m < 1) throw std::invalid_argument("wong: m must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("wong: burn_in must be >= 0");
    if (inner_steps < 4) throw std::invalid_argument("wong: inner_steps must be >= 4");
  }
};

inline double c_of_t(double t) {
  if (t < 0.0) throw std::domain_error("c_of_t: t must be non-negative");
  return 0.5 * kSqrt3 * std::exp(-kSqrt3 * t) * std::expm1(2.0 * t / kSqrt3);
}

/// Kernel of phi: g(t) = exp(-sqrt(3) t) + sqrt(3) c(t).
inline double g_of_t(double t) { return std::exp(-kSqrt3 * t) + kSqrt3 * c_of_t(t); }

inline double c_slope(double t) { return -kSqrt3 * c_of_t(t) + std::exp((2.0 / kSqrt3 - kSqrt3) * t); }

inline double g_slope(double t) { return -kSqrt3 * std::exp(-kSqrt3 * t) + kSqrt3 * c_slope(t); }

/// Closed-form Var eps(t) = exp(-2 sqrt(3) t) v(t)^3.
inline double innovation_variance(double t) {
  const double v = std::expm1(2.0 * t / kSqrt3);
  return std::exp(-2.0 * kSqrt3 * t) * v * v * v;
}

/// Independent generator stream for replicate `replicate` of a run seeded with `seed`.
inline std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(seq);
}

struct InnovationBlock {
  Eigen::VectorXd values;  // eps on the midpoint grid
  Eigen::VectorXd slopes;  // eps' on the midpoint grid
  double end_value = 0.0;  // eps(delta)
  double end_slope = 0.0;  // eps'(delta)
};

/// Draws one innovation block.  The Brownian path is advanced over
/// `inner_steps` equal sub-steps of the transformed time axis between
/// consecutive output times; each sub-step samples the increment and its
/// integral jointly from their exact Gaussian law.
template <class Rng>
InnovationBlock innovation_block(Rng& rng, double delta, int m, int inner_steps) {
  if (!(delta > 0.0) || m < 1 || inner_steps < 1)
    throw std::invalid_argument("innovation_block: invalid geometry");
  std::normal_distribution<double> normal(0.0, 1.0);
  InnovationBlock out{Eigen::VectorXd(m), Eigen::VectorXd(m), 0.0, 0.0};

  double b = 0.0;         // B at the current transformed time
  double integral = 0.0;  // int_0^v B
  double v_prev = 0.0;
  auto advance_to = [&](double t) {
    const double v = std::expm1(2.0 * t / kSqrt3);
    const double h = (v - v_prev) / inner_steps;
    const double sd_db = std::sqrt(h);
    const double sd_cond = std::sqrt(h * h * h / 12.0);
    for (int s = 0; s < inner_steps; ++s) {
      const double db = sd_db * normal(rng);
      integral += h * b + 0.5 * h * db + sd_cond * normal(rng);
      b += db;
    }
    v_prev = v;
    const double decay = std::exp(-kSqrt3 * t);
    const double eps = kSqrt3 * decay * integral;
    const double slope = -kSqrt3 * eps + 2.0 * decay * std::exp(2.0 * t / kSqrt3) * b;
    return std::pair{eps, slope};
  };
  const double h = delta / m;
  for (int j = 0; j < m; ++j) {
    const auto [e, de] = advance_to((j + 0.5) * h);
    out.values(j) = e;
    out.slopes(j) = de;
  }
  const auto [e, de] = advance_to(delta);
  out.end_value = e;
  out.end_slope = de;
  return out;
}

struct WongSimulation {
  Trajectory trajectory;
  Eigen::MatrixXd innovations;  // m x n, eps_{i+1} on the grid for each kept block
  Eigen::VectorXd start_value;  // xi at the start of each kept block (previous block's endpoint)
  Eigen::VectorXd start_slope;  // xi' at the same instant
};

/// Conditional mean of a block given the endpoint state of its predecessor.
inline Eigen::VectorXd conditional_mean(double value, double slope, double delta, int m) {
  Eigen::VectorXd out(m);
  for (int j = 0; j < m; ++j) {
    const double t = (j + 0.5) * delta / m;
    out(j) = g_of_t(t) * value + c_of_t(t) * slope;
  }
  return out;
}

/// Runs the block recursion on the exact endpoint state (xi, xi') starting
/// from zero and discarding `burn_in` blocks.
template <class Rng>
WongSimulation simulate(const WongConfig& cfg, Rng& rng) {
  cfg.validate();
  const double gd = g_of_t(cfg.delta), cd = c_of_t(cfg.delta);
  const double dgd = g_slope(cfg.delta), dcd = c_slope(cfg.delta);
  WongSimulation out;
  out.trajectory.delta = cfg.delta;
  out.trajectory.m = cfg.m;
  out.trajectory.values.reserve(static_cast<std::size_t>(cfg.n_blocks) * static_cast<std::size_t>(cfg.m));
  out.innovations.resize(cfg.m, cfg.n_blocks);
  out.start_value.resize(cfg.n_blocks);
  out.start_slope.resize(cfg.n_blocks);

  double x = 0.0, xp = 0.0;
  for (int i = 0; i < cfg.burn_in + cfg.n_blocks; ++i) {
    const InnovationBlock eps = innovation_block(rng, cfg.delta, cfg.m, cfg.inner_steps);
    if (i >= cfg.burn_in) {
      const int k = i - cfg.burn_in;
      const Eigen::VectorXd block = conditional_mean(x, xp, cfg.delta, cfg.m) + eps.values;
      out.trajectory.values.insert(out.trajectory.values.end(), block.data(), block.data() + block.size());
      out.innovations.col(k) = eps.values;
      out.start_value(k) = x;
      out.start_slope(k) = xp;
    }
    const double nx = gd * x + cd * xp + eps.end_value;
    const double nxp = dgd * x + dcd * xp + eps.end_slope;
    x = nx;
    xp = nxp;
  }
  return out;
}

inline WongSimulation simulate(const WongConfig& cfg) {
  auto rng = replicate_rng(cfg.seed, 0);
  return simulate(cfg, rng);
}

struct WongTruth {
  OpMatrix phi_true;        // W -> W, f -> g f(delta)
  OpMatrix psi_true;        // L -> W, f' -> c f'(delta)
  Eigen::VectorXd c_curve;  // c on the m-point midpoint grid
};

/// Coordinate matrices of the true operators.  Endpoint evaluation is the row
/// of basis values at t = delta; g and c enter through their projections.
inline WongTruth true_operators(const BasisSpec& spec, int m, int quadrature_points = 8192) {
  std::vector<double> g(static_cast<std::size_t>(quadrature_points)), c(g.size());
  for (int j = 0; j < quadrature_points; ++j) {
    const double t = (j + 0.5) * spec.delta() / quadrature_points;
    g[static_cast<std::size_t>(j)] = g_of_t(t);
    c[static_cast<std::size_t>(j)] = c_of_t(t);
  }
  const Eigen::VectorXd g_w = project_curve(spec, g).coeffs;
  const Eigen::VectorXd c_w = project_curve(spec, c).coeffs;
  Eigen::VectorXd end_w(spec.size()), end_l(spec.size());
  for (int k = 0; k < spec.size(); ++k) {
    end_w(k) = eval_basis(spec, Space::W, k, spec.delta());
    end_l(k) = eval_basis(spec, Space::L, k, spec.delta());
  }
  Eigen::VectorXd c_grid(m);
  for (int j = 0; j < m; ++j) c_grid(j) = c_of_t((j + 0.5) * spec.delta() / m);
  return {{Space::W, Space::W, g_w * end_w.transpose()},
          {Space::L, Space::W, c_w * end_l.transpose()},
          std::move(c_grid)};
}

}  // namespace arhd::wong
