#pragma once

// Doubly penalized moment estimator of the ARHD operators
//
//   X_{i+1} = phi(X_i) + Psi(X'_i) + eps_{i+1}.
//
// With T^dagger = (T + alpha I)^{-1}, the Schur-type operators
//
//   S_phi = Gamma   - GammaPStar GammaPP^dagger GammaP        (W -> W)
//   S_psi = GammaPP - GammaP     Gamma^dagger   GammaPStar    (L -> L)
//   T_phi = Delta   - DeltaP     GammaPP^dagger GammaP        (W -> W)
//   T_psi = DeltaP  - Delta      Gamma^dagger   GammaPStar    (L -> W)
//
// give phi_n = T_phi (S_phi + beta I)^{-1} and Psi_n = T_psi (S_psi + beta I)^{-1}.

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arhd/covariance.hpp"
#include "arhd/curve_model.hpp"
#include "arhd/io.hpp"
#include "arhd/op_matrix.hpp"

namespace arhd {

struct PenaltyConfig {
  double alpha = 0.1;
  double beta = 0.5;
  std::optional<double> rate_a;
  std::optional<double> rate_b;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("penalty: alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("penalty: beta must be positive");
    if (rate_a.has_value() != rate_b.has_value())
      throw std::invalid_argument("penalty: rate exponents must be given together");
    if (rate_a) {
      const double a = *rate_a, b = *rate_b;
      if (!(b < a / 2.0)) throw std::invalid_argument("penalty: rate_b must be below rate_a / 2");
      if (!(2.0 * a + 2.0 * b < 0.5)) throw std::invalid_argument("penalty: 2 rate_a + 2 rate_b must be below 1/2");
    }
  }

  /// alpha_n = n^{-a}, beta_n = n^{-b}.
  static PenaltyConfig schedule(int n, double a, double b) {
    PenaltyConfig p{std::pow(static_cast<double>(n), -a), std::pow(static_cast<double>(n), -b), a, b};
    p.validate();
    return p;
  }
};

/// Tolerance below zero for the spectra of S_phi and S_psi.
inline constexpr double kSchurTolerance = 1e-8;

namespace detail {

inline Eigen::LLT<Eigen::MatrixXd> shifted_cholesky(const Eigen::MatrixXd& t, double shift) {
  Eigen::MatrixXd a = 0.5 * (t + t.transpose());
  a.diagonal().array() += shift;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Cholesky factorization of shifted operator failed");
  return llt;
}

inline void check_resolvent_input(const OpMatrix& t, double alpha) {
  if (t.dom() != t.cod()) throw std::invalid_argument("resolvent: operator must map a space to itself");
  if (!(alpha > 0.0)) throw std::invalid_argument("resolvent: alpha must be positive");
  if (t.size() > 0 && asymmetry(t.mat()) > 1e-10)
    throw std::invalid_argument("resolvent: operator is not symmetric");
}

// lhs (sym + shift I)^{-1} for symmetric positive definite sym + shift I.
inline Eigen::MatrixXd right_solve(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& sym, double shift) {
  const auto llt = shifted_cholesky(sym, shift);
  return llt.solve(lhs.transpose()).transpose();
}

// (sym + shift I)^{-1} rhs.
inline Eigen::MatrixXd left_solve(const Eigen::MatrixXd& sym, double shift, const Eigen::MatrixXd& rhs) {
  return shifted_cholesky(sym, shift).solve(rhs);
}

}  // namespace detail

/// (T + alpha I)^{-1} for symmetric positive semidefinite T.
inline OpMatrix resolvent(const OpMatrix& t, double alpha) {
  detail::check_resolvent_input(t, alpha);
  const auto n = t.size();
  return {t.dom(), t.cod(),
          detail::left_solve(t.mat(), alpha, Eigen::MatrixXd::Identity(n, n))};
}

struct SchurOperators {
  OpMatrix s_phi;
  OpMatrix s_psi;
  OpMatrix t_phi;
  OpMatrix t_psi;
};

inline SchurOperators schur_operators(const Covariances& cov, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("schur_operators: alpha must be positive");
  // Space-tag bookkeeping through the OpMatrix algebra; the resolvent products
  // are formed by solves against the Cholesky factors.
  detail::check_resolvent_input(cov.gamma, alpha);
  detail::check_resolvent_input(cov.gamma_pp, alpha);
  if (cov.gamma_p.dom() != Space::W || cov.gamma_p.cod() != Space::L || cov.gamma_p_star.dom() != Space::L ||
      cov.gamma_p_star.cod() != Space::W || cov.delta_p.dom() != Space::L || cov.delta_p.cod() != Space::W ||
      cov.delta.dom() != Space::W || cov.delta.cod() != Space::W)
    throw std::invalid_argument("schur_operators: covariance operators carry unexpected space tags");

  // GammaPP^dagger GammaP : W -> L and Gamma^dagger GammaPStar : L -> W.
  const OpMatrix rpp_gp{Space::W, Space::L, detail::left_solve(cov.gamma_pp.mat(), alpha, cov.gamma_p.mat())};
  const OpMatrix r_gps{Space::L, Space::W, detail::left_solve(cov.gamma.mat(), alpha, cov.gamma_p_star.mat())};

  OpMatrix s_phi = cov.gamma - cov.gamma_p_star * rpp_gp;
  OpMatrix s_psi = cov.gamma_pp - cov.gamma_p * r_gps;
  OpMatrix t_phi = cov.delta - cov.delta_p * rpp_gp;
  OpMatrix t_psi = cov.delta_p - cov.delta * r_gps;
  auto symmetrize = [](const OpMatrix& op) {
    return OpMatrix{op.dom(), op.cod(), 0.5 * (op.mat() + op.mat().transpose())};
  };
  return {symmetrize(s_phi), symmetrize(s_psi), std::move(t_phi), std::move(t_psi)};
}

struct FitDiagnostics {
  Eigen::VectorXd s_phi_spectrum;  // ascending
  Eigen::VectorXd s_psi_spectrum;  // ascending
  double s_phi_min_eigenvalue = 0.0;
  double s_psi_min_eigenvalue = 0.0;
  double delta_residual = 0.0;    // ||Delta  - phi Gamma      - psi GammaP ||_2
  double delta_p_residual = 0.0;  // ||DeltaP - phi GammaPStar - psi GammaPP||_2
  double a_hat_norm = 0.0;        // ||phi + psi D||_2
};

struct ArhdFit {
  BasisSpec spec;
  OpMatrix phi;  // W -> W
  OpMatrix psi;  // L -> W
  PenaltyConfig penalty;
  CoeffVec mean_curve;
  FitDiagnostics diagnostics;

  /// Combined one-step operator phi + psi D on W-coordinates.
  OpMatrix a_hat() const { return phi + psi * derivative_operator(spec); }
};

/// Fit from precomputed covariances of a centered panel.
inline ArhdFit fit(const Covariances& cov, const BasisSpec& spec, const CoeffVec& mean_curve,
                   const PenaltyConfig& penalty) {
  penalty.validate();
  if (cov.size() != spec.size()) throw std::invalid_argument("fit: covariance dimension differs from basis");
  const SchurOperators so = schur_operators(cov, penalty.alpha);

  FitDiagnostics diag;
  diag.s_phi_spectrum = symmetric_eigenvalues(so.s_phi.mat());
  diag.s_psi_spectrum = symmetric_eigenvalues(so.s_psi.mat());
  diag.s_phi_min_eigenvalue = diag.s_phi_spectrum.minCoeff();
  diag.s_psi_min_eigenvalue = diag.s_psi_spectrum.minCoeff();
  if (diag.s_phi_min_eigenvalue < -kSchurTolerance || diag.s_psi_min_eigenvalue < -kSchurTolerance)
    throw NumericalError("fit: Schur operator has eigenvalue below -1e-8 (S_phi min " +
                         format_double(diag.s_phi_min_eigenvalue) + ", S_psi min " +
                         format_double(diag.s_psi_min_eigenvalue) + ")");

  OpMatrix phi{Space::W, Space::W, detail::right_solve(so.t_phi.mat(), so.s_phi.mat(), penalty.beta)};
  OpMatrix psi{Space::L, Space::W, detail::right_solve(so.t_psi.mat(), so.s_psi.mat(), penalty.beta)};

  diag.delta_residual = spectral_norm(cov.delta - phi * cov.gamma - psi * cov.gamma_p);
  diag.delta_p_residual = spectral_norm(cov.delta_p - phi * cov.gamma_p_star - psi * cov.gamma_pp);
  ArhdFit out{spec, std::move(phi), std::move(psi), penalty, mean_curve, std::move(diag)};
  out.diagnostics.a_hat_norm = spectral_norm(out.a_hat());
  return out;
}

inline ArhdFit fit(const CurvePanel& panel, const PenaltyConfig& penalty) {
  if (!panel.centered()) throw std::invalid_argument("fit: panel must be centered");
  if (panel.n() < 3) throw std::invalid_argument("fit: need at least 3 curves");
  return fit(covariances(panel), panel.spec(), panel.mean_curve(), penalty);
}

/// Singular values (descending) of the stacked moment matrix
/// [[G, G D^T], [D G, D G D^T]].
inline Eigen::VectorXd moment_singular_values(const Eigen::MatrixXd& gamma, const Eigen::MatrixXd& d) {
  const auto n = gamma.rows();
  Eigen::MatrixXd lambda(2 * n, 2 * n);
  lambda.topLeftCorner(n, n) = gamma;
  lambda.topRightCorner(n, n) = gamma * d.transpose();
  lambda.bottomLeftCorner(n, n) = d * gamma;
  lambda.bottomRightCorner(n, n) = d * gamma * d.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lambda);
  return svd.singularValues();
}

/// Smallest singular value of the stacked moment matrix; near zero means the
/// pair (phi, Psi) sits near the non-identifiable set {U + V D = 0}.
inline double identifiability_diag(const Covariances& cov, const BasisSpec& spec) {
  if (cov.size() != spec.size()) throw std::invalid_argument("identifiability_diag: dimension mismatch");
  return moment_singular_values(cov.gamma.mat(), derivative_matrix(spec)).minCoeff();
}

// ---------------------------------------------------------------------------
// Fit files.  Plain text, versioned first line, matrices row-major:
//
//   arhd-fit 1
//   N <N>
//   delta <delta>
//   alpha <alpha>
//   beta <beta>
//   rates <a> <b> | rates none
//   mean <N values>
//   phi <N*N values>
//   psi <N*N values>
//   # key=value          (echoed configuration, optional)

inline constexpr const char* kFitHeader = "arhd-fit 1";

inline std::string serialize_fit(const ArhdFit& f, const ConfigEcho& echo = {}) {
  std::ostringstream out;
  auto row = [&out](const char* key, const auto& values) {
    out << key;
    for (Eigen::Index i = 0; i < values.size(); ++i) out << ' ' << format_double(values(i));
    out << '\n';
  };
  out << kFitHeader << '\n';
  out << "N " << f.spec.size() << '\n';
  out << "delta " << format_double(f.spec.delta()) << '\n';
  out << "alpha " << format_double(f.penalty.alpha) << '\n';
  out << "beta " << format_double(f.penalty.beta) << '\n';
  if (f.penalty.rate_a)
    out << "rates " << format_double(*f.penalty.rate_a) << ' ' << format_double(*f.penalty.rate_b) << '\n';
  else
    out << "rates none\n";
  row("mean", f.mean_curve.coeffs);
  const Eigen::MatrixXd phi_rm = f.phi.mat().transpose();  // column-major storage of the transpose = row-major
  const Eigen::MatrixXd psi_rm = f.psi.mat().transpose();
  row("phi", phi_rm.reshaped());
  row("psi", psi_rm.reshaped());
  out << echo_as_comments(echo);
  return out.str();
}

inline ArhdFit deserialize_fit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kFitHeader)
    throw std::invalid_argument("fit file: missing or unsupported header (expected '" +
                                std::string(kFitHeader) + "')");
  std::map<std::string, std::vector<std::string>> fields;
  while (std::getline(in, line)) {
    const auto sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    std::istringstream ls{std::string(sv)};
    std::string key;
    ls >> key;
    std::vector<std::string> vals;
    for (std::string tok; ls >> tok;) vals.push_back(tok);
    fields[key] = std::move(vals);
  }
  auto numbers = [&](const std::string& key, std::size_t expected) {
    auto it = fields.find(key);
    if (it == fields.end()) throw std::invalid_argument("fit file: missing '" + key + "' line");
    if (it->second.size() != expected)
      throw std::invalid_argument("fit file: '" + key + "' has " + std::to_string(it->second.size()) +
                                  " values, expected " + std::to_string(expected));
    Eigen::VectorXd v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i)
      if (!parse_double(it->second[i], v(static_cast<Eigen::Index>(i))))
        throw std::invalid_argument("fit file: bad number in '" + key + "'");
    return v;
  };
  const double n_real = numbers("N", 1)(0);
  const int n = static_cast<int>(n_real);
  if (n != n_real) throw std::invalid_argument("fit file: N must be an integer");
  BasisSpec spec(numbers("delta", 1)(0), n);
  PenaltyConfig penalty{numbers("alpha", 1)(0), numbers("beta", 1)(0), std::nullopt, std::nullopt};
  if (auto it = fields.find("rates"); it != fields.end() && !(it->second.size() == 1 && it->second[0] == "none")) {
    const auto r = numbers("rates", 2);
    penalty.rate_a = r(0);
    penalty.rate_b = r(1);
  }
  penalty.validate();
  const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  Eigen::MatrixXd phi = numbers("phi", nn).reshaped(n, n).transpose();
  Eigen::MatrixXd psi = numbers("psi", nn).reshaped(n, n).transpose();
  ArhdFit f{spec,
            {Space::W, Space::W, std::move(phi)},
            {Space::L, Space::W, std::move(psi)},
            penalty,
            {Space::W, numbers("mean", static_cast<std::size_t>(n))},
            {}};
  f.diagnostics.a_hat_norm = spectral_norm(f.a_hat());
  return f;
}

}  // namespace arhd
