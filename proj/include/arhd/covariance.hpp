#pragma once

// Empirical covariance and cross-covariance operators of a curve panel, in
// orthonormal basis coordinates:
//
//   Gamma      = (1/n)     sum_k X_k  X_k^T          W -> W
//   GammaP     = (1/n)     sum_k X'_k X_k^T          W -> L
//   GammaPStar = GammaP^T                            L -> W
//   GammaPP    = (1/n)     sum_k X'_k X'_k^T         L -> L
//   Delta      = (1/(n-1)) sum_k X_{k+1} X_k^T       W -> W
//   DeltaP     = (1/(n-1)) sum_k X_{k+1} X'_k^T      L -> W

#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "arhd/curve_model.hpp"
#include "arhd/io.hpp"
#include "arhd/op_matrix.hpp"

namespace arhd {

struct Covariances {
  OpMatrix gamma;
  OpMatrix gamma_p;
  OpMatrix gamma_p_star;
  OpMatrix gamma_pp;
  OpMatrix delta;
  OpMatrix delta_p;
  int n = 0;  // sample size the operators were computed from

  Eigen::Index size() const { return gamma.size(); }
};

/// Roundoff tolerance below zero for eigenvalues of auto-covariance matrices.
inline constexpr double kPsdTolerance = 1e-10;

/// Symmetrizes `op` and clamps eigenvalues in (-kPsdTolerance, 0) to zero.
/// More negative eigenvalues indicate a bug upstream and raise.
inline OpMatrix repair_psd(const OpMatrix& op) {
  if (op.dom() != op.cod()) throw std::invalid_argument("repair_psd: operator is not an endomorphism");
  Eigen::MatrixXd sym = 0.5 * (op.mat() + op.mat().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("repair_psd: eigensolver failed");
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdTolerance)
    throw NumericalError("covariance matrix has eigenvalue " + format_double(min_eig) +
                         " below -1e-10");
  if (min_eig < 0.0) {
    Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
    sym = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
    sym = 0.5 * (sym + sym.transpose()).eval();
  }
  return {op.dom(), op.cod(), std::move(sym)};
}

inline Covariances covariances(const CurvePanel& panel) {
  const int n = panel.n();
  if (n < 2) throw std::invalid_argument("covariances: need at least 2 curves, got " + std::to_string(n));
  const Eigen::MatrixXd& x = panel.X();
  const Eigen::MatrixXd& xp = panel.Xp();
  const double inv_n = 1.0 / n;
  const double inv_lag = 1.0 / (n - 1);

  Eigen::MatrixXd gp = inv_n * xp * x.transpose();
  const auto next = x.rightCols(n - 1);
  return Covariances{
      repair_psd({Space::W, Space::W, inv_n * x * x.transpose()}),
      {Space::W, Space::L, gp},
      {Space::L, Space::W, gp.transpose()},
      repair_psd({Space::L, Space::L, inv_n * xp * xp.transpose()}),
      {Space::W, Space::W, inv_lag * next * x.leftCols(n - 1).transpose()},
      {Space::L, Space::W, inv_lag * next * xp.leftCols(n - 1).transpose()},
      n,
  };
}

struct StructuralDiagnostics {
  double gamma_p_defect = 0.0;   // ||D Gamma - GammaP||_2
  double gamma_pp_defect = 0.0;  // ||D GammaPStar - GammaPP||_2
};

/// Checks (Gamma v)' = GammaP v and (GammaPStar u)' = GammaPP u in coordinates.
inline StructuralDiagnostics structural_check(const Covariances& cov, const BasisSpec& spec) {
  if (cov.size() != spec.size() || cov.gamma_p.size() != spec.size() ||
      cov.gamma_pp.size() != spec.size() || cov.gamma_p_star.size() != spec.size())
    throw std::invalid_argument("structural_check: operator dimensions do not match the basis");
  const OpMatrix d = derivative_operator(spec);
  return {spectral_norm(d * cov.gamma - cov.gamma_p),
          spectral_norm(d * cov.gamma_p_star - cov.gamma_pp)};
}

/// Row-major CSV dump; the first line records the space tags.
inline void write_op_csv(std::ostream& out, const OpMatrix& op, const std::string& name = "op") {
  out << "# name=" << name << " dom=" << to_string(op.dom()) << " cod=" << to_string(op.cod()) << "\n";
  for (Eigen::Index i = 0; i < op.mat().rows(); ++i) {
    for (Eigen::Index j = 0; j < op.mat().cols(); ++j) {
      if (j) out << ',';
      out << format_double(op.mat()(i, j));
    }
    out << '\n';
  }
}

}  // namespace arhd
