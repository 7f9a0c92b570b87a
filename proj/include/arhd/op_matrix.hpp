#pragma once

// Linear operators between basis-coordinate spaces.  Both W and L coordinates
// are orthonormal, so adjoints are plain transposes.

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "arhd/basis.hpp"

namespace arhd {

/// Raised when a numerical routine meets input it cannot handle (indefinite
/// matrices, singular subspaces, failed factorizations).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OpMatrix {
 public:
  OpMatrix(Space dom, Space cod, Eigen::MatrixXd mat) : dom_(dom), cod_(cod), mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols())
      throw std::invalid_argument("OpMatrix must be square, got " + std::to_string(mat_.rows()) +
                                  "x" + std::to_string(mat_.cols()));
  }

  static OpMatrix identity(Space s, Eigen::Index n) {
    return {s, s, Eigen::MatrixXd::Identity(n, n)};
  }

  Space dom() const { return dom_; }
  Space cod() const { return cod_; }
  const Eigen::MatrixXd& mat() const { return mat_; }
  Eigen::Index size() const { return mat_.rows(); }

  OpMatrix adjoint() const { return {cod_, dom_, mat_.transpose()}; }

  CoeffVec apply(const CoeffVec& x) const {
    if (x.space != dom_)
      throw std::invalid_argument("operator with domain " + std::string(to_string(dom_)) +
                                  " applied to " + std::string(to_string(x.space)) + "-coordinates");
    if (x.size() != size()) throw std::invalid_argument("operator/vector dimension mismatch");
    return {cod_, mat_ * x.coeffs};
  }

  /// Composition lhs o rhs (rhs acts first).
  friend OpMatrix operator*(const OpMatrix& lhs, const OpMatrix& rhs) {
    if (rhs.cod_ != lhs.dom_)
      throw std::invalid_argument("cannot compose: " + std::string(to_string(rhs.dom_)) + "->" +
                                  std::string(to_string(rhs.cod_)) + " followed by " +
                                  std::string(to_string(lhs.dom_)) + "->" +
                                  std::string(to_string(lhs.cod_)));
    if (lhs.size() != rhs.size()) throw std::invalid_argument("cannot compose: dimension mismatch");
    return {rhs.dom_, lhs.cod_, lhs.mat_ * rhs.mat_};
  }

  friend OpMatrix operator+(const OpMatrix& a, const OpMatrix& b) {
    check_same_type(a, b);
    return {a.dom_, a.cod_, a.mat_ + b.mat_};
  }

  friend OpMatrix operator-(const OpMatrix& a, const OpMatrix& b) {
    check_same_type(a, b);
    return {a.dom_, a.cod_, a.mat_ - b.mat_};
  }

  friend OpMatrix operator*(double s, const OpMatrix& a) { return {a.dom_, a.cod_, s * a.mat_}; }

 private:
  static void check_same_type(const OpMatrix& a, const OpMatrix& b) {
    if (a.dom_ != b.dom_ || a.cod_ != b.cod_)
      throw std::invalid_argument("operator space tags differ");
    if (a.size() != b.size()) throw std::invalid_argument("operator dimensions differ");
  }

  Space dom_;
  Space cod_;
  Eigen::MatrixXd mat_;
};

/// The derivative map W -> L as an operator.
inline OpMatrix derivative_operator(const BasisSpec& spec) {
  return {Space::W, Space::L, derivative_matrix(spec)};
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

inline double spectral_norm(const OpMatrix& op) { return spectral_norm(op.mat()); }

inline double asymmetry(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

/// Ascending eigenvalues of a symmetric matrix.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return es.eigenvalues();
}

}  // namespace arhd
