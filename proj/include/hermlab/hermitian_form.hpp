#pragma once

#include "hermlab/core.hpp"

namespace hermlab {

/// An (1,1)-form in the coordinate frame at a point.
///
/// Storage convention: m(j,k) = Theta(W_j, conj(W_k)), so the scalar value on
/// a (1,0) vector Z with coefficients Z^j is
///
///   Theta(Z, conj(Z)) = sum_{j,k} Z_j conj(Z_k) m(j,k).
///
/// For real Hessians this means m(j,k) = d_{z_j} dbar_{z_k} f. The quadratic
/// form equals zeta^H m zeta with zeta = conj(Z), so eigenvalues of the
/// Hermitian matrix m give the range of the form and a vector w annihilates
/// the form iff w^T m = 0.
class HermitianForm {
 public:
  HermitianForm() = default;
  explicit HermitianForm(MatC m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DomainError("HermitianForm must be square");
  }

  static HermitianForm zero(int n) { return HermitianForm(MatC::Zero(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const MatC& matrix() const { return m_; }
  MatC& matrix() { return m_; }

  double hermitian_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  }

  /// (H + H^dagger)/2; used before eigenvalue tests to suppress FD noise.
  HermitianForm symmetrized() const {
    return HermitianForm(0.5 * (m_ + m_.adjoint().eval()));
  }

  Cplx eval(const VecC& z_vec, const VecC& w_vec) const {
    return z_vec.transpose() * m_ * w_vec.conjugate();
  }

  double quad(const VecC& z_vec) const { return eval(z_vec, z_vec).real(); }

  VecD eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (m_ + m_.adjoint().eval()),
                                           Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  double min_eigenvalue() const { return eigenvalues().minCoeff(); }

  HermitianForm operator+(const HermitianForm& o) const {
    return HermitianForm(m_ + o.m_);
  }
  HermitianForm operator-(const HermitianForm& o) const {
    return HermitianForm(m_ - o.m_);
  }
  friend HermitianForm operator*(double s, const HermitianForm& f) {
    return HermitianForm(s * f.m_);
  }

 private:
  MatC m_;
};

}  // namespace hermlab
