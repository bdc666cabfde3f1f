#pragma once

#include "hermlab/fields.hpp"

namespace hermlab {

/// n^3 coefficients indexed (l, j, k): the dz_l component of a (j,k) slot.
struct Tensor3 {
  int n = 0;
  std::vector<Cplx> v;

  explicit Tensor3(int dim = 0) : n(dim), v(static_cast<size_t>(dim) * dim * dim) {}
  Cplx& operator()(int l, int j, int k) { return v[(static_cast<size_t>(l) * n + j) * n + k]; }
  const Cplx& operator()(int l, int j, int k) const {
    return v[(static_cast<size_t>(l) * n + j) * n + k];
  }
  double max_abs() const {
    double m = 0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
  }
};

/// Chern connection coefficients in the coordinate frame:
///   Gamma^l_{jk} = sum_m (d_{z_j} g_{k mbar}) g^{mbar l},
/// i.e. nabla_{W_j} W_k = sum_l Gamma^l_{jk} W_l.
inline Tensor3 christoffel(const MetricField& g, const ChartPoint& z) {
  const int n = g.dim;
  MatC gm = g(z.coords);
  Eigen::PartialPivLU<MatC> lu(gm);
  if (std::abs(lu.determinant()) < kPivotFloor)
    throw NumericalError("christoffel: singular metric");
  MatC ginv = lu.inverse();  // ginv(m, l) = g^{mbar l}
  Tensor3 gamma(n);
  for (int j = 0; j < n; ++j) {
    MatC dg = g.d(z.coords, j);        // dg(k, m) = d_{z_j} g_{k mbar}
    MatC prod = dg * ginv;             // prod(k, l) = Gamma^l_{jk}
    if (!is_finite(prod)) throw NumericalError("christoffel: non-finite derivative");
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) gamma(l, j, k) = prod(k, l);
  }
  return gamma;
}

/// Torsion of the Chern connection, T^l_{jk} = Gamma^l_{jk} - Gamma^l_{kj},
/// stored exactly antisymmetrized.
inline Tensor3 torsion_coeffs(const MetricField& g, const ChartPoint& z) {
  Tensor3 gamma = christoffel(g, z);
  const int n = g.dim;
  Tensor3 t(n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Cplx val = gamma(l, j, k) - gamma(l, k, j);
        t(l, j, k) = val;
        t(l, k, j) = -val;
      }
  return t;
}

/// Mixed-derivative matrix H(j,k) = d_{z_j} d_{zbar_k} f(z).
inline HermitianForm complex_hessian(const ScalarField& f, const ChartPoint& z) {
  const int n = f.dim;
  MatC h(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) h(j, k) = f.ddbar(z.coords, j, k);
  if (!is_finite(h)) throw NumericalError("complex_hessian: non-finite result");
  return HermitianForm(h);
}

/// Theta_M(j,k) = -d_{z_j} d_{zbar_k} log det g. Evaluated through Jacobi's
/// formula so that analytic metric derivatives give analytic curvature:
///   d_j dbar_k log det G = tr(G^{-1} d_j dbar_k G)
///                        - tr(G^{-1} (dbar_k G) G^{-1} (d_j G)).
inline HermitianForm curvature_trace(const MetricField& g, const ChartPoint& z) {
  const int n = g.dim;
  MatC gm = g(z.coords);
  Eigen::PartialPivLU<MatC> lu(gm);
  if (std::abs(lu.determinant()) < kPivotFloor)
    throw NumericalError("curvature_trace: singular metric");
  MatC ginv = lu.inverse();
  std::vector<MatC> dg(n);
  for (int a = 0; a < n; ++a) dg[a] = g.d(z.coords, a);
  MatC theta(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      MatC dbar_k = dg[k].adjoint();
      Cplx v = (ginv * g.ddbar(z.coords, j, k)).trace() -
               (ginv * dbar_k * ginv * dg[j]).trace();
      theta(j, k) = -v;
    }
  if (!is_finite(theta)) throw NumericalError("curvature_trace: non-finite result");
  return HermitianForm(theta);
}

/// Lower-triangular factor L with G = L L^dagger; rows of L^{-1} are the
/// coefficients of an orthonormalized coordinate frame E_j = sum_p A(j,p) W_p.
inline MatC orthonormal_frame(const MatC& g) {
  Eigen::LLT<MatC> llt(g);
  if (llt.info() != Eigen::Success)
    throw NumericalError("orthonormal_frame: metric not positive definite");
  MatC l = llt.matrixL();
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    if (l(i, i).real() < kPivotFloor)
      throw NumericalError("orthonormal_frame: pivot underflow");
  return l.triangularView<Eigen::Lower>().solve(MatC::Identity(g.rows(), g.cols()));
}

/// Hermitian PSD form Q with Q(Z, conj(Z)) = |tau_nabla Z^flat|^2.
/// Built from Q = sum_{j<k} conj(v_{jk}) v_{jk}^T with v_{jk} = G^T t_{jk},
/// where t_{jk} are the coefficients of T(E_j, E_k) in the orthonormalized
/// frame, so that <T(E_j,E_k), Z> = v_{jk}^T conj(... ) matches the storage
/// convention of HermitianForm.
inline HermitianForm torsion_norm_form(const MetricField& g, const ChartPoint& z) {
  const int n = g.dim;
  MatC gm = g(z.coords);
  MatC a = orthonormal_frame(gm);
  Tensor3 t = torsion_coeffs(g, z);
  MatC q = MatC::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      VecC tvec = VecC::Zero(n);  // coefficients of T(E_j, E_k)
      for (int l = 0; l < n; ++l) {
        Cplx acc(0);
        for (int p = 0; p < n; ++p)
          for (int qq = 0; qq < n; ++qq) acc += a(j, p) * a(k, qq) * t(l, p, qq);
        tvec[l] = acc;
      }
      VecC v = gm.transpose() * tvec;
      q += v.conjugate() * v.transpose();
    }
  return HermitianForm(q);
}

/// log det g - log det g~ at z (Kaehler-comparison weight).
inline double kahler_comparison_weight(const MetricField& g, const MetricField& gt,
                                       const ChartPoint& z) {
  return log_det_metric(g(z.coords)) - log_det_metric(gt(z.coords));
}

}  // namespace hermlab
