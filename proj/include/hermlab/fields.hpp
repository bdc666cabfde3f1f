#pragma once

#include "hermlab/core.hpp"
#include "hermlab/hermitian_form.hpp"

namespace hermlab {

/// A scalar function on a chart with optional analytic derivative callbacks.
/// When a callback is missing, the accessor falls back to central Wirtinger
/// finite differences of step fd_step.
struct ScalarField {
  int dim = 0;
  std::function<Cplx(const VecC&)> eval;
  std::function<Cplx(const VecC&, int)> d_analytic;             // d_{z_j} f
  std::function<Cplx(const VecC&, int)> dbar_analytic;          // d_{zbar_j} f
  std::function<Cplx(const VecC&, int, int)> ddbar_analytic;    // d_{z_j} d_{zbar_k} f
  bool real_valued = false;
  double fd_step = kDefaultFdStep;

  Cplx operator()(const VecC& z) const {
    Cplx v = eval(z);
    if (!is_finite(v)) throw NumericalError("ScalarField produced a non-finite value");
    return v;
  }
  Cplx operator()(const ChartPoint& p) const { return (*this)(p.coords); }

  Cplx d(const VecC& z, int j) const {
    if (d_analytic) return d_analytic(z, j);
    return fd_wirtinger_d(eval, z, j, fd_step);
  }

  Cplx dbar(const VecC& z, int j) const {
    if (dbar_analytic) return dbar_analytic(z, j);
    if (real_valued && d_analytic) return std::conj(d_analytic(z, j));
    return fd_wirtinger_dbar(eval, z, j, fd_step);
  }

  Cplx ddbar(const VecC& z, int j, int k) const {
    if (ddbar_analytic) return ddbar_analytic(z, j, k);
    if (d_analytic) {
      auto dj = [&](const VecC& w) { return d_analytic(w, j); };
      return fd_wirtinger_dbar(dj, z, k, fd_step);
    }
    return fd_wirtinger_ddbar(eval, z, j, k, fd_step);
  }

  VecC gradient(const VecC& z) const {
    VecC g(dim);
    for (int j = 0; j < dim; ++j) g[j] = d(z, j);
    return g;
  }

  VecC gradient_bar(const VecC& z) const {
    VecC g(dim);
    for (int j = 0; j < dim; ++j) g[j] = dbar(z, j);
    return g;
  }
};

inline ScalarField constant_field(int n, Cplx c) {
  ScalarField f;
  f.dim = n;
  f.eval = [c](const VecC&) { return c; };
  f.d_analytic = [](const VecC&, int) { return Cplx(0); };
  f.dbar_analytic = [](const VecC&, int) { return Cplx(0); };
  f.ddbar_analytic = [](const VecC&, int, int) { return Cplx(0); };
  f.real_valued = (c.imag() == 0);
  return f;
}

/// A chart-local Hermitian metric g_{j kbar}(z) with derivative access.
/// eval returns the matrix G with G(j,k) = g_{j kbar} = <W_j, W_k>.
struct MetricField {
  int dim = 0;
  std::function<MatC(const VecC&)> eval;
  std::function<MatC(const VecC&, int)> d_analytic;           // d_{z_a} G
  std::function<MatC(const VecC&, int, int)> ddbar_analytic;  // d_{z_a} d_{zbar_b} G
  double fd_step = kDefaultFdStep;

  MatC operator()(const VecC& z) const {
    MatC g = eval(z);
    if (!is_finite(g)) throw NumericalError("MetricField produced non-finite entries");
    return g;
  }
  MatC operator()(const ChartPoint& p) const { return (*this)(p.coords); }

  bool analytic() const { return static_cast<bool>(d_analytic); }

  MatC d(const VecC& z, int a) const {
    if (d_analytic) return d_analytic(z, a);
    return fd_wirtinger_d(eval, z, a, fd_step);
  }

  /// dbar_{z_b} G from Hermitian symmetry: dbar_b g_{j kbar} = conj(d_b g_{k jbar}).
  MatC dbar(const VecC& z, int b) const { return d(z, b).adjoint(); }

  MatC ddbar(const VecC& z, int a, int b) const {
    if (ddbar_analytic) return ddbar_analytic(z, a, b);
    if (d_analytic) {
      auto da = [&](const VecC& w) { return d_analytic(w, a); };
      return fd_wirtinger_dbar(da, z, b, fd_step);
    }
    return fd_wirtinger_ddbar(eval, z, a, b, fd_step);
  }

  void validate_at(const VecC& z) const {
    MatC g = (*this)(z);
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
      throw NumericalError("metric is not conjugate-symmetric");
    Eigen::SelfAdjointEigenSolver<MatC> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0)
      throw NumericalError("metric is not positive definite");
  }
};

/// log det via triangular (Cholesky) factorization; fails on tiny pivots.
inline double log_det_metric(const MatC& g) {
  Eigen::LLT<MatC> llt(g);
  if (llt.info() != Eigen::Success)
    throw NumericalError("metric factorization failed (not positive definite)");
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    double piv = l(i, i).real();
    if (piv < kPivotFloor) throw NumericalError("near-singular metric: pivot underflow");
    acc += 2.0 * std::log(piv);
  }
  return acc;
}

}  // namespace hermlab
