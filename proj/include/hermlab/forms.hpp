#pragma once

#include <memory>

#include "hermlab/geometry.hpp"

namespace hermlab {

/// A (0,1)-form u = sum u_j dzbar_j with optional analytic coefficient
/// derivatives; FD fallback mirrors ScalarField.
struct ZeroOneForm {
  int dim = 0;
  std::function<VecC(const VecC&)> coeffs;
  std::function<VecC(const VecC&, int)> d_analytic;     // d_{z_a} of all coeffs
  std::function<VecC(const VecC&, int)> dbar_analytic;  // d_{zbar_a}
  double fd_step = kDefaultFdStep;

  VecC operator()(const VecC& z) const {
    VecC u = coeffs(z);
    if (!is_finite(u)) throw NumericalError("ZeroOneForm produced non-finite coeffs");
    return u;
  }

  VecC d(const VecC& z, int a) const {
    if (d_analytic) return d_analytic(z, a);
    return fd_wirtinger_d(coeffs, z, a, fd_step);
  }

  VecC dbar(const VecC& z, int a) const {
    if (dbar_analytic) return dbar_analytic(z, a);
    return fd_wirtinger_dbar(coeffs, z, a, fd_step);
  }
};

/// A (1,0) vector field Z = sum Z^j d/dz_j.
struct VectorField10 {
  int dim = 0;
  std::function<VecC(const VecC&)> coeffs;
  std::function<VecC(const VecC&, int)> d_analytic;
  bool holomorphic = false;
  double fd_step = kDefaultFdStep;

  VecC operator()(const VecC& z) const {
    VecC v = coeffs(z);
    if (!is_finite(v)) throw NumericalError("VectorField10 produced non-finite coeffs");
    return v;
  }

  VecC d(const VecC& z, int a) const {
    if (d_analytic) return d_analytic(z, a);
    return fd_wirtinger_d(coeffs, z, a, fd_step);
  }

  VecC dbar(const VecC& z, int a) const {
    return fd_wirtinger_dbar(coeffs, z, a, fd_step);
  }
};

inline VectorField10 constant_vector_field(int n, int slot) {
  VectorField10 v;
  v.dim = n;
  v.holomorphic = true;
  v.coeffs = [n, slot](const VecC&) {
    VecC c = VecC::Zero(n);
    c[slot] = 1.0;
    return c;
  };
  v.d_analytic = [n](const VecC&, int) { return VecC::Zero(n).eval(); };
  return v;
}

/// W_1 = sum z_j d/dz_j, the radial field of the Hopf chart.
inline VectorField10 radial_vector_field(int n) {
  VectorField10 v;
  v.dim = n;
  v.holomorphic = true;
  v.coeffs = [](const VecC& z) { return z; };
  v.d_analytic = [n](const VecC&, int a) {
    VecC c = VecC::Zero(n);
    c[a] = 1.0;
    return c;
  };
  return v;
}

// ---------------------------------------------------------------------------
// Midpoint quadrature over a box in the 2n real coordinates
// (x_1, y_1, ..., x_n, y_n).
// ---------------------------------------------------------------------------

struct QuadratureBox {
  VecD lo, hi;           // size 2n
  std::vector<int> res;  // per-axis resolution

  int real_dim() const { return static_cast<int>(lo.size()); }
  int complex_dim() const { return real_dim() / 2; }

  static QuadratureBox cube(int n, double half_width, int resolution) {
    QuadratureBox q;
    q.lo = VecD::Constant(2 * n, -half_width);
    q.hi = VecD::Constant(2 * n, half_width);
    q.res.assign(2 * n, resolution);
    return q;
  }

  static QuadratureBox centered(const VecC& center, double half_width, int resolution) {
    int n = static_cast<int>(center.size());
    QuadratureBox q = cube(n, half_width, resolution);
    for (int j = 0; j < n; ++j) {
      q.lo[2 * j] += center[j].real();
      q.hi[2 * j] += center[j].real();
      q.lo[2 * j + 1] += center[j].imag();
      q.hi[2 * j + 1] += center[j].imag();
    }
    return q;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < real_dim(); ++a) v *= (hi[a] - lo[a]) / res[a];
    return v;
  }

  /// Visits every midpoint node in a fixed lexicographic order.
  template <typename Fn>
  void for_each_node(Fn&& fn) const {
    const int d = real_dim();
    const int n = complex_dim();
    std::vector<int> idx(d, 0);
    double w = cell_volume();
    VecC z(n);
    for (;;) {
      for (int j = 0; j < n; ++j) {
        double x = lo[2 * j] + (hi[2 * j] - lo[2 * j]) * (idx[2 * j] + 0.5) / res[2 * j];
        double y = lo[2 * j + 1] +
                   (hi[2 * j + 1] - lo[2 * j + 1]) * (idx[2 * j + 1] + 0.5) / res[2 * j + 1];
        z[j] = Cplx(x, y);
      }
      fn(z, w);
      int a = 0;
      while (a < d && ++idx[a] == res[a]) idx[a++] = 0;
      if (a == d) break;
    }
  }
};

// ---------------------------------------------------------------------------
// Compactly supported bumps: q(t) = (1 - t^2)^4 per real coordinate (C^3),
// tensorized and rescaled to a box of given center/half-width.
// ---------------------------------------------------------------------------

inline double bump1(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  double s = 1.0 - t * t;
  return s * s * s * s;
}

inline double bump1_deriv(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  double s = 1.0 - t * t;
  return -8.0 * t * s * s * s;
}

/// Product bump over all 2n real coordinates, supported in the box
/// |x_j - c_x| < hw, |y_j - c_y| < hw. Analytic first derivatives.
inline ScalarField bump_field(const VecC& center, double half_width) {
  const int n = static_cast<int>(center.size());
  ScalarField f;
  f.dim = n;
  f.real_valued = true;
  VecC c = center;
  double hw = half_width;
  auto vals = [n, c, hw](const VecC& z) {
    std::vector<double> q(2 * n);
    for (int j = 0; j < n; ++j) {
      q[2 * j] = bump1((z[j].real() - c[j].real()) / hw);
      q[2 * j + 1] = bump1((z[j].imag() - c[j].imag()) / hw);
    }
    return q;
  };
  f.eval = [vals, n](const VecC& z) {
    auto q = vals(z);
    double p = 1.0;
    for (double v : q) p *= v;
    return Cplx(p);
  };
  f.d_analytic = [vals, n, c, hw](const VecC& z, int j) {
    auto q = vals(z);
    double rest = 1.0;
    for (int a = 0; a < 2 * n; ++a)
      if (a != 2 * j && a != 2 * j + 1) rest *= q[a];
    double tx = (z[j].real() - c[j].real()) / hw;
    double ty = (z[j].imag() - c[j].imag()) / hw;
    double px = bump1_deriv(tx) / hw * q[2 * j + 1];
    double py = bump1_deriv(ty) / hw * q[2 * j];
    return 0.5 * rest * Cplx(px, -py);
  };
  return f;
}

/// u = bump * dzbar_slot with analytic first derivatives of the coefficient.
inline ZeroOneForm bump_form(const VecC& center, double half_width, int slot) {
  const int n = static_cast<int>(center.size());
  auto b = std::make_shared<ScalarField>(bump_field(center, half_width));
  ZeroOneForm u;
  u.dim = n;
  u.coeffs = [b, n, slot](const VecC& z) {
    VecC v = VecC::Zero(n);
    v[slot] = (*b)(z);
    return v;
  };
  u.d_analytic = [b, n, slot](const VecC& z, int a) {
    VecC v = VecC::Zero(n);
    v[slot] = b->d(z, a);
    return v;
  };
  u.dbar_analytic = [b, n, slot](const VecC& z, int a) {
    VecC v = VecC::Zero(n);
    v[slot] = b->dbar(z, a);
    return v;
  };
  return u;
}

// ---------------------------------------------------------------------------
// Pointwise frame data shared by the operators below.
// ---------------------------------------------------------------------------

struct FrameData {
  MatC g, gi;
  Tensor3 gamma, torsion;
  MatC frame;  // rows: orthonormalized frame E_j = sum_p frame(j,p) W_p
};

inline FrameData frame_data(const MetricField& g, const ChartPoint& z) {
  FrameData fd;
  fd.g = g(z.coords);
  Eigen::PartialPivLU<MatC> lu(fd.g);
  if (std::abs(lu.determinant()) < kPivotFloor)
    throw NumericalError("frame_data: singular metric");
  fd.gi = lu.inverse();
  fd.gamma = christoffel(g, z);
  fd.torsion = torsion_coeffs(g, z);
  fd.frame = orthonormal_frame(fd.g);
  return fd;
}

/// Div Z = sum_j theta^j(nabla^T_{W_j} Z)
///       = sum_j d_{z_j} Z^j + sum_{j,k} (Gamma^j_{jk} - T^j_{jk}) Z^k.
inline Cplx divergence(const MetricField& g, const VectorField10& Z,
                       const ChartPoint& z) {
  const int n = g.dim;
  FrameData fd = frame_data(g, z);
  VecC zc = Z(z.coords);
  Cplx acc = 0;
  for (int j = 0; j < n; ++j) acc += Z.d(z.coords, j)[j];
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      acc += (fd.gamma(j, j, k) - fd.torsion(j, j, k)) * zc[k];
  return acc;
}

/// Raised components u^j = <u, thetabar^j> = sum_k g^{kbar j} u_k.
inline VecC raise_index(const MatC& gi, const VecC& u) {
  return gi.transpose() * u;
}

/// dbar^*_psi u = sum_j [ -d_{z_j} u^j - (d_{z_j} log det g) u^j
///                        + (d_{z_j} psi) u^j ].
inline Cplx dbar_star_psi(const MetricField& g, const ScalarField& psi,
                          const ZeroOneForm& u, const ChartPoint& z) {
  const int n = g.dim;
  MatC gm = g(z.coords);
  Eigen::PartialPivLU<MatC> lu(gm);
  if (std::abs(lu.determinant()) < kPivotFloor)
    throw NumericalError("dbar_star_psi: singular metric");
  MatC gi = lu.inverse();
  VecC uc = u(z.coords);
  VecC up = raise_index(gi, uc);
  Cplx acc = 0;
  for (int j = 0; j < n; ++j) {
    MatC dgj = g.d(z.coords, j);
    MatC dgi = -gi * dgj * gi;
    VecC duj = u.d(z.coords, j);
    Cplx d_up_j = (dgi.transpose() * uc + gi.transpose() * duj)[j];
    Cplx dlogdet = (gi * dgj).trace();
    acc += -d_up_j - dlogdet * up[j] + psi.d(z.coords, j) * up[j];
  }
  return acc;
}

/// (dbar u)(Wbar_j, Wbar_k) through the connection formula
///   dbar u = (1/2) sum_j thetabar^j ^ (nabla_{Wbar_j} + nabla^T_{Wbar_j}) u;
/// the connection/torsion contributions cancel against the antisymmetrization,
/// so the result equals the metric-independent d_{zbar_j} u_k - d_{zbar_k} u_j.
inline MatC dbar_01(const MetricField& g, const ZeroOneForm& u, const ChartPoint& z) {
  const int n = g.dim;
  FrameData fd = frame_data(g, z);
  VecC uc = u(z.coords);
  // rows a: (nabla_{dbar_a} + nabla^T_{dbar_a}) u, column = form slot
  MatC m(n, n);
  for (int a = 0; a < n; ++a) {
    VecC du = u.dbar(z.coords, a);
    for (int b = 0; b < n; ++b) {
      Cplx v = 2.0 * du[b];
      for (int l = 0; l < n; ++l)
        v += (-2.0 * std::conj(fd.gamma(l, a, b)) + std::conj(fd.torsion(l, a, b))) *
             uc[l];
      m(a, b) = v;
    }
  }
  MatC c = 0.5 * (m - m.transpose().eval());
  if (!is_finite(c)) throw NumericalError("dbar_01: non-finite result");
  return c;
}

/// Commutator identity data: lhs = ([Zbar_2, (Zbar_1)^*_psi] phi)(z),
/// rhs = (Theta_M + ddbar psi)(Z_1, Zbar_2) * phi(z).
inline std::pair<Cplx, Cplx> commutator_check(const MetricField& g,
                                              const ScalarField& psi,
                                              const VectorField10& z1,
                                              const VectorField10& z2,
                                              const ScalarField& phi,
                                              const ChartPoint& z,
                                              double h = kDefaultFdStep) {
  if (!z1.holomorphic || !z2.holomorphic)
    throw DomainError("commutator_check: vector fields must be holomorphic");
  const int n = g.dim;
  auto adjoint_z1 = [&](const std::function<Cplx(const VecC&)>& f, const VecC& w) {
    VecC zc = z1.coeffs(w);
    Cplx acc = 0;
    for (int j = 0; j < n; ++j) acc -= zc[j] * fd_wirtinger_d(f, w, j, h);
    acc -= divergence(g, z1, make_point(w, z.chart_id)) * f(w);
    for (int j = 0; j < n; ++j) acc += zc[j] * psi.d(w, j) * f(w);
    return acc;
  };
  auto zbar2 = [&](const std::function<Cplx(const VecC&)>& f, const VecC& w) {
    VecC zc = z2.coeffs(w);
    Cplx acc = 0;
    for (int j = 0; j < n; ++j) acc += std::conj(zc[j]) * fd_wirtinger_dbar(f, w, j, h);
    return acc;
  };
  std::function<Cplx(const VecC&)> phif = [&](const VecC& w) { return phi(w); };
  std::function<Cplx(const VecC&)> a_phi = [&](const VecC& w) {
    return adjoint_z1(phif, w);
  };
  std::function<Cplx(const VecC&)> b_phi = [&](const VecC& w) { return zbar2(phif, w); };
  Cplx lhs = zbar2(a_phi, z.coords) - adjoint_z1(b_phi, z.coords);
  HermitianForm total = curvature_trace(g, z) + complex_hessian(psi, z);
  Cplx rhs = total.eval(z1.coeffs(z.coords), z2.coeffs(z.coords)) * phi(z.coords);
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Torsion action on (0,1)-forms.
// ---------------------------------------------------------------------------

/// <tau u, tau v> at z via the orthonormal-frame formula
///   (1/2) sum_{p,q} u(T(Ebar_p, Ebar_q)) conj(v(T(Ebar_p, Ebar_q))).
inline Cplx tau_inner_product(const FrameData& fd, const VecC& u, const VecC& v) {
  const int n = static_cast<int>(u.size());
  Cplx acc = 0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      Cplx su = 0, sv = 0;
      for (int l = 0; l < n; ++l) {
        Cplx s = 0;  // s^l_{pq}: T(E_p, E_q) coefficient
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s += fd.frame(p, a) * fd.frame(q, b) * fd.torsion(l, a, b);
        su += std::conj(s) * u[l];
        sv += std::conj(s) * v[l];
      }
      acc += su * std::conj(sv);
    }
  return 0.5 * acc;
}

/// lhs: orthonormal-frame formula; rhs: (1/2) <(nablabar^T - nablabar)u, ...>
/// with ((nablabar^T - nablabar)_{dbar_a} u)_j = sum_l conj(T^l_{aj}) u_l.
inline std::pair<Cplx, Cplx> tau_identity_check(const MetricField& g,
                                                const ZeroOneForm& u,
                                                const ZeroOneForm& v,
                                                const ChartPoint& z) {
  const int n = g.dim;
  FrameData fd = frame_data(g, z);
  VecC uc = u(z.coords), vc = v(z.coords);
  Cplx lhs = tau_inner_product(fd, uc, vc);
  MatC du(n, n), dv(n, n);  // (a, j) slots
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) {
      Cplx su = 0, sv = 0;
      for (int l = 0; l < n; ++l) {
        su += std::conj(fd.torsion(l, a, j)) * uc[l];
        sv += std::conj(fd.torsion(l, a, j)) * vc[l];
      }
      du(a, j) = su;
      dv(a, j) = sv;
    }
  Cplx rhs = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          rhs += du(a, j) * std::conj(dv(b, k)) * fd.gi(a, b) * fd.gi(j, k);
  return {lhs, 0.5 * rhs};
}

// ---------------------------------------------------------------------------
// Pointwise norms used by the BKMKH quadrature.
// ---------------------------------------------------------------------------

inline double form_norm2(const MatC& gi, const VecC& u) {
  Cplx acc = 0;
  for (int a = 0; a < gi.rows(); ++a)
    for (int b = 0; b < gi.cols(); ++b) acc += u[a] * std::conj(u[b]) * gi(a, b);
  return acc.real();
}

/// |dbar u|^2 from the antisymmetric coefficient matrix c.
inline double dbar_norm2(const MatC& gi, const MatC& c) {
  const int n = static_cast<int>(gi.rows());
  Cplx acc = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          acc += c(j, k) * std::conj(c(a, b)) *
                 (gi(j, a) * gi(k, b) - gi(j, b) * gi(k, a));
  return 0.25 * acc.real();
}

/// Full covariant derivative nablabar^T u as the matrix M(j,k) =
/// (nabla^T_{dbar_j} u)_k, and its pointwise squared norm.
inline double nabla_t_bar_norm2(const MetricField& g, const FrameData& fd,
                                const ZeroOneForm& u, const VecC& z) {
  const int n = g.dim;
  VecC uc = u.coeffs(z);
  MatC m(n, n);
  for (int j = 0; j < n; ++j) {
    VecC du = u.dbar(z, j);
    for (int k = 0; k < n; ++k) {
      Cplx v = du[k];
      for (int l = 0; l < n; ++l)
        v -= std::conj(fd.gamma(l, j, k) - fd.torsion(l, j, k)) * uc[l];
      m(j, k) = v;
    }
  }
  Cplx acc = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          acc += m(j, a) * std::conj(m(k, b)) * fd.gi(j, k) * fd.gi(a, b);
  return acc.real();
}

// ---------------------------------------------------------------------------
// Quadrature checks.
// ---------------------------------------------------------------------------

/// | <Zbar f, h>_psi - <f, Zbar^*_psi h>_psi | over the box; f must be
/// compactly supported strictly inside.
inline double adjoint_ibp_residual(const MetricField& g, const ScalarField& psi,
                                   const ScalarField& f, const ScalarField& h,
                                   const VectorField10& Z, const QuadratureBox& quad) {
  KahanSumC term1, term2;
  quad.for_each_node([&](const VecC& z, double w) {
    Cplx fv = f(z);
    Cplx hv = h(z);
    VecC zc = Z.coeffs(z);
    Cplx zbar_f = 0;
    for (int j = 0; j < g.dim; ++j) zbar_f += std::conj(zc[j]) * f.dbar(z, j);
    Cplx zstar_h = 0;
    if (fv != Cplx(0) || hv != Cplx(0) || std::abs(zbar_f) > 0) {
      ChartPoint p = make_point(z);
      for (int j = 0; j < g.dim; ++j) zstar_h -= zc[j] * h.d(z, j);
      zstar_h -= divergence(g, Z, p) * hv;
      for (int j = 0; j < g.dim; ++j) zstar_h += zc[j] * psi.d(z, j) * hv;
      double dens = std::exp(log_det_metric(g(z)) - psi(z).real()) * w;
      term1.add(zbar_f * std::conj(hv) * dens);
      term2.add(fv * std::conj(zstar_h) * dens);
    }
  });
  return std::abs(term1.value() - term2.value());
}

struct BkmkhTerms {
  double lhs_dbar = 0, lhs_dbar_star = 0;
  double rhs_nabla = 0, rhs_tau = 0, rhs_cross = 0, rhs_curv = 0;
  double lhs() const { return lhs_dbar + lhs_dbar_star; }
  double rhs() const { return rhs_nabla - rhs_tau + rhs_cross + rhs_curv; }
  double residual() const { return std::abs(lhs() - rhs()); }
  double relative_residual() const {
    double scale = std::max(std::abs(lhs()), std::abs(rhs()));
    return scale > 0 ? residual() / scale : 0.0;
  }
};

/// Twisted Bochner-Kodaira-Morrey-Kohn-Hormander identity for compactly
/// supported u (the boundary integral vanishes):
///   ||sqrt(k) dbar u||^2 + ||sqrt(k) dbar*_psi u||^2
///     = ||sqrt(k) nablabar^T u||^2 - ||sqrt(k) tau u||^2
///       + 2 Re (dbar*_psi u, <u, dbar k>)_psi
///       + ((k Theta_M + k ddbar psi - ddbar k) u, u)_psi.
inline BkmkhTerms bkmkh_terms(const MetricField& g, const ScalarField& psi,
                              const ScalarField& kappa, const ZeroOneForm& u,
                              const QuadratureBox& quad) {
  const int n = g.dim;
  KahanSum s_dbar, s_star, s_nabla, s_tau, s_curv;
  KahanSumC s_cross;
  quad.for_each_node([&](const VecC& z, double w) {
    VecC uc = u.coeffs(z);
    if (uc.cwiseAbs().maxCoeff() == 0.0) {
      // every integrand term is linear in (u, du); skip nodes where both vanish
      bool active = false;
      for (int j = 0; j < n && !active; ++j)
        if (u.d(z, j).cwiseAbs().maxCoeff() != 0.0 ||
            u.dbar(z, j).cwiseAbs().maxCoeff() != 0.0)
          active = true;
      if (!active) return;
    }
    ChartPoint p = make_point(z);
    double kv = kappa(z).real();
    if (kv <= 0) throw DomainError("bkmkh_terms: kappa must be positive on support");
    FrameData fd = frame_data(g, p);
    double dens = std::exp(log_det_metric(fd.g) - psi(z).real()) * w;

    MatC c = dbar_01(g, u, p);
    s_dbar.add(kv * dbar_norm2(fd.gi, c) * dens);

    Cplx star = dbar_star_psi(g, psi, u, p);
    s_star.add(kv * std::norm(star) * dens);

    s_nabla.add(kv * nabla_t_bar_norm2(g, fd, u, z) * dens);
    s_tau.add(kv * tau_inner_product(fd, uc, uc).real() * dens);

    // <u, dbar kappa> = sum u_a conj(dbar_b kappa) g^{a bbar-ish} pairing
    Cplx pair = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        pair += uc[a] * std::conj(kappa.dbar(z, b)) * fd.gi(a, b);
    s_cross.add(star * std::conj(pair) * dens);

    HermitianForm total(kv * (curvature_trace(g, p).matrix() +
                              complex_hessian(psi, p).matrix()) -
                        complex_hessian(kappa, p).matrix());
    VecC up = raise_index(fd.gi, uc);
    s_curv.add(total.quad(up) * dens);
  });
  BkmkhTerms t;
  t.lhs_dbar = s_dbar.value();
  t.lhs_dbar_star = s_star.value();
  t.rhs_nabla = s_nabla.value();
  t.rhs_tau = s_tau.value();
  t.rhs_cross = 2.0 * s_cross.value().real();
  t.rhs_curv = s_curv.value();
  return t;
}

struct BkmkhLevel {
  int resolution = 0;
  double lhs = 0, rhs = 0, residual = 0, relative_residual = 0;
};

inline std::vector<BkmkhLevel> bkmkh_refinement(const MetricField& g,
                                                const ScalarField& psi,
                                                const ScalarField& kappa,
                                                const ZeroOneForm& u,
                                                const QuadratureBox& base,
                                                const std::vector<int>& resolutions) {
  std::vector<BkmkhLevel> out;
  for (int r : resolutions) {
    QuadratureBox q = base;
    q.res.assign(q.real_dim(), r);
    BkmkhTerms t = bkmkh_terms(g, psi, kappa, u, q);
    out.push_back({r, t.lhs(), t.rhs(), t.residual(), t.relative_residual()});
  }
  return out;
}

}  // namespace hermlab
