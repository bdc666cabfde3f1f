#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hermlab/fields.hpp"
#include "hermlab/models.hpp"

namespace hermlab {

// ---------------------------------------------------------------------------
// Exact area of a grid cell intersected with the origin-centered disc of
// radius r, via the corner function
//   W(x, y) = area( disc  ∩ {u <= x} ∩ {v <= y} ).
// ---------------------------------------------------------------------------

namespace detail {

/// I(u) = int_0^u sqrt(r^2 - t^2) dt for |u| <= r.
inline double circ_antideriv(double u, double r) {
  u = std::clamp(u, -r, r);
  return 0.5 * (u * std::sqrt(std::max(0.0, r * r - u * u)) +
                r * r * std::asin(std::clamp(u / r, -1.0, 1.0)));
}

inline double disc_corner_area(double x, double y, double r) {
  if (x <= -r || y <= -r) return 0.0;
  x = std::min(x, r);
  y = std::min(y, r);
  auto seg = [&](double a, double b) {  // int_a^b c(u) du, c = sqrt(r^2-u^2)
    return circ_antideriv(b, r) - circ_antideriv(a, r);
  };
  double a = std::sqrt(std::max(0.0, r * r - y * y));
  if (y >= 0) {
    // integrand: 2c for |u| > a, y + c for |u| <= a
    double acc = 0.0;
    double u1 = std::min(x, -a);
    if (u1 > -r) acc += 2.0 * seg(-r, u1);
    if (x > -a) {
      double u2 = std::min(x, a);
      acc += y * (u2 + a) + seg(-a, u2);
      if (x > a) acc += 2.0 * seg(a, x);
    }
    return acc;
  }
  // y < 0: integrand y + c on |u| <= a, else 0
  if (x <= -a) return 0.0;
  double u2 = std::min(x, a);
  return y * (u2 + a) + seg(-a, u2);
}

}  // namespace detail

/// Exact area of [x0,x1] x [y0,y1] ∩ {|z| <= r}.
inline double disc_cell_area(double x0, double x1, double y0, double y1, double r) {
  using detail::disc_corner_area;
  double a = disc_corner_area(x1, y1, r) - disc_corner_area(x0, y1, r) -
             disc_corner_area(x1, y0, r) + disc_corner_area(x0, y0, r);
  return std::max(0.0, a);
}

// ---------------------------------------------------------------------------
// Planar domains: the unit disc and the open square (-1,1)^2 with its
// Lipschitz defining function (see models.hpp for the square's r).
// ---------------------------------------------------------------------------

struct PlanarGrid {
  std::vector<Cplx> nodes;    // interior representative points
  std::vector<double> areas;  // exact cell ∩ domain areas
  int res = 0;
  double spacing = 0.0;
  double x_lo = 0.0, y_lo = 0.0;
  std::vector<int> cell_to_node;  // res*res lexicographic (ix*res+iy) -> index or -1
  std::vector<std::pair<int, int>> node_cells;  // (ix, iy) of each node's cell

  int node_at(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= res || iy >= res) return -1;
    return cell_to_node[static_cast<size_t>(ix) * res + iy];
  }

  /// Cell indices containing z, or nullopt outside the gridded box.
  std::optional<std::pair<int, int>> locate(Cplx z) const {
    int ix = static_cast<int>(std::floor((z.real() - x_lo) / spacing));
    int iy = static_cast<int>(std::floor((z.imag() - y_lo) / spacing));
    if (ix < 0 || iy < 0 || ix >= res || iy >= res) return std::nullopt;
    return std::make_pair(ix, iy);
  }

  double total_area() const {
    KahanSum s;
    for (double a : areas) s.add(a);
    return s.value();
  }
};

class PlanarDomain {
 public:
  enum class Kind { Disc, Square };

  static PlanarDomain disc();
  static PlanarDomain square();

  Kind kind() const { return kind_; }
  const ScalarField& rho() const { return rho_; }
  double rho_value(Cplx z) const {
    VecC v(1);
    v[0] = z;
    return rho_(v).real();
  }
  bool contains(Cplx z) const {
    return kind_ == Kind::Disc ? std::abs(z) < 1.0
                               : std::abs(z.real()) < 1.0 && std::abs(z.imag()) < 1.0;
  }
  /// Exact Euclidean boundary distance (interior points).
  double delta(Cplx z) const {
    return kind_ == Kind::Disc
               ? 1.0 - std::abs(z)
               : std::min(1.0 - std::abs(z.real()), 1.0 - std::abs(z.imag()));
  }

  /// Midpoint grid on [-1,1]^2 with exact boundary-cell areas. Nodes of
  /// boundary cells whose center falls outside are pulled just inside.
  PlanarGrid grid(int res) const {
    PlanarGrid g;
    g.res = res;
    g.spacing = 2.0 / res;
    g.x_lo = -1.0;
    g.y_lo = -1.0;
    g.cell_to_node.assign(static_cast<size_t>(res) * res, -1);
    for (int ix = 0; ix < res; ++ix)
      for (int iy = 0; iy < res; ++iy) {
        double x0 = -1.0 + ix * g.spacing, x1 = x0 + g.spacing;
        double y0 = -1.0 + iy * g.spacing, y1 = y0 + g.spacing;
        double area;
        if (kind_ == Kind::Disc)
          area = disc_cell_area(x0, x1, y0, y1, 1.0);
        else
          area = g.spacing * g.spacing;  // full cells tile the square exactly
        if (area <= 0) continue;
        Cplx c(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        if (!contains(c)) {
          // pull the representative point inside along the radius
          if (kind_ == Kind::Disc) {
            double target = 1.0 - 0.25 * g.spacing;
            c *= target / std::abs(c);
          } else {
            continue;
          }
          if (!contains(c)) continue;
        }
        g.cell_to_node[static_cast<size_t>(ix) * res + iy] =
            static_cast<int>(g.nodes.size());
        g.nodes.push_back(c);
        g.areas.push_back(area);
        g.node_cells.emplace_back(ix, iy);
      }
    return g;
  }

  /// Measured comparability constants c1, c2 with c1*delta <= -rho <= c2*delta
  /// over an interior probe grid.
  std::pair<double, double> rho_delta_comparability(int res = 64) const {
    PlanarGrid g = grid(res);
    double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
    for (Cplx z : g.nodes) {
      double d = delta(z);
      if (d <= 0) continue;
      double ratio = -rho_value(z) / d;
      c1 = std::min(c1, ratio);
      c2 = std::max(c2, ratio);
    }
    return {c1, c2};
  }

 private:
  Kind kind_ = Kind::Disc;
  ScalarField rho_;
};

inline ScalarField disc_defining_field() {
  ScalarField f;
  f.dim = 1;
  f.real_valued = true;
  f.eval = [](const VecC& z) { return Cplx(std::norm(z[0]) - 1.0); };
  f.d_analytic = [](const VecC& z, int) { return std::conj(z[0]); };
  f.ddbar_analytic = [](const VecC&, int, int) { return Cplx(1.0); };
  return f;
}

// ---------------------------------------------------------------------------
// Weighted quadrature inner products and the monomial Bergman projector.
// ---------------------------------------------------------------------------

using PlanarFn = std::function<Cplx(Cplx)>;

/// sqrt( sum |u|^2 w^{-2s} area ), w = delta or -rho per flavor.
enum class NormFlavor { Delta, MinusRho };

inline double weighted_norm(const PlanarDomain& dom, const PlanarGrid& g,
                            const PlanarFn& u, double s,
                            NormFlavor flavor = NormFlavor::MinusRho) {
  KahanSum acc;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    Cplx z = g.nodes[i];
    double w = flavor == NormFlavor::Delta ? dom.delta(z) : -dom.rho_value(z);
    if (w <= 0) throw NumericalError("weighted_norm: nonpositive weight inside domain");
    double val = std::norm(u(z)) * std::pow(w, -2.0 * s) * g.areas[i];
    if (!std::isfinite(val)) throw NumericalError("weighted_norm: non-finite integrand");
    acc.add(val);
  }
  return std::sqrt(acc.value());
}

/// Monomial basis z^k, k = 0..degree, with a quadrature-weighted Householder
/// QR projector. The Gram matrix is kept only for condition reporting.
class HoloProjector {
 public:
  HoloProjector(const PlanarGrid& g, int degree, const std::vector<double>& density)
      : grid_(&g), degree_(degree) {
    const int m = static_cast<int>(g.nodes.size());
    const int nb = degree + 1;
    if (static_cast<int>(density.size()) != m)
      throw DomainError("HoloProjector: density size mismatch");
    sqrt_w_.resize(m);
    for (int i = 0; i < m; ++i) {
      double w = density[i] * g.areas[i];
      if (!(w > 0)) throw NumericalError("HoloProjector: nonpositive quadrature weight");
      sqrt_w_[i] = std::sqrt(w);
    }
    design_.resize(m, nb);
    for (int i = 0; i < m; ++i) {
      Cplx p = 1.0;
      for (int k = 0; k < nb; ++k) {
        design_(i, k) = p * sqrt_w_[i];
        p *= g.nodes[i];
      }
    }
    qr_.compute(design_);
    MatC gram = design_.adjoint() * design_;
    Eigen::SelfAdjointEigenSolver<MatC> es(gram, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
    gram_cond_ = lmin > 0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  }

  int degree() const { return degree_; }
  double gram_cond() const { return gram_cond_; }
  bool reliable() const { return gram_cond_ <= 1e12; }

  /// Coefficients of the weighted-least-squares projection of nodal values.
  VecC project_values(const VecC& values) const {
    const int m = static_cast<int>(sqrt_w_.size());
    if (values.size() != m) throw DomainError("project_values: size mismatch");
    VecC rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = values[i] * sqrt_w_[i];
    return qr_.solve(rhs);
  }

  VecC project(const PlanarFn& v) const {
    const int m = static_cast<int>(sqrt_w_.size());
    VecC values(m);
    for (int i = 0; i < m; ++i) values[i] = v(grid_->nodes[i]);
    return project_values(values);
  }

  /// <f, g> in the projector's discrete weighted inner product.
  Cplx inner(const VecC& f_values, const VecC& g_values) const {
    KahanSumC acc;
    for (Eigen::Index i = 0; i < f_values.size(); ++i)
      acc.add(f_values[i] * std::conj(g_values[i]) * sqrt_w_[i] * sqrt_w_[i]);
    return acc.value();
  }

  static PlanarFn evaluate(VecC coeffs) {
    auto c = std::make_shared<VecC>(std::move(coeffs));
    return [c](Cplx z) {
      Cplx acc = 0, p = 1.0;
      for (Eigen::Index k = 0; k < c->size(); ++k) {
        acc += (*c)[k] * p;
        p *= z;
      }
      return acc;
    };
  }

  VecC basis_values(int k) const {
    const int m = static_cast<int>(sqrt_w_.size());
    VecC v(m);
    for (int i = 0; i < m; ++i) v[i] = std::pow(grid_->nodes[i], k);
    return v;
  }

  const PlanarGrid& grid() const { return *grid_; }

 private:
  const PlanarGrid* grid_;
  int degree_;
  std::vector<double> sqrt_w_;
  MatC design_;
  Eigen::HouseholderQR<MatC> qr_;
  double gram_cond_ = 0.0;
};

inline std::vector<double> weight_density(const PlanarGrid& g,
                                          const std::function<double(Cplx)>& psi) {
  std::vector<double> d(g.nodes.size());
  for (size_t i = 0; i < g.nodes.size(); ++i) d[i] = std::exp(-psi(g.nodes[i]));
  return d;
}

// ---------------------------------------------------------------------------
// Cauchy-transform particular solution of dbar w = rhs.
// ---------------------------------------------------------------------------

/// Exact integral of 1/(zeta - z) over the rectangle [x0,x1]x[y0,y1],
/// via (1/2i) ∮ conj(zeta-z)/(zeta-z) dzeta; valid for z inside or outside.
inline Cplx cauchy_cell_integral(double x0, double x1, double y0, double y1, Cplx z) {
  auto horiz = [&](double a, double b, double c) {  // t from a to b at height c
    double bb = c - z.imag();
    auto H = [&](double u) {
      if (bb == 0.0) return Cplx(u, 0.0);
      return Cplx(u - 2.0 * bb * std::atan(u / bb),
                  -bb * std::log(u * u + bb * bb));
    };
    return H(b - z.real()) - H(a - z.real());
  };
  auto vert = [&](double a, double b, double c) {  // t from a to b at abscissa c
    double aa = c - z.real();
    auto V = [&](double v) {
      if (aa == 0.0) return Cplx(0.0, -v);
      return Cplx(aa * std::log(aa * aa + v * v),
                  2.0 * aa * std::atan(v / aa) - v);
    };
    return V(b - z.imag()) - V(a - z.imag());
  };
  Cplx loop = horiz(x0, x1, y0) + vert(y0, y1, x1) + horiz(x1, x0, y1) + vert(y1, y0, x0);
  return loop / Cplx(0, 2.0);
}

/// w(z) = -(1/pi) ∬ rhs(zeta)/(zeta - z) dA; the cell containing z uses the
/// exact kernel integral (zero by symmetry when z is the cell's own center).
class CauchyTransform {
 public:
  CauchyTransform(PlanarGrid grid, VecC rhs_values)
      : g_(std::move(grid)), rhs_(std::move(rhs_values)) {
    if (rhs_.size() != static_cast<Eigen::Index>(g_.nodes.size()))
      throw DomainError("CauchyTransform: rhs size mismatch");
  }

  Cplx operator()(Cplx z) const {
    KahanSumC acc;
    const int m = static_cast<int>(g_.nodes.size());
    const double h = g_.spacing;
    // near-singular source cells (including the one containing z) use the
    // exact kernel integral over their rectangle; midpoint rule elsewhere
    const double near2 = (1.5 * h) * (1.5 * h);
    for (int i = 0; i < m; ++i) {
      Cplx d = g_.nodes[i] - z;
      if (std::norm(d) < near2) {
        auto [ix, iy] = g_.node_cells[i];
        double x0 = g_.x_lo + ix * h, y0 = g_.y_lo + iy * h;
        double frac = g_.areas[i] / (h * h);  // clipped boundary cells
        acc.add(rhs_[i] * frac * cauchy_cell_integral(x0, x0 + h, y0, y0 + h, z));
      } else {
        acc.add(rhs_[i] / d * g_.areas[i]);
      }
    }
    return -acc.value() / M_PI;
  }

  VecC values_at_nodes() const {
    const int m = static_cast<int>(g_.nodes.size());
    VecC out(m);
    for (int i = 0; i < m; ++i) out[i] = (*this)(g_.nodes[i]);
    return out;
  }

  const PlanarGrid& grid() const { return g_; }

 private:
  PlanarGrid g_;
  VecC rhs_;
};

/// L2 norm of (dbar w - rhs) over interior nodes (delta >= interior_margin)
/// using grid-spacing central differences of nodal values.
inline double dbar_residual_l2(const PlanarDomain& dom, const PlanarGrid& g,
                               const VecC& w_values, const PlanarFn& rhs,
                               double interior_margin = 0.15) {
  KahanSum acc;
  const double h = g.spacing;
  for (int ix = 1; ix + 1 < g.res; ++ix)
    for (int iy = 1; iy + 1 < g.res; ++iy) {
      int c = g.node_at(ix, iy);
      if (c < 0 || dom.delta(g.nodes[c]) < interior_margin) continue;
      int xl = g.node_at(ix - 1, iy), xr = g.node_at(ix + 1, iy);
      int yl = g.node_at(ix, iy - 1), yr = g.node_at(ix, iy + 1);
      if (xl < 0 || xr < 0 || yl < 0 || yr < 0) continue;
      Cplx dx = (w_values[xr] - w_values[xl]) / (2.0 * h);
      Cplx dy = (w_values[yr] - w_values[yl]) / (2.0 * h);
      Cplx dbar = 0.5 * (dx + Cplx(0, 1) * dy);
      acc.add(std::norm(dbar - rhs(g.nodes[c])) * g.areas[c]);
    }
  return std::sqrt(acc.value());
}

// ---------------------------------------------------------------------------
// Twisted solution operator (dbar u = kappa^{-1} (f - u) dbar kappa with u
// orthogonal to holomorphic functions in L2(Omega, psi)).
// ---------------------------------------------------------------------------

struct TwistedDiagnostics {
  double dbar_residual = 0.0;      // residual of the solution identity
  double norm_ratio = 0.0;         // ||u|| / ||f|| in L2(psi - log kappa)
  double orthogonality = 0.0;      // max_k |<u, z^k>_psi| / ||u||_psi
  double gram_cond = 0.0;
  bool reliable = true;
};

struct TwistedSolution {
  VecC u_values;  // at grid nodes
  VecC h_coeffs;
  TwistedDiagnostics diag;
};

/// kappa must come with analytic (or FD) dbar access via a ScalarField on C.
inline TwistedSolution twisted_solution(const PlanarDomain& dom, const PlanarGrid& g,
                                        int degree, const PlanarFn& f,
                                        const ScalarField& kappa,
                                        const std::function<double(Cplx)>& psi,
                                        double interior_margin = 0.15) {
  const int m = static_cast<int>(g.nodes.size());
  auto kval = [&](Cplx z) {
    VecC v(1);
    v[0] = z;
    return kappa(v).real();
  };
  auto kdbar = [&](Cplx z) {
    VecC v(1);
    v[0] = z;
    return kappa.dbar(v, 0);
  };

  VecC rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = f(g.nodes[i]) * kdbar(g.nodes[i]);
  CauchyTransform cauchy(g, rhs);
  VecC w = cauchy.values_at_nodes();

  // h = P_{psi + log kappa}(w) enforces <kappa^{-1}(w - h), holo>_psi = 0
  std::vector<double> dens_twisted(m), dens_plain(m);
  for (int i = 0; i < m; ++i) {
    double k = kval(g.nodes[i]);
    if (!(k > 0)) throw DomainError("twisted_solution: kappa must be positive");
    double e = std::exp(-psi(g.nodes[i]));
    dens_twisted[i] = e / k;
    dens_plain[i] = e;
  }
  HoloProjector proj_twisted(g, degree, dens_twisted);
  VecC h = proj_twisted.project_values(w);
  PlanarFn h_fn = HoloProjector::evaluate(h);

  TwistedSolution out;
  out.h_coeffs = h;
  out.u_values.resize(m);
  for (int i = 0; i < m; ++i)
    out.u_values[i] = (w[i] - h_fn(g.nodes[i])) / kval(g.nodes[i]);
  out.diag.gram_cond = proj_twisted.gram_cond();
  out.diag.reliable = proj_twisted.reliable();

  // solution-identity residual: dbar u - kappa^{-1}(f - u) dbar kappa
  {
    KahanSum acc;
    const double hsp = g.spacing;
    for (int ix = 1; ix + 1 < g.res; ++ix)
      for (int iy = 1; iy + 1 < g.res; ++iy) {
        int c = g.node_at(ix, iy);
        if (c < 0 || dom.delta(g.nodes[c]) < interior_margin) continue;
        int xl = g.node_at(ix - 1, iy), xr = g.node_at(ix + 1, iy);
        int yl = g.node_at(ix, iy - 1), yr = g.node_at(ix, iy + 1);
        if (xl < 0 || xr < 0 || yl < 0 || yr < 0) continue;
        Cplx dx = (out.u_values[xr] - out.u_values[xl]) / (2.0 * hsp);
        Cplx dy = (out.u_values[yr] - out.u_values[yl]) / (2.0 * hsp);
        Cplx dbar_u = 0.5 * (dx + Cplx(0, 1) * dy);
        Cplx target = (f(g.nodes[c]) - out.u_values[c]) * kdbar(g.nodes[c]) /
                      kval(g.nodes[c]);
        acc.add(std::norm(dbar_u - target) * g.areas[c]);
      }
    out.diag.dbar_residual = std::sqrt(acc.value());
  }

  // norms in L2(psi - log kappa): density e^{-psi} * kappa
  {
    KahanSum nu, nf;
    for (int i = 0; i < m; ++i) {
      double d = dens_plain[i] * kval(g.nodes[i]) * g.areas[i];
      nu.add(std::norm(out.u_values[i]) * d);
      nf.add(std::norm(f(g.nodes[i])) * d);
    }
    out.diag.norm_ratio = std::sqrt(nu.value() / std::max(nf.value(), 1e-300));
  }

  // orthogonality to the truncated holomorphic space in L2(psi)
  {
    HoloProjector proj_plain(g, degree, dens_plain);
    double u_norm = std::sqrt(
        std::abs(proj_plain.inner(out.u_values, out.u_values).real()));
    double worst = 0.0;
    for (int k = 0; k <= degree; ++k) {
      VecC bk = proj_plain.basis_values(k);
      double bn = std::sqrt(std::abs(proj_plain.inner(bk, bk).real()));
      worst = std::max(worst,
                       std::abs(proj_plain.inner(out.u_values, bk)) / std::max(bn, 1e-300));
    }
    out.diag.orthogonality = worst / std::max(u_norm, 1e-300);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator-bound experiment (weighted Bergman projection estimate).
// ---------------------------------------------------------------------------

struct BoundCase {
  int m = 0;
  double t = 0.0;
  bool skipped = false;
  double ratio_minus = 0.0;  // ||(-rho)^{-s} P v|| / ||(-rho)^{-s} v||
  double ratio_plus = 0.0;   // ||(-rho)^{+s} P v|| / ||(-rho)^{+s} v||
};

struct BoundReport {
  double s = 0.0, b_const = 0.0, bound = 0.0;
  double max_ratio = 0.0;
  std::vector<BoundCase> cases;
  double gram_cond = 0.0;
  bool reliable = true;
};

/// Test family v = conj(z)^m (-rho)^{-t}; cases with 2(s+t) >= 0.95 are
/// skipped (the (-rho)^{-s} norm ceases to be quadrature-stable).
inline BoundReport operator_bound_experiment(const PlanarDomain& dom,
                                             const PlanarGrid& g, int degree,
                                             const std::function<double(Cplx)>& psi,
                                             double s, const std::vector<int>& ms,
                                             const std::vector<double>& ts) {
  if (!(s > 0 && s < 0.5)) throw DomainError("operator_bound_experiment: 0 < s < 1/2");
  BoundReport rep;
  rep.s = s;
  rep.b_const = (1.0 - 2.0 * s) / (2.0 * s);
  double sq = std::sqrt(1.0 + rep.b_const);
  rep.bound = sq / (sq - 1.0);
  HoloProjector proj(g, degree, weight_density(g, psi));
  rep.gram_cond = proj.gram_cond();
  rep.reliable = proj.reliable();
  for (int m : ms)
    for (double t : ts) {
      BoundCase bc;
      bc.m = m;
      bc.t = t;
      if (2.0 * (s + t) >= 0.95) {
        bc.skipped = true;
        rep.cases.push_back(bc);
        continue;
      }
      PlanarFn v = [&dom, m, t](Cplx z) {
        Cplx p = std::pow(std::conj(z), m);
        return t == 0.0 ? p : p * std::pow(-dom.rho_value(z), -t);
      };
      VecC c = proj.project(v);
      PlanarFn pv = HoloProjector::evaluate(c);
      auto psi_weighted = [&psi](const PlanarFn& f) {
        return [f, &psi](Cplx z) { return f(z) * std::exp(-0.5 * psi(z)); };
      };
      PlanarFn vw = psi_weighted(v), pw = psi_weighted(pv);
      double dn = weighted_norm(dom, g, vw, s);
      double dp = weighted_norm(dom, g, vw, -s);
      bc.ratio_minus = weighted_norm(dom, g, pw, s) / std::max(dn, 1e-300);
      bc.ratio_plus = weighted_norm(dom, g, pw, -s) / std::max(dp, 1e-300);
      rep.max_ratio = std::max({rep.max_ratio, bc.ratio_minus, bc.ratio_plus});
      rep.cases.push_back(bc);
    }
  return rep;
}

/// || delta^{1-s} u' || / || delta^{-s} u || for u = z^m.
inline double detraz_ratio(const PlanarDomain& dom, const PlanarGrid& g, int m,
                           double s) {
  if (!(s > 0 && s < 0.5)) throw DomainError("detraz_ratio: 0 < s < 1/2");
  PlanarFn u = [m](Cplx z) { return std::pow(z, m); };
  PlanarFn du = [m](Cplx z) {
    return m == 0 ? Cplx(0) : Cplx(static_cast<double>(m)) * std::pow(z, m - 1);
  };
  double num = weighted_norm(dom, g, du, s - 1.0, NormFlavor::Delta);
  double den = weighted_norm(dom, g, u, s, NormFlavor::Delta);
  if (den == 0) throw DomainError("detraz_ratio: zero denominator");
  return num / den;
}

inline PlanarDomain PlanarDomain::disc() {
  PlanarDomain d;
  d.kind_ = Kind::Disc;
  d.rho_ = disc_defining_field();
  return d;
}

inline PlanarDomain PlanarDomain::square() {
  PlanarDomain d;
  d.kind_ = Kind::Square;
  d.rho_ = square_defining_field();
  return d;
}

}  // namespace hermlab
