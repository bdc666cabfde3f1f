#pragma once

#include <memory>

#include "hermlab/df.hpp"

namespace hermlab {

// ---------------------------------------------------------------------------
// Metric registry: euclidean, hopf, fubini-study, conformal, product.
// All registry metrics carry analytic first and mixed-second derivatives.
// ---------------------------------------------------------------------------

inline MetricField euclidean_metric(int n) {
  if (n < 1) throw DomainError("euclidean_metric: n >= 1");
  MetricField g;
  g.dim = n;
  g.eval = [n](const VecC&) { return MatC::Identity(n, n).eval(); };
  g.d_analytic = [n](const VecC&, int) { return MatC::Zero(n, n).eval(); };
  g.ddbar_analytic = [n](const VecC&, int, int) { return MatC::Zero(n, n).eval(); };
  return g;
}

/// Scale-invariant metric g = |z|^{-2} I on C^n \ {0}; descends to the Hopf
/// quotient z ~ a z. Computation stays on the covering chart.
inline MetricField hopf_metric(int n) {
  if (n < 1) throw DomainError("hopf_metric: n >= 1");
  MetricField g;
  g.dim = n;
  g.eval = [n](const VecC& z) {
    double s = z.squaredNorm();
    if (s < 1e-24) throw DomainError("hopf_metric: z = 0 excluded");
    return (MatC::Identity(n, n) / s).eval();
  };
  g.d_analytic = [n](const VecC& z, int a) {
    double s = z.squaredNorm();
    return (-std::conj(z[a]) / (s * s) * MatC::Identity(n, n)).eval();
  };
  g.ddbar_analytic = [n](const VecC& z, int a, int b) {
    double s = z.squaredNorm();
    Cplx c = (a == b ? Cplx(-1.0 / (s * s)) : Cplx(0)) +
             2.0 * std::conj(z[a]) * z[b] / (s * s * s);
    return (c * MatC::Identity(n, n)).eval();
  };
  return g;
}

/// Affine-chart Fubini-Study metric, g_{j kbar} = d_j dbar_k log(1 + |z|^2).
inline MetricField fubini_study_metric(int n) {
  if (n < 1) throw DomainError("fubini_study_metric: n >= 1");
  MetricField g;
  g.dim = n;
  g.eval = [n](const VecC& z) {
    double s = 1.0 + z.squaredNorm();
    MatC m = MatC::Identity(n, n) / s;
    m -= (z.conjugate() * z.transpose()) / (s * s);
    return m;
  };
  g.d_analytic = [n](const VecC& z, int a) {
    double s = 1.0 + z.squaredNorm();
    MatC m = MatC::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Cplx v = 0;
        if (j == k) v -= std::conj(z[a]) / (s * s);
        if (a == k) v -= std::conj(z[j]) / (s * s);
        v += 2.0 * std::conj(z[j]) * z[k] * std::conj(z[a]) / (s * s * s);
        m(j, k) = v;
      }
    return m;
  };
  g.ddbar_analytic = [n](const VecC& z, int a, int b) {
    double s = 1.0 + z.squaredNorm();
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    MatC m = MatC::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Cplx v = 0;
        if (j == k && a == b) v -= 1.0 / s2;
        if (a == k && j == b) v -= 1.0 / s2;
        if (j == k) v += 2.0 * std::conj(z[a]) * z[b] / s3;
        if (a == k) v += 2.0 * std::conj(z[j]) * z[b] / s3;
        if (j == b) v += 2.0 * z[k] * std::conj(z[a]) / s3;
        if (a == b) v += 2.0 * std::conj(z[j]) * z[k] / s3;
        v -= 6.0 * std::conj(z[j]) * z[k] * std::conj(z[a]) * z[b] / s4;
        m(j, k) = v;
      }
    return m;
  };
  return g;
}

/// g = e^{phi} I for a real-valued phi with derivative access.
inline MetricField conformal_metric(int n, ScalarField phi) {
  if (phi.dim != n) throw DomainError("conformal_metric: dimension mismatch");
  if (!phi.real_valued) throw DomainError("conformal_metric: phi must be real");
  MetricField g;
  g.dim = n;
  auto p = std::make_shared<ScalarField>(std::move(phi));
  g.eval = [n, p](const VecC& z) {
    double e = std::exp((*p)(z).real());
    return (e * MatC::Identity(n, n)).eval();
  };
  g.d_analytic = [n, p](const VecC& z, int a) {
    Cplx e = std::exp((*p)(z).real());
    return (e * p->d(z, a) * MatC::Identity(n, n)).eval();
  };
  g.ddbar_analytic = [n, p](const VecC& z, int a, int b) {
    Cplx e = std::exp((*p)(z).real());
    Cplx c = e * (p->ddbar(z, a, b) + p->d(z, a) * p->dbar(z, b));
    return (c * MatC::Identity(n, n)).eval();
  };
  return g;
}

/// Block-diagonal product metric on split coordinates (first n1, last n2).
inline MetricField product_metric(MetricField g1, MetricField g2) {
  MetricField g;
  const int n1 = g1.dim, n2 = g2.dim, n = n1 + n2;
  g.dim = n;
  auto p1 = std::make_shared<MetricField>(std::move(g1));
  auto p2 = std::make_shared<MetricField>(std::move(g2));
  auto split = [n1, n2](const VecC& z) {
    return std::pair<VecC, VecC>(z.head(n1), z.tail(n2));
  };
  g.eval = [=](const VecC& z) {
    auto [z1, z2] = split(z);
    MatC m = MatC::Zero(n, n);
    m.topLeftCorner(n1, n1) = (*p1)(z1);
    m.bottomRightCorner(n2, n2) = (*p2)(z2);
    return m;
  };
  g.d_analytic = [=](const VecC& z, int a) {
    auto [z1, z2] = split(z);
    MatC m = MatC::Zero(n, n);
    if (a < n1)
      m.topLeftCorner(n1, n1) = p1->d(z1, a);
    else
      m.bottomRightCorner(n2, n2) = p2->d(z2, a - n1);
    return m;
  };
  g.ddbar_analytic = [=](const VecC& z, int a, int b) {
    auto [z1, z2] = split(z);
    MatC m = MatC::Zero(n, n);
    if (a < n1 && b < n1)
      m.topLeftCorner(n1, n1) = p1->ddbar(z1, a, b);
    else if (a >= n1 && b >= n1)
      m.bottomRightCorner(n2, n2) = p2->ddbar(z2, a - n1, b - n1);
    return m;
  };
  return g;
}

// ---------------------------------------------------------------------------
// Hopf closed forms. In the Hopf metric |Z|^2 and <Z, W_1> are metric inner
// products, W_1 = sum z_j d/dz_j. In the storage convention the matrices are
//   Theta = n/s I - n/s^2 conj(z) z^T,   Q = Theta / n,   s = |z|^2.
// Both annihilate W_1 and have the stated eigenvalue profiles.
// ---------------------------------------------------------------------------

struct HopfClosedForms {
  HermitianForm theta;
  HermitianForm q;
};

inline HopfClosedForms hopf_closed_forms(int n, const ChartPoint& z) {
  if (z.dim() != n) throw DomainError("hopf_closed_forms: dimension mismatch");
  double s = z.coords.squaredNorm();
  if (s < 1e-24) throw DomainError("hopf_closed_forms: z = 0 excluded");
  MatC base = MatC::Identity(n, n) / s -
              (z.coords.conjugate() * z.coords.transpose()) / (s * s);
  return HopfClosedForms{HermitianForm((static_cast<double>(n) * base).eval()),
                         HermitianForm(base)};
}

// ---------------------------------------------------------------------------
// Square domain D = {|Re z| < 1, |Im z| < 1} with the two-case Lipschitz
// defining function
//   r = ((Im z)^2 - 1)((Re z)^2 - 1) / (|z|^2 - 2)   inside,
//   r = max{(Im z)^2 - 1, (Re z)^2 - 1}              outside (and on bdry).
// ---------------------------------------------------------------------------

inline bool square_contains(Cplx z) {
  return std::abs(z.real()) < 1.0 && std::abs(z.imag()) < 1.0;
}

inline double square_defining_value(Cplx z) {
  double x = z.real(), y = z.imag();
  if (square_contains(z)) {
    return ((y * y - 1.0) * (x * x - 1.0)) / (x * x + y * y - 2.0);
  }
  return std::max(y * y - 1.0, x * x - 1.0);
}

/// Real second-order data of r at an interior point of D.
struct SquareDerivs {
  double r, rx, ry, rxx, ryy, rxy;
};

inline SquareDerivs square_defining_derivs(Cplx z) {
  double x = z.real(), y = z.imag();
  if (!square_contains(z))
    throw DomainError("square_defining_derivs: interior branch only");
  double p = (y * y - 1.0) * (x * x - 1.0);
  double q = x * x + y * y - 2.0;  // < 0 on D
  double px = 2.0 * x * (y * y - 1.0), py = 2.0 * y * (x * x - 1.0);
  double pxx = 2.0 * (y * y - 1.0), pyy = 2.0 * (x * x - 1.0), pxy = 4.0 * x * y;
  double qx = 2.0 * x, qy = 2.0 * y;
  double q2 = q * q, q3 = q2 * q;
  SquareDerivs d;
  d.r = p / q;
  d.rx = px / q - p * qx / q2;
  d.ry = py / q - p * qy / q2;
  d.rxx = pxx / q - 2.0 * px * qx / q2 - p * 2.0 / q2 + 2.0 * p * qx * qx / q3;
  d.ryy = pyy / q - 2.0 * py * qy / q2 - p * 2.0 / q2 + 2.0 * p * qy * qy / q3;
  d.rxy = pxy / q - (px * qy + py * qx) / q2 + 2.0 * p * qx * qy / q3;
  return d;
}

/// r as a 1-dimensional ScalarField with analytic Wirtinger derivatives on D.
inline ScalarField square_defining_field() {
  ScalarField f;
  f.dim = 1;
  f.real_valued = true;
  f.eval = [](const VecC& z) { return Cplx(square_defining_value(z[0])); };
  f.d_analytic = [](const VecC& z, int) {
    if (!square_contains(z[0])) {
      double x = z[0].real(), y = z[0].imag();
      // outside branch is smooth away from the diagonal |x| = |y|
      if (x * x >= y * y) return Cplx(x, 0);
      return Cplx(0, -y);
    }
    SquareDerivs d = square_defining_derivs(z[0]);
    return 0.5 * Cplx(d.rx, -d.ry);
  };
  f.ddbar_analytic = [](const VecC& z, int, int) {
    if (!square_contains(z[0])) return Cplx(0.5);
    SquareDerivs d = square_defining_derivs(z[0]);
    return Cplx(0.25 * (d.rxx + d.ryy));
  };
  return f;
}

/// Exact Euclidean boundary distance of the square (interior points).
inline double square_boundary_distance(Cplx z) {
  return std::min(1.0 - std::abs(z.real()), 1.0 - std::abs(z.imag()));
}

// ---------------------------------------------------------------------------
// Product domain Omega = D x H^{n-1}: coordinates (z_1, z_2..z_n), metric
// blockdiag(1, hopf(n-1)), psi = 0, rho(z) = r(z_1).
// ---------------------------------------------------------------------------

inline DFProblem product_domain_assemble(int n) {
  if (n < 2) throw DomainError("product_domain_assemble: n >= 2");
  DFProblem p;
  p.metric = product_metric(euclidean_metric(1), hopf_metric(n - 1));
  p.psi = constant_field(n, 0.0);
  ScalarField r = square_defining_field();
  auto rp = std::make_shared<ScalarField>(std::move(r));
  ScalarField rho;
  rho.dim = n;
  rho.real_valued = true;
  rho.eval = [rp](const VecC& z) { return (*rp)(z.head(1)); };
  rho.d_analytic = [rp](const VecC& z, int j) {
    return j == 0 ? rp->d(z.head(1), 0) : Cplx(0);
  };
  rho.ddbar_analytic = [rp](const VecC& z, int j, int k) {
    return (j == 0 && k == 0) ? rp->ddbar(z.head(1), 0, 0) : Cplx(0);
  };
  p.rho = std::move(rho);
  return p;
}

// ---------------------------------------------------------------------------
// Samplers (deterministic given the Rng seed).
// ---------------------------------------------------------------------------

/// Fundamental-annulus Hopf points: |z| uniform in log scale on (a, 1],
/// direction uniform on the unit sphere of C^n.
inline std::vector<ChartPoint> hopf_annulus_sample(int n, int count, Rng& rng,
                                                   double a_hopf = 0.5) {
  if (a_hopf <= 0 || a_hopf >= 1) throw DomainError("hopf modulus must be in (0,1)");
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    double lr = rng.uniform(std::log(a_hopf), 0.0);
    VecC v = std::exp(lr) * rng.unit_vector(n);
    pts.push_back(make_point(std::move(v), "hopf"));
  }
  return pts;
}

/// Uniform in the ball |z| < radius via box rejection.
inline std::vector<ChartPoint> ball_sample(int n, int count, double radius, Rng& rng) {
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    VecC v(n);
    for (int j = 0; j < n; ++j) v[j] = rng.complex_in_box(-radius, radius, -radius, radius);
    if (v.norm() < radius) pts.push_back(make_point(std::move(v), "ball"));
  }
  return pts;
}

/// Interior square grid x Hopf annulus points for the product domain.
inline DomainSample product_domain_sample(int n, int grid_per_axis, int hopf_count,
                                          Rng& rng, double interior_margin = 0.05) {
  DomainSample s;
  std::vector<ChartPoint> hopf = hopf_annulus_sample(n - 1, hopf_count, rng);
  double lo = -1.0 + interior_margin, hi = 1.0 - interior_margin;
  for (int ix = 0; ix < grid_per_axis; ++ix)
    for (int iy = 0; iy < grid_per_axis; ++iy) {
      double x = lo + (hi - lo) * ix / (grid_per_axis - 1.0);
      double y = lo + (hi - lo) * iy / (grid_per_axis - 1.0);
      const ChartPoint& h = hopf[(ix * grid_per_axis + iy) % hopf.size()];
      VecC v(n);
      v[0] = Cplx(x, y);
      v.tail(n - 1) = h.coords;
      s.interior.push_back(make_point(std::move(v), "product"));
    }
  return s;
}

// ---------------------------------------------------------------------------
// Name-based registry for configs.
// ---------------------------------------------------------------------------

inline MetricField make_metric(const std::string& name, int n) {
  if (name == "euclidean") return euclidean_metric(n);
  if (name == "hopf") return hopf_metric(n);
  if (name == "fubini-study") return fubini_study_metric(n);
  if (name == "product") {
    if (n < 2) throw DomainError("product metric needs n >= 2");
    return product_metric(euclidean_metric(1), hopf_metric(n - 1));
  }
  if (name == "conformal") {
    ScalarField phi;
    phi.dim = n;
    phi.real_valued = true;
    phi.eval = [](const VecC& z) { return Cplx(z[0].real()); };
    phi.d_analytic = [](const VecC&, int j) { return j == 0 ? Cplx(0.5) : Cplx(0); };
    phi.ddbar_analytic = [](const VecC&, int, int) { return Cplx(0); };
    return conformal_metric(n, std::move(phi));
  }
  throw DomainError("unknown metric registry entry: " + name);
}

/// Registry weights psi by name: zero, abs2 (|z|^2), re2z1 (2 Re z_1).
inline ScalarField make_weight(const std::string& name, int n) {
  if (name == "zero") return constant_field(n, 0.0);
  if (name == "abs2") {
    ScalarField f;
    f.dim = n;
    f.real_valued = true;
    f.eval = [](const VecC& z) { return Cplx(z.squaredNorm()); };
    f.d_analytic = [](const VecC& z, int j) { return std::conj(z[j]); };
    f.ddbar_analytic = [](const VecC&, int j, int k) { return Cplx(j == k ? 1.0 : 0.0); };
    return f;
  }
  if (name == "re2z1") {
    ScalarField f;
    f.dim = n;
    f.real_valued = true;
    f.eval = [](const VecC& z) { return Cplx(2.0 * z[0].real()); };
    f.d_analytic = [](const VecC&, int j) { return j == 0 ? Cplx(1.0) : Cplx(0); };
    f.ddbar_analytic = [](const VecC&, int, int) { return Cplx(0); };
    return f;
  }
  throw DomainError("unknown weight registry entry: " + name);
}

}  // namespace hermlab
