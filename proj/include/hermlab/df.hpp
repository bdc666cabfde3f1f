#pragma once

#include <algorithm>
#include <limits>
#include <optional>

#include "hermlab/geometry.hpp"

namespace hermlab {

/// Data for the curvature inequality
///   ((-rho)^eta (Theta_M + ddbar psi) - ddbar (-rho)^eta)(Z, Zbar)
///     >= (-rho)^eta |tau_nabla Z^flat|^2.
struct DFProblem {
  MetricField metric;
  ScalarField psi;
  ScalarField rho;  // defining function, < 0 inside
  double eta = 0.0;
};

struct DomainSample {
  std::vector<ChartPoint> interior;
  std::vector<ChartPoint> near_boundary;  // informational shell
};

struct DFEtaRecord {
  double eta = 0.0;
  double min_eigenvalue = 0.0;
  ChartPoint worst_point;
  bool pass = false;
  std::optional<double> b_estimate;
  double shell_min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

struct DFReport {
  std::vector<DFEtaRecord> records;
  std::optional<double> best_passing_eta;
  double psd_tol = 0.0;
};

constexpr double kPsdTolAnalytic = 1e-8;
constexpr double kPsdTolFd = 1e-5;

struct KappaDerivatives {
  double kappa = 0.0;
  VecC dkappa;                 // covector, entries d_{z_j} kappa
  HermitianForm ddbar_kappa;
};

/// kappa = (-rho)^eta with
///   d kappa      = -eta (-rho)^{eta-1} d rho
///   ddbar kappa  = -eta (-rho)^{eta-1} ddbar rho
///                  - eta (1-eta) (-rho)^{eta-2} drho (x) dbar rho.
inline KappaDerivatives kappa_derivatives(const ScalarField& rho, double eta,
                                          const ChartPoint& z) {
  const int n = rho.dim;
  double r = rho(z.coords).real();
  if (r >= 0) throw DomainError("kappa_derivatives: rho must be negative at z");
  KappaDerivatives out;
  double mr = -r;
  out.kappa = std::pow(mr, eta);
  VecC drho = rho.gradient(z.coords);
  out.dkappa = -eta * std::pow(mr, eta - 1.0) * drho;
  HermitianForm hrho = complex_hessian(rho, z);
  // rank-one matrix for |d rho(Z)|^2 in the HermitianForm storage convention
  MatC r1 = drho * drho.adjoint();
  MatC m = -eta * std::pow(mr, eta - 1.0) * hrho.matrix() -
           eta * (1.0 - eta) * std::pow(mr, eta - 2.0) * r1;
  out.ddbar_kappa = HermitianForm(m);
  if (!is_finite(out.dkappa) || !is_finite(m))
    throw NumericalError("kappa_derivatives: non-finite result");
  return out;
}

/// Pointwise matrix of inequality (1.2):
///   F = (-rho)^eta (Theta_M + ddbar psi) - ddbar kappa - (-rho)^eta Q_torsion.
/// F positive semidefinite at z is equivalent to the inequality at z.
inline HermitianForm df_form(const DFProblem& p, const ChartPoint& z) {
  double r = p.rho(z.coords).real();
  if (r >= 0) throw DomainError("df_form: rho must be negative at z");
  double w = std::pow(-r, p.eta);
  HermitianForm theta = curvature_trace(p.metric, z);
  HermitianForm hpsi = complex_hessian(p.psi, z);
  HermitianForm q = torsion_norm_form(p.metric, z);
  KappaDerivatives kd = kappa_derivatives(p.rho, p.eta, z);
  return HermitianForm(w * (theta.matrix() + hpsi.matrix() - q.matrix()) -
                       kd.ddbar_kappa.matrix());
}

/// Rank-one rescaled Rayleigh bound: largest B >= 0 with
///   F >= B eta^2 (-rho)^{eta-2} drho (x) dbar rho  at z.
/// Returns +inf when d rho = 0 (no constraint there).
inline double b_margin_at(const DFProblem& p, const ChartPoint& z, double psd_tol) {
  HermitianForm f = df_form(p, z).symmetrized();
  double r = p.rho(z.coords).real();
  VecC drho = p.rho.gradient(z.coords);
  double gradnorm2 = drho.squaredNorm();
  if (gradnorm2 < 1e-24) return std::numeric_limits<double>::infinity();
  double scale = p.eta * p.eta * std::pow(-r, p.eta - 2.0);
  // minimize quad_F(Z)/|drho(Z)|^2: with zeta = conj(Z) this is the
  // generalized Rayleigh quotient zeta^H F zeta / |a^H zeta|^2, a = drho.
  Eigen::SelfAdjointEigenSolver<MatC> es(f.matrix());
  if (es.eigenvalues().minCoeff() < -psd_tol)
    throw NumericalError("b_margin: df_form is not PSD at a sample point");
  VecC c = es.eigenvectors().adjoint() * drho;
  double denom = 0.0;
  double lam_max = std::max(es.eigenvalues().maxCoeff(), 1.0);
  for (int i = 0; i < f.dim(); ++i) {
    double lam = es.eigenvalues()[i];
    double w2 = std::norm(c[i]);
    if (lam <= psd_tol * lam_max) {
      if (w2 > 1e-18 * gradnorm2) return 0.0;  // kernel sees the gradient
    } else {
      denom += w2 / lam;
    }
  }
  if (denom <= 0) return std::numeric_limits<double>::infinity();
  return 1.0 / (denom * scale);
}

inline double b_margin(const DFProblem& p, const DomainSample& sample,
                       double psd_tol = kPsdTolAnalytic) {
  if (sample.interior.empty()) throw DomainError("b_margin: empty sample");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : sample.interior) best = std::min(best, b_margin_at(p, z, psd_tol));
  return best;
}

inline DFReport df_sweep(const DFProblem& base, const DomainSample& sample,
                         const std::vector<double>& eta_grid,
                         double psd_tol = kPsdTolAnalytic,
                         bool with_b_estimate = true) {
  if (sample.interior.empty()) throw DomainError("df_sweep: empty sample");
  DFReport rep;
  rep.psd_tol = psd_tol;
  for (double eta : eta_grid) {
    DFProblem p = base;
    p.eta = eta;
    DFEtaRecord rec;
    rec.eta = eta;
    rec.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& z : sample.interior) {
      double me = df_form(p, z).min_eigenvalue();
      if (me < rec.min_eigenvalue) {
        rec.min_eigenvalue = me;
        rec.worst_point = z;
      }
    }
    rec.pass = rec.min_eigenvalue >= -psd_tol;
    if (!sample.near_boundary.empty()) {
      double sme = std::numeric_limits<double>::infinity();
      for (const auto& z : sample.near_boundary)
        sme = std::min(sme, df_form(p, z).min_eigenvalue());
      rec.shell_min_eigenvalue = sme;  // informational, non-gating
    }
    if (rec.pass && with_b_estimate && eta > 0) {
      try {
        rec.b_estimate = b_margin(p, sample, psd_tol);
      } catch (const NumericalError&) {
        rec.b_estimate = std::nullopt;
      }
    }
    rep.records.push_back(std::move(rec));
  }
  for (const auto& rec : rep.records)
    if (rec.pass) {
      if (!rep.best_passing_eta || rec.eta > *rep.best_passing_eta)
        rep.best_passing_eta = rec.eta;
    }
  return rep;
}

/// Psi_{psi,rho,eta} = Theta_M + ddbar psi + eta (-rho)^{-1} ddbar rho - Q_tau.
inline HermitianForm psi_form(const MetricField& g, const ScalarField& psi,
                              const ScalarField& rho, double eta, const ChartPoint& z) {
  double r = rho(z.coords).real();
  if (r >= 0) throw DomainError("psi_form: rho must be negative at z");
  HermitianForm theta = curvature_trace(g, z);
  HermitianForm hpsi = complex_hessian(psi, z);
  HermitianForm hrho = complex_hessian(rho, z);
  HermitianForm q = torsion_norm_form(g, z);
  return HermitianForm(theta.matrix() + hpsi.matrix() +
                       (eta / (-r)) * hrho.matrix() - q.matrix());
}

/// Exact affine-interpolation identity in eta:
///   Psi_{2s} = (b-2s)/(b-a) Psi_a + (2s-a)/(b-a) Psi_b.
inline std::pair<HermitianForm, HermitianForm> psi_interpolation_check(
    const MetricField& g, const ScalarField& psi, const ScalarField& rho,
    double a, double b, double s, const ChartPoint& z) {
  if (a == b) throw DomainError("psi_interpolation_check: requires a != b");
  HermitianForm lhs = psi_form(g, psi, rho, 2.0 * s, z);
  HermitianForm pa = psi_form(g, psi, rho, a, z);
  HermitianForm pb = psi_form(g, psi, rho, b, z);
  HermitianForm rhs(((b - 2.0 * s) / (b - a)) * pa.matrix() +
                    ((2.0 * s - a) / (b - a)) * pb.matrix());
  return {lhs, rhs};
}

}  // namespace hermlab
