// Curvature-inequality checker tests: kappa derivatives, the assembled form,
// the eta sweep, the margin constant B, and the interpolation identity.

#include <catch2/catch_amalgamated.hpp>

#include "hermlab/df.hpp"
#include "hermlab/models.hpp"

using namespace hermlab;

namespace {

ScalarField ball_rho(int n) {
  ScalarField rho;
  rho.dim = n;
  rho.real_valued = true;
  rho.eval = [](const VecC& z) { return Cplx(z.squaredNorm() - 1.0); };
  rho.d_analytic = [](const VecC& z, int j) { return std::conj(z[j]); };
  rho.ddbar_analytic = [](const VecC&, int j, int k) {
    return Cplx(j == k ? 1.0 : 0.0);
  };
  return rho;
}

DFProblem ball_problem(int n) {
  DFProblem p;
  p.metric = euclidean_metric(n);
  p.psi = constant_field(n, 0.0);
  p.rho = ball_rho(n);
  return p;
}

}  // namespace

TEST_CASE("kappa derivatives") {
  ScalarField rho = ball_rho(2);
  SECTION("eta = 1 reduces to -rho data") {
    ChartPoint z = make_point({Cplx(0.3, 0.2), Cplx(-0.1, 0.4)});
    auto kd = kappa_derivatives(rho, 1.0, z);
    REQUIRE(kd.kappa == Catch::Approx(-rho(z.coords).real()));
    VecC expect_d = -rho.gradient(z.coords);
    REQUIRE((kd.dkappa - expect_d).cwiseAbs().maxCoeff() < 1e-14);
    MatC expect_h = -complex_hessian(rho, z).matrix();
    REQUIRE((kd.ddbar_kappa.matrix() - expect_h).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("unit ball, eta = 1/2 at the origin") {
    ChartPoint z = make_point({Cplx(0, 0), Cplx(0, 0)});
    auto kd = kappa_derivatives(rho, 0.5, z);
    REQUIRE(kd.kappa == Catch::Approx(1.0));
    REQUIRE(kd.dkappa.cwiseAbs().maxCoeff() < 1e-14);
    MatC expect = -0.5 * MatC::Identity(2, 2);
    REQUIRE((kd.ddbar_kappa.matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("matches finite differences of (-rho)^eta") {
    Rng rng(107);
    auto pts = ball_sample(2, 5, 0.7, rng);
    for (double eta : {0.3, 0.7}) {
      for (const auto& z : pts) {
        auto kd = kappa_derivatives(rho, eta, z);
        auto kfun = [&](const VecC& w) {
          return Cplx(std::pow(-(w.squaredNorm() - 1.0), eta));
        };
        for (int j = 0; j < 2; ++j) {
          Cplx fd = fd_wirtinger_d(kfun, z.coords, j, 1e-4);
          REQUIRE(std::abs(kd.dkappa[j] - fd) < 1e-6);
          for (int k = 0; k < 2; ++k) {
            Cplx fd2 = fd_wirtinger_ddbar(kfun, z.coords, j, k, 1e-4);
            REQUIRE(std::abs(kd.ddbar_kappa.matrix()(j, k) - fd2) < 1e-5);
          }
        }
      }
    }
  }
  SECTION("rho >= 0 rejected") {
    REQUIRE_THROWS_AS(
        kappa_derivatives(rho, 0.5, make_point({Cplx(1.2, 0), Cplx(0, 0)})),
        DomainError);
  }
}

TEST_CASE("df_form") {
  SECTION("flat space, eta = 0 gives the zero matrix") {
    DFProblem p = ball_problem(2);
    p.eta = 0.0;
    ChartPoint z = make_point({Cplx(0.3, 0.1), Cplx(0.2, -0.2)});
    REQUIRE(df_form(p, z).matrix().cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("eta = 0 equals Theta + Hess(psi) - Q in general") {
    DFProblem p;
    p.metric = hopf_metric(2);
    p.psi = make_weight("abs2", 2);
    p.rho = ball_rho(2);
    p.eta = 0.0;
    Rng rng(109);
    auto pts = ball_sample(2, 5, 0.9, rng);
    for (auto& z : pts) {
      if (z.coords.norm() < 0.2) continue;
      MatC expect = curvature_trace(p.metric, z).matrix() +
                    complex_hessian(p.psi, z).matrix() -
                    torsion_norm_form(p.metric, z).matrix();
      REQUIRE((df_form(p, z).matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("decomposition through the Psi form") {
    // F = (-rho)^eta Psi_eta + eta(1-eta)(-rho)^{eta-2} drho (x) dbar rho
    DFProblem p = ball_problem(2);
    p.psi = make_weight("abs2", 2);
    Rng rng(113);
    auto pts = ball_sample(2, 10, 0.9, rng);
    for (double eta : {0.25, 0.5, 0.9}) {
      p.eta = eta;
      for (const auto& z : pts) {
        double mr = -p.rho(z.coords).real();
        VecC drho = p.rho.gradient(z.coords);
        MatC rhs = std::pow(mr, eta) *
                       psi_form(p.metric, p.psi, p.rho, eta, z).matrix() +
                   eta * (1.0 - eta) * std::pow(mr, eta - 2.0) *
                       (drho * drho.adjoint());
        REQUIRE((df_form(p, z).matrix() - rhs).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  SECTION("hopf specialization matches the closed forms") {
    // With psi = 0: F = (n-1) (-rho)^eta Q_closed - ddbar kappa
    DFProblem p;
    int n = 2;
    p.metric = hopf_metric(n);
    p.psi = constant_field(n, 0.0);
    p.rho = ball_rho(n);
    p.eta = 0.6;
    Rng rng(127);
    auto pts = hopf_annulus_sample(n, 10, rng);
    for (auto& z : pts) {
      if (p.rho(z.coords).real() >= -1e-3) continue;
      auto cf = hopf_closed_forms(n, z);
      auto kd = kappa_derivatives(p.rho, p.eta, z);
      double w = std::pow(-p.rho(z.coords).real(), p.eta);
      MatC expect =
          (n - 1.0) * w * cf.q.matrix() - kd.ddbar_kappa.matrix();
      REQUIRE((df_form(p, z).matrix() - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("df_sweep") {
  Rng rng(131);
  SECTION("euclidean unit ball passes on the whole grid") {
    DFProblem p = ball_problem(2);
    DomainSample s;
    s.interior = ball_sample(2, 50, 0.95, rng);
    DFReport rep = df_sweep(p, s, {0.0, 0.25, 0.5, 0.75, 1.0});
    for (const auto& r : rep.records) REQUIRE(r.pass);
    REQUIRE(rep.best_passing_eta);
    REQUIRE(*rep.best_passing_eta == Catch::Approx(1.0));
  }
  SECTION("product domain passes (n=2)") {
    DFProblem p = product_domain_assemble(2);
    DomainSample s = product_domain_sample(2, 11, 10, rng);
    DFReport rep = df_sweep(p, s, {0.0, 0.25, 0.5, 0.75, 1.0});
    for (const auto& r : rep.records) {
      REQUIRE(r.pass);
      REQUIRE(r.min_eigenvalue >= -1e-8);
    }
  }
  SECTION("constructed counterexample fails at eta = 1") {
    // n=1, rho = -1/2 + (x^2 - 3 y^2)/4: the complex Hessian of rho is
    // (rho_xx + rho_yy)/4 = -1/4 < 0, so F = Hess(rho) < 0 at eta = 1.
    DFProblem p;
    p.metric = euclidean_metric(1);
    p.psi = constant_field(1, 0.0);
    ScalarField rho;
    rho.dim = 1;
    rho.real_valued = true;
    rho.eval = [](const VecC& z) {
      double x = z[0].real(), y = z[0].imag();
      return Cplx(-0.5 + 0.25 * (x * x - 3.0 * y * y));
    };
    p.rho = std::move(rho);
    DomainSample s;
    s.interior.push_back(make_point({Cplx(0.0, 0.0)}));
    s.interior.push_back(make_point({Cplx(0.1, 0.1)}));
    DFReport rep = df_sweep(p, s, {0.0, 1.0}, kPsdTolFd);
    REQUIRE(rep.records[0].pass);   // eta = 0: F = 0 in flat space
    REQUIRE(!rep.records[1].pass);  // eta = 1: min eigenvalue ~ -1/4
    REQUIRE(rep.records[1].min_eigenvalue < -0.2);
  }
  SECTION("empty sample rejected") {
    DFProblem p = ball_problem(2);
    DomainSample s;
    REQUIRE_THROWS_AS(df_sweep(p, s, {0.0}), DomainError);
  }
}

TEST_CASE("b_margin") {
  SECTION("disc closed form: B = (-rho)/(eta |z|^2) + (1 - eta)/eta") {
    DFProblem p = ball_problem(1);
    for (double eta : {0.4, 0.5, 0.8}) {
      p.eta = eta;
      for (double r : {0.3, 0.6, 0.9}) {
        ChartPoint z = make_point({Cplx(r, 0.0)});
        double mr = 1.0 - r * r;
        double expect = mr / (eta * r * r) + (1.0 - eta) / eta;
        REQUIRE(b_margin_at(p, z, kPsdTolAnalytic) ==
                Catch::Approx(expect).epsilon(1e-8));
      }
    }
  }
  SECTION("square domain at eta = 1/2 has B >= 1") {
    DFProblem p;
    p.metric = euclidean_metric(1);
    p.psi = constant_field(1, 0.0);
    p.rho = square_defining_field();
    p.eta = 0.5;
    DomainSample s;
    for (int ix = 0; ix < 15; ++ix)
      for (int iy = 0; iy < 15; ++iy) {
        double x = -0.93 + 1.86 * ix / 14.0;
        double y = -0.93 + 1.86 * iy / 14.0;
        s.interior.push_back(make_point({Cplx(x, y)}));
      }
    double b = b_margin(p, s);
    REQUIRE(b >= 1.0);
  }
  SECTION("gradient-free points impose no constraint") {
    DFProblem p = ball_problem(2);
    p.eta = 0.5;
    double b = b_margin_at(p, make_point({Cplx(0, 0), Cplx(0, 0)}),
                           kPsdTolAnalytic);
    REQUIRE(std::isinf(b));
  }
  SECTION("unitary frame invariance") {
    DFProblem p = ball_problem(2);
    p.psi = make_weight("abs2", 2);
    p.eta = 0.5;
    // rotate coordinates by a unitary U; euclidean metric and |z|^2 data are
    // invariant, so b_margin_at must agree at matched points.
    Cplx c = std::polar(1.0, 0.7), s = std::polar(1.0, -0.4);
    MatC u(2, 2);
    double th = 0.6;
    u << std::cos(th) * c, -std::sin(th) * s, std::sin(th) * std::conj(s),
        std::cos(th) * std::conj(c);
    REQUIRE((u.adjoint() * u - MatC::Identity(2, 2)).cwiseAbs().maxCoeff() <
            1e-14);
    Rng rng(137);
    auto pts = ball_sample(2, 10, 0.9, rng);
    for (const auto& z : pts) {
      double b1 = b_margin_at(p, z, kPsdTolAnalytic);
      double b2 = b_margin_at(p, make_point(VecC(u * z.coords)),
                              kPsdTolAnalytic);
      REQUIRE(std::abs(b1 - b2) <= 1e-8 * std::max(1.0, std::abs(b1)));
    }
  }
  SECTION("adding a strictly plurisubharmonic weight increases B") {
    DFProblem flat = ball_problem(1);
    flat.eta = 0.5;
    DFProblem weighted = flat;
    weighted.psi = make_weight("abs2", 1);
    for (double r : {0.4, 0.7}) {
      ChartPoint z = make_point({Cplx(r, 0.1)});
      double b0 = b_margin_at(flat, z, kPsdTolAnalytic);
      double b1 = b_margin_at(weighted, z, kPsdTolAnalytic);
      REQUIRE(b1 > b0);
    }
  }
}

TEST_CASE("psi interpolation identity") {
  auto g = hopf_metric(2);
  ScalarField psi = make_weight("abs2", 2);
  ScalarField rho = ball_rho(2);
  Rng rng(139);
  SECTION("exact affine identity at a=0, b=1, s=0.25") {
    auto pts = hopf_annulus_sample(2, 20, rng);
    for (const auto& z : pts) {
      if (rho(z.coords).real() >= -1e-6) continue;
      auto [lhs, rhs] = psi_interpolation_check(g, psi, rho, 0.0, 1.0, 0.25, z);
      double scale = std::max(1.0, lhs.matrix().cwiseAbs().maxCoeff());
      REQUIRE((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff() <
              1e-12 * scale);
    }
  }
  SECTION("random endpoints") {
    auto pts = hopf_annulus_sample(2, 20, rng);
    for (const auto& z : pts) {
      if (rho(z.coords).real() >= -1e-6) continue;
      double a = rng.uniform(0.0, 0.4), b = rng.uniform(0.6, 1.0);
      double s = 0.5 * rng.uniform(a + 1e-3, b - 1e-3);
      auto [lhs, rhs] = psi_interpolation_check(g, psi, rho, a, b, s, z);
      double scale = std::max(1.0, lhs.matrix().cwiseAbs().maxCoeff());
      REQUIRE((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff() <
              1e-12 * scale);
    }
  }
  SECTION("endpoint limit reproduces Psi_a") {
    ChartPoint z = make_point({Cplx(0.6, 0.1), Cplx(0.2, 0.3)});
    double a = 0.2, b = 0.9;
    auto [lhs, rhs] = psi_interpolation_check(g, psi, rho, a, b, a / 2.0, z);
    MatC pa = psi_form(g, psi, rho, a, z).matrix();
    REQUIRE((lhs.matrix() - pa).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((rhs.matrix() - pa).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("a = b rejected") {
    ChartPoint z = make_point({Cplx(0.6, 0.1), Cplx(0.2, 0.3)});
    REQUIRE_THROWS_AS(psi_interpolation_check(g, psi, rho, 0.5, 0.5, 0.25, z),
                      DomainError);
  }
}
