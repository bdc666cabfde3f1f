// Model registry tests: Hopf closed forms and scale invariance, the square
// domain's defining function, the product domain, samplers, and registries.

#include <catch2/catch_amalgamated.hpp>

#include "hermlab/df.hpp"
#include "hermlab/models.hpp"

using namespace hermlab;

TEST_CASE("hopf closed forms") {
  SECTION("n=2 at (1,0): Theta = diag(0,2), Q = diag(0,1)") {
    auto cf = hopf_closed_forms(2, make_point({Cplx(1, 0), Cplx(0, 0)}));
    MatC et(2, 2), eq(2, 2);
    et << 0, 0, 0, 2;
    eq << 0, 0, 0, 1;
    REQUIRE((cf.theta.matrix() - et).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((cf.q.matrix() - eq).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("kernel W1 at 50 random points") {
    Rng rng(41);
    auto pts = hopf_annulus_sample(2, 50, rng);
    for (const auto& p : pts) {
      auto cf = hopf_closed_forms(2, p);
      VecC kt = p.coords.transpose() * cf.theta.matrix();
      VecC kq = p.coords.transpose() * cf.q.matrix();
      REQUIRE(kt.cwiseAbs().maxCoeff() < 1e-12);
      REQUIRE(kq.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("n=3: numeric engine matches the closed forms") {
    Rng rng(43);
    auto g = hopf_metric(3);
    auto pts = hopf_annulus_sample(3, 20, rng);
    for (const auto& p : pts) {
      auto cf = hopf_closed_forms(3, p);
      REQUIRE((curvature_trace(g, p).matrix() - cf.theta.matrix())
                  .cwiseAbs()
                  .maxCoeff() < 1e-6);
      REQUIRE((torsion_norm_form(g, p).matrix() - cf.q.matrix())
                  .cwiseAbs()
                  .maxCoeff() < 1e-6);
    }
  }
  SECTION("z = 0 rejected") {
    REQUIRE_THROWS_AS(hopf_closed_forms(2, make_point({Cplx(0), Cplx(0)})),
                      DomainError);
  }
}

TEST_CASE("hopf scale invariance") {
  // Scalars Theta(Z, Zbar) and Q(Z, Z) are invariant under z -> a z with the
  // induced coefficient transport Z -> a Z.
  auto g = hopf_metric(2);
  const double a = 0.5;
  Rng rng(47);
  auto pts = hopf_annulus_sample(2, 50, rng);
  for (const auto& p : pts) {
    VecC zv = rng.unit_vector(2);
    ChartPoint ps = make_point(VecC(a * p.coords));
    double t1 = curvature_trace(g, p).quad(zv);
    double t2 = curvature_trace(g, ps).quad(VecC(a * zv));
    double q1 = torsion_norm_form(g, p).quad(zv);
    double q2 = torsion_norm_form(g, ps).quad(VecC(a * zv));
    REQUIRE(std::abs(t1 - t2) < 1e-10 * std::max(1.0, std::abs(t1)));
    REQUIRE(std::abs(q1 - q2) < 1e-10 * std::max(1.0, std::abs(q1)));
  }
}

TEST_CASE("square defining function") {
  SECTION("point values") {
    REQUIRE(square_defining_value(Cplx(0, 0)) == Catch::Approx(-0.5));
    REQUIRE(square_defining_value(Cplx(1, 0)) == Catch::Approx(0.0));
    REQUIRE(square_defining_value(Cplx(2, 0)) == Catch::Approx(3.0));
    REQUIRE(square_defining_value(Cplx(1, 1)) == Catch::Approx(0.0));  // corner
  }
  SECTION("negative inside, nonnegative outside") {
    for (double x = -0.95; x < 1.0; x += 0.19)
      for (double y = -0.95; y < 1.0; y += 0.19)
        REQUIRE(square_defining_value(Cplx(x, y)) < 0.0);
    REQUIRE(square_defining_value(Cplx(1.2, 0.3)) >= 0.0);
    REQUIRE(square_defining_value(Cplx(0.3, -1.7)) >= 0.0);
  }
  SECTION("continuity across the boundary") {
    // jump across sampled boundary normals at +-eps
    const double eps = 1e-7;
    for (int i = 0; i < 50; ++i) {
      double y = -0.99 + 1.98 * i / 49.0;
      double jump = std::abs(square_defining_value(Cplx(1.0 - eps, y)) -
                             square_defining_value(Cplx(1.0 + eps, y)));
      REQUIRE(jump < 1e-6);
      jump = std::abs(square_defining_value(Cplx(y, -1.0 + eps)) -
                      square_defining_value(Cplx(y, -1.0 - eps)));
      REQUIRE(jump < 1e-6);
    }
  }
  SECTION("Lipschitz difference quotients across the boundary") {
    for (int i = 0; i < 200; ++i) {
      double y = -0.995 + 1.99 * i / 199.0;
      double h = 1e-3;
      double q = std::abs(square_defining_value(Cplx(1.0 + h, y)) -
                          square_defining_value(Cplx(1.0 - h, y))) /
                 (2.0 * h);
      REQUIRE(q <= 10.0);
    }
  }
  SECTION("real Hessian positive definite on a 41x41 interior grid") {
    for (int ix = 0; ix < 41; ++ix)
      for (int iy = 0; iy < 41; ++iy) {
        double x = -0.95 + 1.9 * ix / 40.0;
        double y = -0.95 + 1.9 * iy / 40.0;
        SquareDerivs d = square_defining_derivs(Cplx(x, y));
        double tr = d.rxx + d.ryy;
        double det = d.rxx * d.ryy - d.rxy * d.rxy;
        REQUIRE(tr > 0.0);
        REQUIRE(det > 0.0);
      }
  }
  SECTION("analytic Wirtinger derivatives match finite differences") {
    ScalarField r = square_defining_field();
    ScalarField r_fd = r;
    r_fd.d_analytic = nullptr;
    r_fd.ddbar_analytic = nullptr;
    Rng rng(53);
    for (int i = 0; i < 20; ++i) {
      VecC z(1);
      z[0] = Cplx(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
      REQUIRE(std::abs(r.d(z, 0) - r_fd.d(z, 0)) < 1e-6);
      REQUIRE(std::abs(r.ddbar(z, 0, 0) - r_fd.ddbar(z, 0, 0)) < 1e-5);
    }
  }
  SECTION("interior-branch derivatives rejected outside") {
    REQUIRE_THROWS_AS(square_defining_derivs(Cplx(1.5, 0)), DomainError);
  }
}

TEST_CASE("product domain assembly") {
  SECTION("n=2, eta=0: the form vanishes identically (Hopf block cancels)") {
    DFProblem p = product_domain_assemble(2);
    p.eta = 0.0;
    ChartPoint z = make_point({Cplx(0.1, -0.2), Cplx(0.8, 0.1)});
    MatC f = df_form(p, z).matrix();
    REQUIRE(f.cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("n=3, eta in {0, 1/2, 1}: positive semidefinite at samples") {
    DFProblem p = product_domain_assemble(3);
    Rng rng(59);
    DomainSample s = product_domain_sample(3, 9, 10, rng);
    for (double eta : {0.0, 0.5, 1.0}) {
      p.eta = eta;
      for (const auto& z : s.interior)
        REQUIRE(df_form(p, z).min_eigenvalue() >= -1e-8);
    }
  }
  SECTION("rho depends on z1 only") {
    DFProblem p = product_domain_assemble(2);
    VecC z1(2), z2(2);
    z1 << Cplx(0.3, 0.2), Cplx(0.9, 0.0);
    z2 << Cplx(0.3, 0.2), Cplx(0.1, 0.6);
    REQUIRE(p.rho(z1).real() == Catch::Approx(p.rho(z2).real()));
    REQUIRE(p.rho(z1).real() == Catch::Approx(square_defining_value(Cplx(0.3, 0.2))));
  }
  SECTION("n < 2 rejected") {
    REQUIRE_THROWS_AS(product_domain_assemble(1), DomainError);
  }
}

TEST_CASE("fubini-study curvature is positive definite") {
  auto g = fubini_study_metric(2);
  Rng rng(61);
  auto pts = ball_sample(2, 50, 0.9, rng);
  for (const auto& p : pts)
    REQUIRE(curvature_trace(g, p).min_eigenvalue() > 0.0);
}

TEST_CASE("samplers are deterministic and in-range") {
  SECTION("hopf annulus") {
    Rng r1(71), r2(71);
    auto a = hopf_annulus_sample(2, 30, r1);
    auto b = hopf_annulus_sample(2, 30, r2);
    for (int i = 0; i < 30; ++i) {
      REQUIRE((a[i].coords - b[i].coords).cwiseAbs().maxCoeff() == 0.0);
      double r = a[i].coords.norm();
      REQUIRE(r > 0.5 - 1e-12);
      REQUIRE(r <= 1.0 + 1e-12);
    }
    REQUIRE_THROWS_AS(hopf_annulus_sample(2, 1, r1, 1.5), DomainError);
  }
  SECTION("ball") {
    Rng rng(73);
    auto pts = ball_sample(3, 40, 0.8, rng);
    for (const auto& p : pts) REQUIRE(p.coords.norm() < 0.8);
  }
  SECTION("product domain sample interior") {
    Rng rng(79);
    DomainSample s = product_domain_sample(2, 11, 7, rng);
    REQUIRE(s.interior.size() == 121);
    DFProblem p = product_domain_assemble(2);
    for (const auto& z : s.interior) REQUIRE(p.rho(z.coords).real() < 0.0);
  }
}

TEST_CASE("registries") {
  SECTION("known names resolve") {
    for (const char* name : {"euclidean", "hopf", "fubini-study", "product",
                             "conformal"})
      REQUIRE(make_metric(name, 2).dim == 2);
    for (const char* name : {"zero", "abs2", "re2z1"})
      REQUIRE(make_weight(name, 2).dim == 2);
  }
  SECTION("unknown names rejected") {
    REQUIRE_THROWS_AS(make_metric("lorentz", 2), DomainError);
    REQUIRE_THROWS_AS(make_weight("cube", 2), DomainError);
  }
  SECTION("product metric blocks") {
    auto g = product_metric(euclidean_metric(1), hopf_metric(1));
    VecC z(2);
    z << Cplx(0.2, 0.1), Cplx(0.5, 0.5);
    MatC m = g(z);
    REQUIRE(std::abs(m(0, 0) - Cplx(1.0)) < 1e-14);
    REQUIRE(std::abs(m(1, 1) - Cplx(1.0 / 0.5)) < 1e-14);
    REQUIRE(std::abs(m(0, 1)) == 0.0);
  }
}
