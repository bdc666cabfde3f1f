// Planar laboratory tests: exact boundary-cell areas, weighted norms, the
// monomial projector, the Cauchy-transform dbar solver, the twisted solution
// operator, operator bounds, and the derivative-ratio sweep.

#include <catch2/catch_amalgamated.hpp>

#include "hermlab/planar.hpp"

using namespace hermlab;

TEST_CASE("grids and cell areas") {
  SECTION("disc grid total area is pi") {
    PlanarDomain disc = PlanarDomain::disc();
    for (int res : {32, 64, 127}) {
      PlanarGrid g = disc.grid(res);
      REQUIRE(std::abs(g.total_area() - M_PI) < 1e-12);
    }
  }
  SECTION("square grid total area is 4") {
    PlanarDomain sq = PlanarDomain::square();
    PlanarGrid g = sq.grid(64);
    REQUIRE(g.total_area() == Catch::Approx(4.0));
    REQUIRE(g.nodes.size() == 64 * 64);
  }
  SECTION("disc_cell_area limits") {
    REQUIRE(disc_cell_area(-0.1, 0.1, -0.1, 0.1, 1.0) ==
            Catch::Approx(0.04));                              // fully inside
    REQUIRE(disc_cell_area(1.1, 1.3, 0.0, 0.2, 1.0) == 0.0);   // fully outside
    REQUIRE(disc_cell_area(-2, 2, -2, 2, 1.0) == Catch::Approx(M_PI));
  }
  SECTION("all grid nodes are interior") {
    PlanarDomain disc = PlanarDomain::disc();
    PlanarGrid g = disc.grid(48);
    for (Cplx z : g.nodes) REQUIRE(disc.contains(z));
  }
  SECTION("rho and distance are comparable") {
    auto [c1d, c2d] = PlanarDomain::disc().rho_delta_comparability();
    REQUIRE(c1d >= 1.0 - 1e-9);
    REQUIRE(c2d <= 2.0 + 1e-9);
    auto [c1s, c2s] = PlanarDomain::square().rho_delta_comparability();
    REQUIRE(c1s > 0.0);
    REQUIRE(c2s < 10.0);
  }
}

TEST_CASE("weighted norms") {
  PlanarDomain disc = PlanarDomain::disc();
  PlanarGrid g = disc.grid(256);
  SECTION("area norm of the constant") {
    double n0 = weighted_norm(disc, g, [](Cplx) { return Cplx(1.0); }, 0.0);
    REQUIRE(std::abs(n0 - std::sqrt(M_PI)) < 1e-3);
  }
  SECTION("singular weight: s = 1/4 norm of the constant is sqrt(2 pi)") {
    // exact radial integral of (1 - |z|^2)^{-1/2} over the disc is 2 pi; the
    // integrand is boundary-singular, so allow ~3% quadrature error
    double n = weighted_norm(disc, g, [](Cplx) { return Cplx(1.0); }, 0.25);
    REQUIRE(std::abs(n - std::sqrt(2.0 * M_PI)) / std::sqrt(2.0 * M_PI) < 0.03);
  }
  SECTION("monotone in s") {
    auto u = [](Cplx z) { return std::pow(z, 10); };
    double a = weighted_norm(disc, g, u, 0.1);
    double b = weighted_norm(disc, g, u, 0.4);
    REQUIRE(b > a);
  }
  SECTION("delta flavor agrees qualitatively") {
    double n = weighted_norm(disc, g, [](Cplx) { return Cplx(1.0); }, 0.25,
                             NormFlavor::Delta);
    REQUIRE(n > std::sqrt(M_PI));
    REQUIRE(std::isfinite(n));
  }
}

TEST_CASE("holomorphic projector") {
  PlanarDomain disc = PlanarDomain::disc();
  PlanarGrid g = disc.grid(128);
  auto psi0 = [](Cplx) { return 0.0; };
  HoloProjector proj(g, 15, weight_density(g, psi0));
  SECTION("constants are fixed points") {
    VecC c = proj.project([](Cplx) { return Cplx(1.0); });
    REQUIRE(std::abs(c[0] - Cplx(1.0)) < 1e-10);
    for (int k = 1; k <= 15; ++k) REQUIRE(std::abs(c[k]) < 1e-10);
  }
  SECTION("conj z projects to (nearly) zero on the disc") {
    // exactly zero in the continuum; the Cartesian boundary cells break
    // rotational symmetry at the grid scale
    VecC c = proj.project([](Cplx z) { return std::conj(z); });
    REQUIRE(c.cwiseAbs().maxCoeff() < 1e-3);
  }
  SECTION("conj z on the square: stable nonzero projection") {
    PlanarDomain sq = PlanarDomain::square();
    PlanarGrid g1 = sq.grid(128), g2 = sq.grid(192);
    HoloProjector p1(g1, 15, weight_density(g1, psi0));
    HoloProjector p2(g2, 15, weight_density(g2, psi0));
    VecC c1 = p1.project([](Cplx z) { return std::conj(z); });
    VecC c2 = p2.project([](Cplx z) { return std::conj(z); });
    REQUIRE(c1.norm() > 0.1);  // genuinely nonzero
    REQUIRE((c1 - c2).norm() / c2.norm() < 1e-3);
  }
  SECTION("gram condition number reported and reliable at moderate degree") {
    REQUIRE(proj.gram_cond() > 1.0);
    REQUIRE(proj.reliable());
  }
  SECTION("density size mismatch rejected") {
    std::vector<double> bad(3, 1.0);
    REQUIRE_THROWS_AS(HoloProjector(g, 5, bad), DomainError);
  }
}

TEST_CASE("cauchy transform solves dbar") {
  PlanarDomain disc = PlanarDomain::disc();
  SECTION("zero right-hand side gives zero") {
    PlanarGrid g = disc.grid(32);
    CauchyTransform ct(g, VecC::Zero(static_cast<int>(g.nodes.size())));
    REQUIRE(std::abs(ct(Cplx(0.3, 0.2))) == 0.0);
  }
  SECTION("constant and conj-z right-hand sides converge under refinement") {
    for (auto rhs : {PlanarFn([](Cplx) { return Cplx(1.0); }),
                     PlanarFn([](Cplx z) { return std::conj(z); })}) {
      std::vector<double> res;
      for (int r : {64, 128}) {
        PlanarGrid g = disc.grid(r);
        const int m = static_cast<int>(g.nodes.size());
        VecC rv(m);
        for (int i = 0; i < m; ++i) rv[i] = rhs(g.nodes[i]);
        CauchyTransform ct(g, rv);
        res.push_back(dbar_residual_l2(disc, g, ct.values_at_nodes(), rhs));
      }
      REQUIRE(res[0] < 1e-2);
      REQUIRE(res[1] < res[0]);
    }
  }
}

TEST_CASE("twisted solution operator") {
  PlanarDomain disc = PlanarDomain::disc();
  PlanarGrid g = disc.grid(96);
  auto psi0 = [](Cplx) { return 0.0; };
  SECTION("constant twist gives the zero solution") {
    ScalarField kone = constant_field(1, 1.0);
    kone.real_valued = true;
    auto ts = twisted_solution(disc, g, 10, [](Cplx) { return Cplx(1.0); },
                               kone, psi0);
    REQUIRE(ts.u_values.cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("kappa = (-rho)^{1/2}: estimate, identity, orthogonality") {
    // s = 0.25, B = (1-2s)/(2s) = 1, ratio bound 1/sqrt(2)
    ScalarField kap;
    kap.dim = 1;
    kap.real_valued = true;
    kap.eval = [&](const VecC& z) {
      return Cplx(std::pow(1.0 - std::norm(z[0]), 0.5));
    };
    kap.d_analytic = [](const VecC& z, int) {
      return -0.5 * std::pow(1.0 - std::norm(z[0]), -0.5) * std::conj(z[0]);
    };
    auto ts = twisted_solution(disc, g, 20, [](Cplx) { return Cplx(1.0); },
                               kap, psi0);
    REQUIRE(ts.diag.dbar_residual < 1e-2);
    REQUIRE(ts.diag.norm_ratio < 1.10 / std::sqrt(2.0));
    REQUIRE(ts.diag.orthogonality < 1e-8);
    REQUIRE(ts.diag.reliable);
  }
}

TEST_CASE("operator bound experiment") {
  PlanarDomain disc = PlanarDomain::disc();
  PlanarGrid g = disc.grid(192);
  auto psi0 = [](Cplx) { return 0.0; };
  SECTION("s = 0.25: bound constant is 2 + sqrt(2)") {
    auto rep = operator_bound_experiment(disc, g, 20, psi0, 0.25, {0, 1, 2, 3},
                                         {0.0, 0.1, 0.2, 0.3});
    REQUIRE(rep.b_const == Catch::Approx(1.0));
    REQUIRE(rep.bound == Catch::Approx(2.0 + std::sqrt(2.0)));
    REQUIRE(rep.max_ratio <= rep.bound * 1.10);
    // holomorphic members of the family are fixed points: ratio 1 at t=0
    // would need v holomorphic; conj-z family members stay below the bound
    bool any_skipped = false;
    for (const auto& c : rep.cases) any_skipped = any_skipped || c.skipped;
    REQUIRE(any_skipped);  // t = 0.3 cases: 2(s+t) = 1.1 >= 0.95
  }
  SECTION("holomorphic input is a fixed point with ratio 1") {
    auto rep = operator_bound_experiment(disc, g, 20, psi0, 0.2, {0}, {0.0});
    // v = conj(z)^0 = 1 is holomorphic
    REQUIRE(rep.cases[0].ratio_minus == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(rep.cases[0].ratio_plus == Catch::Approx(1.0).margin(1e-8));
  }
  SECTION("s out of range rejected") {
    REQUIRE_THROWS_AS(
        operator_bound_experiment(disc, g, 10, psi0, 0.6, {0}, {0.0}),
        DomainError);
  }
}

TEST_CASE("detraz ratios") {
  PlanarDomain disc = PlanarDomain::disc();
  PlanarGrid g = disc.grid(192);
  SECTION("constant has zero ratio") {
    REQUIRE(detraz_ratio(disc, g, 0, 0.25) == 0.0);
  }
  SECTION("z has a finite positive ratio") {
    double r = detraz_ratio(disc, g, 1, 0.25);
    REQUIRE(r > 0.0);
    REQUIRE(r < 10.0);
  }
  SECTION("sweep over m stays bounded") {
    double worst = 0.0;
    for (int m = 1; m <= 30; ++m)
      worst = std::max(worst, detraz_ratio(disc, g, m, 0.25));
    REQUIRE(worst <= 10.0);
  }
}

TEST_CASE("planar Cauchy estimate constant") {
  // |u'(0)|^2 <= (4/pi) R^{-4} int_{B(0,R)} |u|^2 for u = z^m, verified by a
  // polar quadrature sweep over m <= 20 and R in {0.1, 0.5}.
  const double c_const = 4.0 / M_PI;
  for (double R : {0.1, 0.5}) {
    for (int m = 0; m <= 20; ++m) {
      double dval = (m == 1) ? 1.0 : 0.0;  // |d/dz z^m at 0|^2
      KahanSum integral;
      const int nr = 400, nt = 256;
      for (int ir = 0; ir < nr; ++ir) {
        double r = R * (ir + 0.5) / nr;
        double ring = 0.0;
        for (int it = 0; it < nt; ++it) ring += std::pow(r, 2 * m);
        integral.add(ring * r * (R / nr) * (2.0 * M_PI / nt));
      }
      REQUIRE(dval <= c_const * std::pow(R, -4.0) * integral.value() + 1e-12);
    }
  }
}

TEST_CASE("boas-straube factorization in the discrete inner product") {
  // P_psi v = P_psi(kappa^{-1} P_{psi + log kappa}(kappa v))
  PlanarDomain disc = PlanarDomain::disc();
  PlanarGrid g = disc.grid(128);
  auto psi0 = [](Cplx) { return 0.0; };
  auto kval = [](Cplx z) { return std::sqrt(1.0 - std::norm(z)); };
  const int m = static_cast<int>(g.nodes.size());
  std::vector<double> dens_plain = weight_density(g, psi0), dens_tw(m);
  for (int i = 0; i < m; ++i) dens_tw[i] = dens_plain[i] / kval(g.nodes[i]);
  HoloProjector proj(g, 12, dens_plain);
  HoloProjector proj_tw(g, 12, dens_tw);
  Rng rng(149);
  for (int trial = 0; trial < 5; ++trial) {
    Cplx a(rng.uniform(-1, 1), rng.uniform(-1, 1));
    int deg = trial % 4;
    VecC vv(m), kv(m);
    for (int i = 0; i < m; ++i) {
      vv[i] = std::pow(std::conj(g.nodes[i]), deg) + a * g.nodes[i];
      kv[i] = vv[i] * kval(g.nodes[i]);
    }
    VecC lhs = proj.project_values(vv);
    PlanarFn inner_fn = HoloProjector::evaluate(proj_tw.project_values(kv));
    VecC mid(m);
    for (int i = 0; i < m; ++i) mid[i] = inner_fn(g.nodes[i]) / kval(g.nodes[i]);
    VecC rhs = proj.project_values(mid);
    REQUIRE((lhs - rhs).norm() <= 1e-6 * std::max(lhs.norm(), 1e-12));
  }
}
