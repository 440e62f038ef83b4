#include <catch2/catch_amalgamated.hpp>

#include "dislocore/pn_solver.hpp"

using namespace dislocore;

namespace {

GammaLine sin2_gamma(double K) {
  GammaLine g;
  g.value = [K](double phi) { return K * std::sin(M_PI * phi) * std::sin(M_PI * phi); };
  g.d1 = [K](double phi) { return K * M_PI * std::sin(2 * M_PI * phi); };
  g.d2 = [K](double phi) { return 2 * K * M_PI * M_PI * std::cos(2 * M_PI * phi); };
  return g;
}

struct Production {
  LatticeSpec spec = LatticeSpec::hexagonal_bilayer(1.0, 1.0);
  ThreeBodyPotential V{1.0, 1.0, 1.8, 15.0, 4.0};
  TwoBodyPotential Vd{1.0, 4.0, 1.0, 1.0, 6.93};
  PairLists pl = build_pair_lists(spec, 1.8, 6.93);
  GammaSurface gs{spec, Vd, 6.93};
  ElasticConstants ec = elastic_constants(V, spec, pl);
  double eps = epsilon(ec, gs);
};

}  // namespace

TEST_CASE("sinusoidal gamma reproduces the separated closed form") {
  const double K = 0.3, alpha = 0.8;
  const GammaLine g = sin2_gamma(K);
  const PNProfile prof = solve_profile(g, alpha, 25.0, 1e-11);

  // separation of variables: phi(x) = (2/pi) atan(exp(2 pi sqrt(K/alpha) x))
  const double rate = 2.0 * M_PI * std::sqrt(K / alpha);
  double sup = 0;
  for (double x = -20; x <= 20; x += 0.0173) {
    const double want = 2.0 / M_PI * std::atan(std::exp(rate * x));
    sup = std::max(sup, std::abs(prof.phi(x) - want));
  }
  REQUIRE(sup <= 1e-8);

  REQUIRE(prof.phi(0.0) == 0.5);
  for (double x = 0; x < 18; x += 0.31)
    REQUIRE(std::abs(prof.phi(x) + prof.phi(-x) - 1.0) < 1e-9);
  // monotone on the grid
  for (const auto& n : prof.nodes()) REQUIRE(n.d >= 0.0);
  double prev = -1;
  for (double x = -22; x < 22; x += 0.1) {
    REQUIRE(prof.phi(x) >= prev - 1e-12);
    prev = prof.phi(x);
  }
}

TEST_CASE("first-order condition residual away from the tails") {
  const double K = 0.5, alpha = 1.3;
  const PNProfile prof = solve_profile(sin2_gamma(K), alpha, 25.0, 1e-11);
  const GammaLine g = sin2_gamma(K);
  for (double x = -8; x <= 8; x += 0.07) {
    const double resid =
        0.5 * std::sqrt(alpha) * prof.dphi(x) - std::sqrt(std::max(g.value(prof.phi(x)), 0.0));
    REQUIRE(std::abs(resid) <= 1e-8);
  }
}

TEST_CASE("grid refinement convergence") {
  const GammaLine g = sin2_gamma(0.4);
  const PNProfile coarse = solve_profile(g, 1.0, 20.0, 1e-8);
  const PNProfile fine = solve_profile(g, 1.0, 20.0, 5e-9);
  for (double x = -15; x <= 15; x += 0.13)
    REQUIRE(std::abs(coarse.phi(x) - fine.phi(x)) <= 1e-8);
}

TEST_CASE("BPS bound is saturated by the solved profile") {
  const double K = 0.3, alpha = 0.8;
  const GammaLine g = sin2_gamma(K);
  const PNProfile prof = solve_profile(g, alpha, 25.0, 1e-11);
  const double bound = bps_bound(g, alpha);
  const double energy = pn_energy(prof, g, 1e-10);
  REQUIRE(energy >= bound - 1e-6 * bound);
  REQUIRE_THAT(energy, Catch::Matchers::WithinRel(bound, 1e-6));

  // closed form of the bound for K sin^2(pi phi): (2/pi) sqrt(alpha K)
  REQUIRE_THAT(bound, Catch::Matchers::WithinRel(2.0 / M_PI * std::sqrt(alpha * K), 1e-9));

  // doubling gamma scales the energy by sqrt(2)
  const GammaLine g2 = sin2_gamma(2 * K);
  const PNProfile prof2 = solve_profile(g2, alpha, 25.0, 1e-11);
  REQUIRE_THAT(pn_energy(prof2, g2, 1e-10),
               Catch::Matchers::WithinRel(std::sqrt(2.0) * energy, 1e-6));
}

TEST_CASE("symmetric split") {
  const PNProfile prof = solve_profile(sin2_gamma(0.3), 0.8, 20.0, 1e-10);
  const SymmetricSplit split = symmetric_split(prof);
  for (double x = -10; x <= 10; x += 0.37) {
    REQUIRE(split.u_plus(x) - split.u_minus(x) == prof.phi(x));
    REQUIRE(split.u_plus(x) == 0.5 * prof.phi(x));
  }

  // any asymmetric perturbation with nonzero gradient raises the elastic energy
  SplitMix64 rng(41);
  auto elastic = [&](auto&& up, auto&& um) {
    auto dens = [&](double x) {
      const double h = 1e-5;
      const double dup = (up(x + h) - up(x - h)) / (2 * h);
      const double dum = (um(x + h) - um(x - h)) / (2 * h);
      return dup * dup + dum * dum;
    };
    return adaptive_simpson(dens, -15.0, 15.0, 1e-10);
  };
  const double base = elastic([&](double x) { return split.u_plus(x); },
                              [&](double x) { return split.u_minus(x); });
  for (int k = 0; k < 5; ++k) {
    const double a = rng.uniform(0.1, 0.5), x0 = rng.uniform(-3, 3), w = rng.uniform(0.5, 2.0);
    auto delta = [=](double x) { return a * std::exp(-(x - x0) * (x - x0) / (w * w)); };
    const double shifted = elastic([&](double x) { return split.u_plus(x) + delta(x); },
                                   [&](double x) { return split.u_minus(x) + delta(x); });
    REQUIRE(shifted > base);
  }
}

TEST_CASE("production profile from the default material") {
  Production m;
  const PNProfile prof = solve_pn(m.gs, m.ec, m.eps, 20.0, 1e-10);
  REQUIRE(prof.phi(0.0) == 0.5);
  REQUIRE(prof.phi(-20.0) < 1e-3);
  REQUIRE(prof.phi(20.0) > 1 - 1e-3);
  REQUIRE_THAT(prof.y_scale(), Catch::Matchers::WithinRel(std::sqrt(m.ec.alpha1 / m.ec.alpha2), 1e-14));

  // BPS saturation with the production gamma
  const GammaLine line = GammaLine::from_surface(m.gs, 1.0 / (m.eps * m.eps));
  const double bound = bps_bound(line, prof.alpha_ode());
  REQUIRE_THAT(pn_energy(prof, line, 1e-10), Catch::Matchers::WithinRel(bound, 1e-6));

  // gamma < 0 on the path is rejected
  GammaLine bad;
  bad.value = [](double phi) { return -0.1; };
  bad.d1 = [](double) { return 0.0; };
  bad.d2 = [](double) { return 1.0; };
  REQUIRE_THROWS_AS(solve_profile(bad, 1.0, 10.0), SolverFailure);
}
