#pragma once

#include "dislocore/lattice.hpp"
#include "dislocore/potentials.hpp"

namespace dislocore {

struct GammaEval {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

// Misfit energy per unit area as a function of the disregistry phi,
// computed from the inter-layer lattice sums.  gamma is the energy
// increment (gamma(0) = 0) with the 2/(sqrt3 a^2) area prefactor; the
// A/B split satisfies gamma_A + gamma_B = gamma, with the A part holding
// the rows that interact with the lower-layer A sublattice.
class GammaSurface {
 public:
  GammaSurface(const LatticeSpec& spec, const TwoBodyPotential& pot, double r_cut)
      : spec_(spec), pot_(pot), r_cut_(r_cut) {
    if (r_cut <= spec.layer_gap)
      throw InvalidArgument("GammaSurface: R_cut must exceed the layer gap");
    const double rho_max = std::sqrt(r_cut * r_cut - spec.layer_gap * spec.layer_gap);
    // Offsets must cover |phi| excursions up to ~2a on top of the cutoff.
    const double scan = rho_max + 2.5 * spec.a;
    row_aa_ = detail::scan_offsets(spec, -spec.d, scan, false);
    row_ab_ = detail::scan_offsets(spec, -spec.d - spec.p, scan, false);
    row_ba_ = detail::scan_offsets(spec, -spec.d + spec.p, scan, false);
    prefactor_ = 2.0 / (kSqrt3 * spec.a * spec.a);
  }

  const TwoBodyPotential& potential() const { return pot_; }
  const LatticeSpec& spec() const { return spec_; }
  double r_cut() const { return r_cut_; }

  // Full gamma-surface: rows A+A-, A+B-, B+A-, B+B- (the two same-sublattice
  // rows share the -d base offset, hence the factor 2 on row_aa_).
  GammaEval eval(const Vec2& phi, int order = 2) const {
    GammaEval g;
    accumulate(row_aa_, phi, 2.0, order, g);
    accumulate(row_ab_, phi, 1.0, order, g);
    accumulate(row_ba_, phi, 1.0, order, g);
    scale(g);
    return g;
  }

  // A part: rows A+A- and B+A- (everything coupling to the lower A atoms).
  GammaEval eval_A(const Vec2& phi, int order = 2) const {
    GammaEval g;
    accumulate(row_aa_, phi, 1.0, order, g);
    accumulate(row_ba_, phi, 1.0, order, g);
    scale(g);
    return g;
  }

  // B part: rows A+B- and B+B-.
  GammaEval eval_B(const Vec2& phi, int order = 2) const {
    GammaEval g;
    accumulate(row_aa_, phi, 1.0, order, g);
    accumulate(row_ab_, phi, 1.0, order, g);
    scale(g);
    return g;
  }

  double value(const Vec2& phi) const { return eval(phi, 0).value; }

 private:
  void accumulate(const std::vector<NeighborOffset>& row, const Vec2& phi, double weight,
                  int order, GammaEval& g) const {
    for (const auto& o : row) {
      const InterEval shifted = pot_.eval_xi(phi + o.geom, order);
      const InterEval ref = pot_.eval_xi(o.geom, 0);
      g.value += weight * (shifted.value - ref.value);
      if (order >= 1) g.grad += weight * shifted.grad;
      if (order >= 2) g.hess += weight * shifted.hess;
    }
  }
  void scale(GammaEval& g) const {
    g.value *= prefactor_;
    g.grad *= prefactor_;
    g.hess *= prefactor_;
  }

  LatticeSpec spec_;
  TwoBodyPotential pot_;
  double r_cut_;
  double prefactor_;
  std::vector<NeighborOffset> row_aa_, row_ab_, row_ba_;
};

struct ElasticConstants {
  double alpha1 = 0.0;  // coefficient of (du/dx)^2 per layer
  double alpha2 = 0.0;  // coefficient of (du/dy)^2 per layer
  double cross = 0.0;   // coefficient of (du/dx)(du/dy); vanishes by lattice symmetry
  double alpha() const { return 0.5 * std::sqrt(alpha1 * alpha2); }
};

// Closed-form lattice sums for the continuum elastic constants: the
// 1/(3 sqrt3 a^2)-normalized second-derivative sums over the ordered
// three-body pairs, with the AB terms carrying the 3/2 weight for each of
// the +p / -p variants.
inline ElasticConstants elastic_constants_raw(const ThreeBodyPotential& V, const LatticeSpec& spec,
                                              const PairLists& pl) {
  const double a = spec.a;
  // quadratic form in the two edge projections: since only x-displacements
  // occur, only the xx-entries of the derivative blocks enter
  auto quad = [](const ThreeBodyEval& e, double q1, double q2, double w1, double w2) {
    return e.d20(0, 0) * q1 * w1 + e.d11(0, 0) * (q1 * w2 + q2 * w1) + e.d02(0, 0) * q2 * w2;
  };
  double sxx = 0, syy = 0, sxy = 0;

  for (const auto& pr : pl.aaa) {
    const Vec2 s1 = pl.aa[pr.i].geom / a;
    const Vec2 s2 = pl.aa[pr.j].geom / a;
    const ThreeBodyEval e = V.eval(s1, s2, 2);
    sxx += quad(e, s1.x(), s2.x(), s1.x(), s2.x());
    syy += quad(e, s1.y(), s2.y(), s1.y(), s2.y());
    sxy += quad(e, s1.x(), s2.x(), s1.y(), s2.y());
  }
  for (const auto& pr : pl.aab) {
    const Vec2 sp = pl.ab[pr.i].geom / a;  // edge s1 + p toward the B neighbor
    const Vec2 s2 = pl.aa[pr.j].geom / a;
    for (int sign : {+1, -1}) {  // the +p and -p variants, each weighted 3/2
      const Vec2 s1 = sign * sp;
      const ThreeBodyEval e = V.eval(s1, s2, 2);
      sxx += 1.5 * quad(e, s1.x(), s2.x(), s1.x(), s2.x());
      syy += 1.5 * quad(e, s1.y(), s2.y(), s1.y(), s2.y());
      sxy += 1.5 * quad(e, s1.x(), s2.x(), s1.y(), s2.y());
    }
  }

  const double norm = 1.0 / (3.0 * kSqrt3 * a * a);
  ElasticConstants ec;
  ec.alpha1 = norm * sxx;
  ec.alpha2 = norm * syy;
  ec.cross = norm * sxy;
  return ec;
}

inline ElasticConstants elastic_constants(const ThreeBodyPotential& V, const LatticeSpec& spec,
                                          const PairLists& pl) {
  const ElasticConstants ec = elastic_constants_raw(V, spec, pl);
  if (ec.alpha1 <= 0 || ec.alpha2 <= 0)
    throw SolverFailure(
        "elastic_constants: alpha1/alpha2 not positive (stability assumption violated)");
  return ec;
}

// Small parameter: eps = sqrt(a^2 gamma_xx(0) / sqrt(alpha1 alpha2)).
inline double epsilon(const ElasticConstants& ec, const GammaSurface& gs) {
  const Mat2 h = gs.eval(Vec2::Zero(), 2).hess;
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::abs(es.eigenvalues().maxCoeff()))
    throw SolverFailure("epsilon: hessian of gamma at 0 is not positive-definite");
  const double a = gs.spec().a;
  return std::sqrt(a * a * h(0, 0) / std::sqrt(ec.alpha1 * ec.alpha2));
}

struct AssumptionReport {
  struct Item {
    std::string id;
    bool pass = false;
    double value = 0.0;
    std::string note;
  };
  std::vector<Item> items;
  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

// Numerical spot checks of the standing assumptions.  theta/theta_bar and
// the stability gap are supplied by the caller when available (A7/A8).
inline AssumptionReport check_assumptions(const ThreeBodyPotential& V, const GammaSurface& gs,
                                          const ElasticConstants& ec, double eps,
                                          const double* theta = nullptr,
                                          const double* theta_bar = nullptr,
                                          const double* delta = nullptr) {
  AssumptionReport rep;
  auto add = [&](std::string id, bool pass, double value, std::string note) {
    rep.items.push_back({std::move(id), pass, value, std::move(note)});
  };

  add("A1", eps < 0.2, eps, "weak inter-layer coupling, eps < 0.2");

  {  // A2: inversion symmetry of both potentials
    SplitMix64 rng(12345);
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      const Vec2 r1(rng.uniform(0.4, 1.6), rng.uniform(-1.0, 1.0));
      const Vec2 r2(rng.uniform(0.4, 1.6), rng.uniform(-1.0, 1.0));
      const double vp = V.eval(r1, r2, 0).value;
      const double vm = V.eval(-r1, -r2, 0).value;
      worst = std::max(worst, std::abs(vp - vm) / std::max(1e-30, std::abs(vp)));
      const Vec2 xi(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
      const double up = gs.potential().eval_xi(xi, 0).value;
      const double um = gs.potential().eval_xi(-xi, 0).value;
      worst = std::max(worst, std::abs(up - um) / std::max(1e-30, std::abs(up)));
    }
    add("A2", worst < 1e-12, worst, "inversion symmetry residual");
  }

  {  // A4: decay beyond 2a, geometric sequence of radii
    double prev_v = std::abs(gs.potential().eval_xi(Vec2(2.0 * gs.spec().a, 0), 1).value);
    double prev_g = gs.potential().eval_xi(Vec2(2.0 * gs.spec().a, 0), 1).grad.norm();
    bool mono = true;
    for (double r = 2.0 * gs.spec().a * 1.3; r < gs.r_cut() * 1.2; r *= 1.3) {
      const InterEval e = gs.potential().eval_xi(Vec2(r, 0), 1);
      if (std::abs(e.value) > prev_v + 1e-15 || e.grad.norm() > prev_g + 1e-15) mono = false;
      prev_v = std::abs(e.value);
      prev_g = e.grad.norm();
    }
    add("A4", mono, 0.0, "tail monotone beyond 2a");
  }

  add("A5", ec.alpha1 > 0 && ec.alpha2 > 0, std::min(ec.alpha1, ec.alpha2),
      "elastic constants positive");

  {  // A6: PD hessian at 0 and argmin of gamma on the lattice
    const Mat2 h = gs.eval(Vec2::Zero(), 2).hess;
    Eigen::SelfAdjointEigenSolver<Mat2> es(h);
    const double lmin = es.eigenvalues().minCoeff();
    bool pd = lmin > 1e-12 * std::max(1.0, std::abs(es.eigenvalues().maxCoeff()));
    // grid scan over one unit cell in (e1, e2) coordinates; the minimum
    // must stay at the lattice corners (value 0) up to grid tolerance
    bool argmin_on_lattice = true;
    const int n = 200;
    for (int i = 0; i < n && argmin_on_lattice; ++i)
      for (int j = 0; j < n; ++j) {
        const Vec2 phi = (double(i) / n) * gs.spec().e1 + (double(j) / n) * gs.spec().e2;
        if (gs.value(phi) < -1e-12) {
          const bool near_corner = (i <= 1 || i >= n - 1) && (j <= 1 || j >= n - 1);
          if (!near_corner) {
            argmin_on_lattice = false;
            break;
          }
        }
      }
    add("A6", pd && argmin_on_lattice, lmin, "gamma hessian PD and argmin on lattice");
  }

  if (theta && theta_bar)
    add("A7", *theta_bar >= *theta / 3.0, *theta_bar, "theta_bar >= theta/3");
  if (delta && theta_bar)
    add("A8", *delta < std::min(1.0 / 3.0, *theta_bar / 3.0), *delta,
        "stability gap below min(1/3, theta_bar/3)");
  return rep;
}

}  // namespace dislocore
