#pragma once

#include <functional>

#include "dislocore/material.hpp"

namespace dislocore {

// 1D section of the (rescaled) misfit energy along the Burgers direction:
// value, first and second derivative with respect to the scalar disregistry.
struct GammaLine {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  static GammaLine from_surface(const GammaSurface& gs, double inv_eps2) {
    GammaLine g;
    g.value = [&gs, inv_eps2](double phi) { return inv_eps2 * gs.eval(Vec2(phi, 0), 0).value; };
    g.d1 = [&gs, inv_eps2](double phi) { return inv_eps2 * gs.eval(Vec2(phi, 0), 1).grad.x(); };
    g.d2 = [&gs, inv_eps2](double phi) { return inv_eps2 * gs.eval(Vec2(phi, 0), 2).hess(0, 0); };
    return g;
  }
};

// Sampled dislocation profile phi(x) on [-x_max, x_max], phi(0) = 1/2,
// monotone, with point symmetry phi(x) + phi(-x) = 1 exact by construction
// (only the right half is stored).  Between nodes the profile is a quintic
// Hermite in (phi, phi', phi''); beyond the last node the linearized
// exponential tail is used.
class PNProfile {
 public:
  struct Node {
    double x, f, d, dd;
  };

  double phi(double x) const { return x >= 0 ? right(x) : 1.0 - right(-x); }
  double dphi(double x) const { return x >= 0 ? dright(x) : dright(-x); }

  double x_max() const { return x_max_; }
  double alpha_ode() const { return alpha_ode_; }
  double tail_rate() const { return kappa_; }
  double y_scale() const { return y_scale_; }
  double epsilon() const { return eps_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const ElasticConstants& constants() const { return ec_; }

 private:
  double right(double x) const {
    const Node& last = nodes_.back();
    if (x >= last.x) return 1.0 - (1.0 - last.f) * std::exp(-kappa_ * (x - last.x));
    return hermite(x, false);
  }
  double dright(double x) const {
    const Node& last = nodes_.back();
    if (x >= last.x) return kappa_ * (1.0 - last.f) * std::exp(-kappa_ * (x - last.x));
    return hermite(x, true);
  }

  double hermite(double x, bool deriv) const {
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                                     [](double v, const Node& n) { return v < n.x; });
    const size_t k = std::min(nodes_.size() - 2, size_t(std::max(1l, it - nodes_.begin()) - 1));
    const Node& n0 = nodes_[k];
    const Node& n1 = nodes_[k + 1];
    const double h = n1.x - n0.x;
    const double t = (x - n0.x) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    if (!deriv) {
      const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
      const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
      const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
      const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
      const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
      const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
      return n0.f * H0 + n0.d * h * H1 + n0.dd * h * h * H2 + n1.f * H3 + n1.d * h * H4 +
             n1.dd * h * h * H5;
    }
    const double dH0 = (-30 * t2 + 60 * t3 - 30 * t4) / h;
    const double dH1 = (1 - 18 * t2 + 32 * t3 - 15 * t4) / h;
    const double dH2 = (t - 4.5 * t2 + 6 * t3 - 2.5 * t4) / h;
    const double dH3 = (30 * t2 - 60 * t3 + 30 * t4) / h;
    const double dH4 = (-12 * t2 + 28 * t3 - 15 * t4) / h;
    const double dH5 = (1.5 * t2 - 4 * t3 + 2.5 * t4) / h;
    return n0.f * dH0 + n0.d * h * dH1 + n0.dd * h * h * dH2 + n1.f * dH3 + n1.d * h * dH4 +
           n1.dd * h * h * dH5;
  }

  friend PNProfile solve_profile(const GammaLine&, double, double, double);
  friend PNProfile solve_pn(const GammaSurface&, const ElasticConstants&, double, double, double);

  std::vector<Node> nodes_;  // right half, nodes_[0].x == 0, f(0) == 1/2
  double x_max_ = 0;
  double alpha_ode_ = 0;
  double kappa_ = 0;      // linearized tail decay rate
  double y_scale_ = 1.0;  // sqrt(alpha1/alpha2)
  double eps_ = 0;
  ElasticConstants ec_;
};

// Integrates d phi / dx = (2/sqrt(alpha)) sqrt(gamma(phi)) rightward from
// phi(0) = 1/2 with an adaptive Dormand-Prince 5(4) pair, stopping once
// phi reaches 1 - 1e-6 (the tails continue analytically).  `tol` is the
// local error target per unit step.
inline PNProfile solve_profile(const GammaLine& gamma, double alpha_ode, double x_max,
                               double tol = 1e-10) {
  if (alpha_ode <= 0) throw InvalidArgument("solve_profile: alpha must be positive");
  if (x_max <= 0) throw InvalidArgument("solve_profile: x_max must be positive");
  const double inv_sa = 2.0 / std::sqrt(alpha_ode);

  auto gval = [&](double phi) {
    double g = gamma.value(phi);
    if (g < -1e-12) throw SolverFailure("solve_profile: gamma(phi) < 0 on the path");
    return std::max(g, 0.0);
  };
  auto F = [&](double phi) { return inv_sa * std::sqrt(gval(phi)); };
  // d2 phi/dx2 = (2/alpha) gamma'(phi), regular through the zeros of gamma
  auto F2 = [&](double phi) { return 2.0 / alpha_ode * gamma.d1(phi); };

  // Dormand-Prince coefficients (5th order solution, embedded 4th)
  static const double A[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double B5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                               11.0 / 84, 0};
  static const double B4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  PNProfile prof;
  prof.alpha_ode_ = alpha_ode;
  prof.x_max_ = x_max;

  const double phi_stop = 1.0 - 1e-6;
  double x = 0.0, phi = 0.5;
  double h = 1e-3;
  const double h_max = 0.25;
  prof.nodes_.push_back({x, phi, F(phi), F2(phi)});

  int rejected = 0;
  while (phi < phi_stop && x < x_max) {
    h = std::min({h, h_max, x_max - x + 1e-12});
    double k[7];
    k[0] = F(phi);
    for (int s = 1; s < 7; ++s) {
      double acc = 0;
      for (int j = 0; j < s; ++j) acc += A[s][j] * k[j];
      k[s] = F(std::min(phi + h * acc, 1.0));
    }
    double y5 = phi, y4 = phi;
    for (int s = 0; s < 7; ++s) {
      y5 += h * B5[s] * k[s];
      y4 += h * B4[s] * k[s];
    }
    const double err = std::abs(y5 - y4);
    const double target = tol * std::max(1.0, h);
    if (err > target && h > 1e-12) {
      h *= std::max(0.2, 0.9 * std::pow(target / (err + 1e-300), 0.2));
      if (++rejected > 100000) throw SolverFailure("solve_profile: step control stalled");
      continue;
    }
    x += h;
    phi = std::min(y5, 1.0);
    prof.nodes_.push_back({x, phi, F(phi), F2(phi)});
    if (err > 0) h = std::min(h * std::min(5.0, 0.9 * std::pow(target / err, 0.2)), h_max);
    else h = std::min(h * 5.0, h_max);
  }

  // tail decay rate from the curvature of gamma at its zero
  const double gpp = gamma.d2(1.0);
  prof.kappa_ = std::sqrt(std::max(2.0 * gpp / alpha_ode, 1e-30));
  return prof;
}

// Production path: the rescaled surface gamma/eps^2 along (phi, 0), with
// the elastic weight of the reduced one-dimensional functional
//   E[phi] = (1/4) alpha_ode phi'^2 + gamma(phi),  alpha_ode = 2 alpha1
// (the Euler-Lagrange weight consistent with the two-layer elastic energy
// under the symmetric split u+- = +-phi/2).
inline PNProfile solve_pn(const GammaSurface& gs, const ElasticConstants& ec, double eps,
                          double x_max, double tol = 1e-10) {
  const GammaLine line = GammaLine::from_surface(gs, 1.0 / (eps * eps));
  PNProfile prof = solve_profile(line, 2.0 * ec.alpha1, x_max, tol);
  prof.y_scale_ = std::sqrt(ec.alpha1 / ec.alpha2);
  prof.eps_ = eps;
  prof.ec_ = ec;
  return prof;
}

// Lower bound saturated by the solved profile:  int_0^1 sqrt(alpha gamma).
inline double bps_bound(const GammaLine& gamma, double alpha_ode, double tol = 1e-10) {
  auto f = [&](double eta) { return std::sqrt(std::max(alpha_ode * gamma.value(eta), 0.0)); };
  return adaptive_simpson(f, 0.0, 1.0, tol);
}

// Total reduced energy of a profile: quadrature of
// (1/4) alpha phi'^2 + gamma(phi) over the stored range plus the analytic
// exponential-tail remainder.
inline double pn_energy(const PNProfile& prof, const GammaLine& gamma, double tol = 1e-9) {
  const double alpha = prof.alpha_ode();
  auto density = [&](double x) {
    const double d = prof.dphi(x);
    return 0.25 * alpha * d * d + std::max(gamma.value(prof.phi(x)), 0.0);
  };
  const double xc = prof.nodes().back().x;
  double core = adaptive_simpson(density, -xc, xc, tol);
  // both tails: integrand ~ [alpha kappa^2/4 + gpp/2] delta^2 e^{-2 kappa s}
  const double delta = 1.0 - prof.nodes().back().f;
  const double gpp = gamma.d2(1.0);
  const double kappa = prof.tail_rate();
  const double tail = (0.25 * alpha * kappa * kappa + 0.5 * gpp) * delta * delta / (2.0 * kappa);
  return core + 2.0 * tail;
}

// The symmetric split of a disregistry profile into layer displacements.
struct SymmetricSplit {
  const PNProfile* profile;
  double u_plus(double x) const { return 0.5 * profile->phi(x); }
  double u_minus(double x) const { return -0.5 * profile->phi(x); }
};

inline SymmetricSplit symmetric_split(const PNProfile& prof) { return {&prof}; }

// Reference configuration of the admissible spaces (arctan profile).
inline double u0_reference(double x) { return std::atan(x) / (2.0 * M_PI) + 0.25; }

}  // namespace dislocore
