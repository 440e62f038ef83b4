#pragma once

#include "dislocore/common.hpp"

namespace dislocore {

// Value + first derivatives + second-derivative blocks of a two-argument
// potential V(rho1, rho2), rho_i in R^2.  The blocks follow the
// d20/d11/d02 convention: d11(i,j) = d^2V / d rho1_i d rho2_j.
struct ThreeBodyEval {
  double value = 0.0;
  Vec2 g1 = Vec2::Zero();
  Vec2 g2 = Vec2::Zero();
  Mat2 d20 = Mat2::Zero();
  Mat2 d11 = Mat2::Zero();
  Mat2 d02 = Mat2::Zero();
};

// Stillinger-Weber style three-body term,
//   V(rho1, rho2) = Theta(r1) Theta(r2) [ lambda (cos(theta) + 1/3)^2
//                                         + (kappa/2) (m(r1) + m(r2)) ],
//   Theta(r) = exp(gamma / (r - r_cut)) for r < r_cut, 0 beyond,
//   m(r) = [exp(-2 q (r - r0)) - 2 exp(-q (r - r0))] exp(gamma / (r - rb)),
// written in terms of the two edge vectors from the central atom.  The
// exponential cutoffs vanish with all derivatives at their radii, and the
// joint Theta factor keeps the decay condition in both arguments.  The
// radial well m is supported below rb (between the two nearest shells) so
// it acts as a nearest-bond spring; the pure angular form (kappa = 0)
// leaves the lattice with no bond-stretching stiffness.
class ThreeBodyPotential {
 public:
  ThreeBodyPotential(double lambda, double gamma, double r_cut, double kappa = 0.0,
                     double bond_q = 4.0, double bond_r0 = 1.0 / kSqrt3, double bond_rcut = 0.95)
      : lambda_(lambda),
        gamma_(gamma),
        r_cut_(r_cut),
        kappa_(kappa),
        q_(bond_q),
        r0_(bond_r0),
        rb_(bond_rcut) {
    if (r_cut <= 0) throw InvalidArgument("ThreeBodyPotential: r_cut must be positive");
  }

  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }
  double r_cut() const { return r_cut_; }
  double kappa() const { return kappa_; }

  // order: 0 value only, 1 +gradients, 2 +Hessian blocks.
  ThreeBodyEval eval(const Vec2& rho1, const Vec2& rho2, int order = 2) const {
    const double r1 = rho1.norm();
    const double r2 = rho2.norm();
    if (r1 < kSingularTol || r2 < kSingularTol)
      throw InvalidArgument("ThreeBodyPotential: singular configuration (|rho| ~ 0)");

    ThreeBodyEval out;
    if (r1 >= r_cut_ || r2 >= r_cut_) return out;

    const Cut c1 = cut(r1);
    const Cut c2 = cut(r2);
    const Vec2 u1 = rho1 / r1;
    const Vec2 u2 = rho2 / r2;
    const double cth = u1.dot(u2);
    const double b = cth + 1.0 / 3.0;

    const Bond m1 = bond(r1);
    const Bond m2 = bond(r2);
    const double G = lambda_ * b * b + 0.5 * kappa_ * (m1.v + m2.v);

    out.value = c1.v * c2.v * G;
    if (order < 1) return out;

    const double Bp = lambda_ * 2.0 * b;  // dG/dcos
    const double Bpp = lambda_ * 2.0;
    const Vec2 dc1 = (u2 - cth * u1) / r1;  // grad_rho1 cos(theta)
    const Vec2 dc2 = (u1 - cth * u2) / r2;
    const Vec2 dG1 = Bp * dc1 + 0.5 * kappa_ * m1.d * u1;  // grad_rho1 G
    const Vec2 dG2 = Bp * dc2 + 0.5 * kappa_ * m2.d * u2;

    out.g1 = c1.d * c2.v * G * u1 + c1.v * c2.v * dG1;
    out.g2 = c1.v * c2.d * G * u2 + c1.v * c2.v * dG2;
    if (order < 2) return out;

    const Mat2 P1 = (Mat2::Identity() - u1 * u1.transpose()) / r1;
    const Mat2 P2 = (Mat2::Identity() - u2 * u2.transpose()) / r2;

    // Hessian of cos(theta) in rho1 twice:
    //   -(u1 dc1^T + dc1 u1^T)/r1 - cth*(I - u1 u1^T)/r1^2
    const Mat2 hc11 = -(u1 * dc1.transpose() + dc1 * u1.transpose()) / r1 - (cth / r1) * P1;
    const Mat2 hc22 = -(u2 * dc2.transpose() + dc2 * u2.transpose()) / r2 - (cth / r2) * P2;
    // Mixed block: (I - u2 u2^T - u1 u1^T + cth u1 u2^T)/(r1 r2)
    const Mat2 hc12 = (Mat2::Identity() - u2 * u2.transpose() - u1 * u1.transpose() +
                       cth * u1 * u2.transpose()) /
                      (r1 * r2);

    const Mat2 hG11 = Bpp * dc1 * dc1.transpose() + Bp * hc11 +
                      0.5 * kappa_ * (m1.dd * u1 * u1.transpose() + m1.d * P1);
    const Mat2 hG22 = Bpp * dc2 * dc2.transpose() + Bp * hc22 +
                      0.5 * kappa_ * (m2.dd * u2 * u2.transpose() + m2.d * P2);
    const Mat2 hG12 = Bpp * dc1 * dc2.transpose() + Bp * hc12;

    out.d20 = c1.dd * c2.v * G * u1 * u1.transpose() + c1.d * c2.v * G * P1 +
              c1.d * c2.v * (u1 * dG1.transpose() + dG1 * u1.transpose()) + c1.v * c2.v * hG11;
    out.d02 = c1.v * c2.dd * G * u2 * u2.transpose() + c1.v * c2.d * G * P2 +
              c1.v * c2.d * (u2 * dG2.transpose() + dG2 * u2.transpose()) + c1.v * c2.v * hG22;
    out.d11 = c1.d * c2.d * G * u1 * u2.transpose() + c1.d * c2.v * u1 * dG2.transpose() +
              c1.v * c2.d * dG1 * u2.transpose() + c1.v * c2.v * hG12;
    return out;
  }

  static constexpr double kSingularTol = 1e-9;

 private:
  struct Cut {
    double v, d, dd;
  };
  Cut cut(double r) const {
    const double w = r - r_cut_;  // negative inside
    const double e = std::exp(gamma_ / w);
    const double a = -gamma_ / (w * w);
    return {e, e * a, e * (a * a + 2.0 * gamma_ / (w * w * w))};
  }

  struct Bond {
    double v = 0, d = 0, dd = 0;
  };
  Bond bond(double r) const {
    if (kappa_ == 0.0 || r >= rb_) return {};
    const double e1 = std::exp(-q_ * (r - r0_));
    const double e2 = e1 * e1;
    const double m = e2 - 2.0 * e1;
    const double dm = 2.0 * q_ * (e1 - e2);
    const double ddm = 2.0 * q_ * q_ * (2.0 * e2 - e1);
    const double w = r - rb_;
    const double x = std::exp(gamma_ / w);
    const double a = -gamma_ / (w * w);
    const double dx = x * a;
    const double ddx = x * (a * a + 2.0 * gamma_ / (w * w * w));
    return {m * x, dm * x + m * dx, ddm * x + 2.0 * dm * dx + m * ddx};
  }

  double lambda_;
  double gamma_;
  double r_cut_;
  double kappa_;
  double q_;
  double r0_;
  double rb_;
};

struct InterEval {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

// Morse pair potential for the inter-layer interaction, truncated with a
// C^2 quintic blend over the last `blend_width` before r_cut.  The
// two-argument form feeds an in-plane offset xi through the 3D distance
// r = sqrt(|xi|^2 + d_z^2).
class TwoBodyPotential {
 public:
  TwoBodyPotential(double D_e, double c, double r_e, double d_z, double r_cut,
                   double blend_width = 0.5)
      : De_(D_e), c_(c), re_(r_e), dz_(d_z), r_cut_(r_cut), blend_(blend_width) {
    if (d_z <= 0) throw InvalidArgument("TwoBodyPotential: d_z must be positive");
    if (r_cut <= r_e) throw InvalidArgument("TwoBodyPotential: r_cut must exceed r_e");
    if (blend_width <= 0 || blend_width >= r_cut)
      throw InvalidArgument("TwoBodyPotential: bad blend width");
  }

  double D_e() const { return De_; }
  double c() const { return c_; }
  double r_e() const { return re_; }
  double d_z() const { return dz_; }
  double r_cut() const { return r_cut_; }

  TwoBodyPotential with_D_e(double D_e) const {
    TwoBodyPotential p = *this;
    p.De_ = D_e;
    return p;
  }

  // V_d(r) with radial derivatives.
  void eval_r(double r, double& v, double& dv, double& ddv) const {
    if (r >= r_cut_) {
      v = dv = ddv = 0.0;
      return;
    }
    const double e1 = std::exp(-c_ * (r - re_));
    const double e2 = e1 * e1;
    double m = De_ * (e2 - 2.0 * e1);
    double dm = 2.0 * c_ * De_ * (e1 - e2);
    double ddm = 2.0 * c_ * c_ * De_ * (2.0 * e2 - e1);
    const double r1 = r_cut_ - blend_;
    if (r <= r1) {
      v = m;
      dv = dm;
      ddv = ddm;
      return;
    }
    const double t = (r - r1) / blend_;
    const double s = 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    const double ds = -30.0 * t * t * (1.0 - t) * (1.0 - t) / blend_;
    const double dds = -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (blend_ * blend_);
    v = m * s;
    dv = dm * s + m * ds;
    ddv = ddm * s + 2.0 * dm * ds + m * dds;
  }

  double value_r(double r) const {
    double v, dv, ddv;
    eval_r(r, v, dv, ddv);
    return v;
  }

  // V_d as a function of the in-plane offset, through the 3D distance.
  InterEval eval_xi(const Vec2& xi, int order = 2) const {
    const double rho2 = xi.squaredNorm();
    const double r = std::sqrt(rho2 + dz_ * dz_);
    double v, dv, ddv;
    eval_r(r, v, dv, ddv);
    InterEval out;
    out.value = v;
    if (order < 1) return out;
    out.grad = (dv / r) * xi;
    if (order < 2) return out;
    out.hess = (dv / r) * Mat2::Identity() + ((ddv - dv / r) / (r * r)) * xi * xi.transpose();
    return out;
  }

 private:
  double De_, c_, re_, dz_, r_cut_, blend_;
};

// Rescaled view U = eps^-2 V_d used by the continuum-side formulas.
class RescaledInterlayer {
 public:
  RescaledInterlayer(const TwoBodyPotential& pot, double epsilon)
      : pot_(&pot), inv_eps2_(1.0 / (epsilon * epsilon)) {}

  InterEval eval_xi(const Vec2& xi, int order = 2) const {
    InterEval e = pot_->eval_xi(xi, order);
    e.value *= inv_eps2_;
    e.grad *= inv_eps2_;
    e.hess *= inv_eps2_;
    return e;
  }

 private:
  const TwoBodyPotential* pot_;
  double inv_eps2_;
};

}  // namespace dislocore
