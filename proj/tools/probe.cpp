// Scratch diagnostics for potential-parameter screening.
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "dislocore/lattice.hpp"
#include "dislocore/material.hpp"

using namespace dislocore;

// Smallest eigenvalues of the single-layer intra-layer Hessian (x-displacements
// only) on an M x M torus of cells.
static void phonon_probe(const ThreeBodyPotential& V, const LatticeSpec& spec,
                         const PairLists& pl, int M) {
  const int n = 2 * M * M;  // A and B fields
  auto idx = [&](int sub, int v1, int v2) {
    v1 = ((v1 % M) + M) % M;
    v2 = ((v2 % M) + M) % M;
    return sub * M * M + v2 * M + v1;
  };
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  auto add_pair = [&](int ia, int i1, int i2, double h11, double h12, double h22, double w) {
    // energy w * [h11 d1^2 + 2 h12 d1 d2 + h22 d2^2], d_k = u_{ik} - u_{ia}
    const int id[3] = {ia, i1, i2};
    double loc[3][3] = {{h11 + 2 * h12 + h22, -(h11 + h12), -(h12 + h22)},
                        {-(h11 + h12), h11, h12},
                        {-(h12 + h22), h12, h22}};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) H(id[r], id[c]) += 2.0 * w * loc[r][c];
  };
  const double a = spec.a;
  for (int v2 = 0; v2 < M; ++v2)
    for (int v1 = 0; v1 < M; ++v1) {
      for (const auto& pr : pl.aaa) {
        const auto& s1 = pl.aa[pr.i];
        const auto& s2 = pl.aa[pr.j];
        const ThreeBodyEval e = V.eval(s1.geom / a, s2.geom / a, 2);
        // A-centered and B-centered same-sublattice terms
        add_pair(idx(0, v1, v2), idx(0, v1 + s1.dv1, v2 + s1.dv2), idx(0, v1 + s2.dv1, v2 + s2.dv2),
                 e.d20(0, 0), e.d11(0, 0), e.d02(0, 0), 1.0 / 6.0);
        add_pair(idx(1, v1, v2), idx(1, v1 + s1.dv1, v2 + s1.dv2), idx(1, v1 + s2.dv1, v2 + s2.dv2),
                 e.d20(0, 0), e.d11(0, 0), e.d02(0, 0), 1.0 / 6.0);
      }
      for (const auto& pr : pl.aab) {
        const auto& s1 = pl.ab[pr.i];
        const auto& s2 = pl.aa[pr.j];
        const ThreeBodyEval e = V.eval(s1.geom / a, s2.geom / a, 2);
        add_pair(idx(0, v1, v2), idx(1, v1 + s1.dv1, v2 + s1.dv2), idx(0, v1 + s2.dv1, v2 + s2.dv2),
                 e.d20(0, 0), e.d11(0, 0), e.d02(0, 0), 0.5);
        const ThreeBodyEval eb = V.eval(-s1.geom / a, s2.geom / a, 2);
        add_pair(idx(1, v1, v2), idx(0, v1 - s1.dv1, v2 - s1.dv2), idx(1, v1 + s2.dv1, v2 + s2.dv2),
                 eb.d20(0, 0), eb.d11(0, 0), eb.d02(0, 0), 0.5);
      }
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
  printf("  phonon probe (torus %dx%d): lowest eigs:", M, M);
  for (int i = 0; i < 5; ++i) printf(" %.3e", es.eigenvalues()(i));
  printf("\n");
}

int main(int argc, char** argv) {
  double dz = argc > 1 ? atof(argv[1]) : 1.0 / kSqrt3;
  double re = argc > 2 ? atof(argv[2]) : 1.0 / kSqrt3;
  double c = argc > 3 ? atof(argv[3]) : 4.0;
  double kappa = argc > 4 ? atof(argv[4]) : 0.0;
  double bond_q = argc > 5 ? atof(argv[5]) : 6.0;

  const LatticeSpec spec = LatticeSpec::hexagonal_bilayer(1.0, dz);
  const ThreeBodyPotential V(1.0, 1.0, 1.8, kappa, bond_q, 1.0 / kSqrt3, 0.95);
  const double rcut = default_interaction_cutoff(spec, c, re);
  const TwoBodyPotential Vd(1.0, c, re, dz, rcut);
  printf("dz=%.4f re=%.4f c=%.2f rcut=%.3f\n", dz, re, c, rcut);

  const PairLists pl = build_pair_lists(spec, 1.8, rcut);
  printf("  aa=%zu ab=%zu aaa-pairs=%zu aab-pairs=%zu inter apam=%zu apbm=%zu\n", pl.aa.size(),
         pl.ab.size(), pl.aaa.size(), pl.aab.size(), pl.apam.size(), pl.apbm.size());

  const ElasticConstants ec = elastic_constants_raw(V, spec, pl);
  printf("  alpha1=%.6f alpha2=%.6f cross=%.3e alpha=%.6f\n", ec.alpha1, ec.alpha2, ec.cross,
         ec.alpha());

  const GammaSurface gs(spec, Vd, rcut);
  const Mat2 h = gs.eval(Vec2::Zero(), 2).hess;
  Eigen::SelfAdjointEigenSolver<Mat2> es(h);
  printf("  gamma hess eigs: %.6f %.6f  (gxx=%.6f gyy=%.6f gxy=%.2e)\n", es.eigenvalues()(0),
         es.eigenvalues()(1), h(0, 0), h(1, 1), h(0, 1));

  if (es.eigenvalues()(0) > 0) {
    const double eps = epsilon(ec, gs);
    printf("  eps(De=1) = %.6f\n", eps);
  }
  printf("  gamma_A_xx(0)=%.6f gamma_B_xx(0)=%.6f\n", gs.eval_A(Vec2::Zero(), 2).hess(0, 0),
         gs.eval_B(Vec2::Zero(), 2).hess(0, 0));

  // coarse gamma scan over the unit cell
  double gmin = 1e300, gmax = -1e300;
  int n = 60;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 phi = (double(i) / n) * spec.e1 + (double(j) / n) * spec.e2;
      const double g = gs.value(phi);
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
    }
  printf("  gamma range on cell: [%.6f, %.6f]; gamma(0.5,0)=%.6f gamma(e1)=%.2e\n", gmin, gmax,
         gs.value(Vec2(0.5, 0)), gs.value(Vec2(1.0, 0)));

  phonon_probe(V, spec, pl, 6);
  return 0;
}
