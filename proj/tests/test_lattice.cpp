#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "dislocore/lattice.hpp"

using namespace dislocore;

namespace {
LatticeSpec spec() { return LatticeSpec::hexagonal_bilayer(1.0, 1.0); }
}

TEST_CASE("shift vectors have length a/sqrt(3)") {
  const LatticeSpec s = spec();
  REQUIRE_THAT(s.p.norm(), Catch::Matchers::WithinRel(1.0 / kSqrt3, 1e-12));
  REQUIRE_THAT(s.d.norm(), Catch::Matchers::WithinRel(1.0 / kSqrt3, 1e-12));
  REQUIRE_THAT(s.e1.norm(), Catch::Matchers::WithinRel(1.0, 1e-14));
  REQUIRE_THAT(s.e2.norm(), Catch::Matchers::WithinRel(1.0, 1e-14));
  REQUIRE_THAT(s.e1.dot(s.e2), Catch::Matchers::WithinRel(0.5, 1e-14));  // 60 degrees
  // p + d = e1: the lower B sublattice sits under the upper A sublattice
  REQUIRE((s.p + s.d - s.e1).norm() < 1e-15);
}

TEST_CASE("neighbor shells") {
  const LatticeSpec s = spec();
  // cutoff 1.01a: exactly 6 same-sublattice neighbors
  REQUIRE(build_pair_lists(s, 1.01, 0).aa.size() == 6);
  // cutoff 0.6a: exactly 3 mixed neighbors at distance a/sqrt(3)
  const PairLists pl06 = build_pair_lists(s, 0.6, 0);
  REQUIRE(pl06.ab.size() == 3);
  for (const auto& o : pl06.ab)
    REQUIRE_THAT(o.geom.norm(), Catch::Matchers::WithinRel(1.0 / kSqrt3, 1e-12));
}

TEST_CASE("neighbor list symmetry: s in N iff -s in N") {
  const PairLists pl = build_pair_lists(spec(), 1.8, 6.9);
  std::set<std::pair<int, int>> aa;
  for (const auto& o : pl.aa) aa.insert({o.dv1, o.dv2});
  for (const auto& o : pl.aa) REQUIRE(aa.count({-o.dv1, -o.dv2}) == 1);
}

TEST_CASE("3-fold rotation maps intra-layer neighbor multisets to themselves") {
  const PairLists pl = build_pair_lists(spec(), 1.8, 6.9);
  auto rot = [](const Vec2& v) {
    const double c = -0.5, s = kSqrt3 / 2.0;
    return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
  };
  auto check = [&](const std::vector<NeighborOffset>& list) {
    for (const auto& o : list) {
      const Vec2 r = rot(o.geom);
      bool found = false;
      for (const auto& q : list)
        if ((q.geom - r).norm() < 1e-12) found = true;
      REQUIRE(found);
    }
  };
  check(pl.aa);
  check(pl.ab);  // rotation about an A atom also permutes the B shell
}

TEST_CASE("inter-layer offsets match a brute-force scan") {
  const LatticeSpec s = spec();
  const double rc = 3.0;
  const PairLists pl = build_pair_lists(s, 1.8, rc);
  const double rho_max = std::sqrt(rc * rc - s.layer_gap * s.layer_gap);

  // exhaustive offset enumeration on a 7x7 cell patch around the origin
  auto brute = [&](Sublattice up, Sublattice low) {
    std::vector<Vec2> v;
    const Vec2 base = s.site_offset(up, Layer::Upper) - s.site_offset(low, Layer::Lower);
    for (int v1 = -7; v1 <= 7; ++v1)
      for (int v2 = -7; v2 <= 7; ++v2) {
        const Vec2 g = s.cell_position(v1, v2) + base;
        if (g.norm() <= rho_max) v.push_back(g);
      }
    return v;
  };
  auto matches = [&](const std::vector<NeighborOffset>& cached, std::vector<Vec2> want) {
    REQUIRE(cached.size() == want.size());
    for (const auto& o : cached) {
      bool found = false;
      for (auto& w : want)
        if ((w - o.geom).norm() < 1e-12) found = true;
      REQUIRE(found);
    }
  };
  matches(pl.apam, brute(Sublattice::A, Sublattice::A));
  matches(pl.apbm, brute(Sublattice::A, Sublattice::B));
  matches(pl.bpam, brute(Sublattice::B, Sublattice::A));
  matches(pl.bpbm, brute(Sublattice::B, Sublattice::B));

  // each A+ atom has a vertically aligned B- atom (offset zero)
  bool aligned = false;
  for (const auto& o : pl.apbm)
    if (o.geom.norm() < 1e-14) aligned = true;
  REQUIRE(aligned);
}

TEST_CASE("window construction and position reconstruction") {
  const TruncatedLattice lat(spec(), 12.0, 1, 3.0, 1.8);
  REQUIRE(lat.atom_count() > 0);

  // positions reconstructed from AtomIndex match the direct generator
  int checked = 0;
  for (int v1 = -5; v1 <= 5; ++v1)
    for (int v2 = 0; v2 < lat.rows_v2(); ++v2)
      for (int sl = 0; sl < 2; ++sl)
        for (int ly = 0; ly < 2; ++ly) {
          const int id = lat.atom_id(Sublattice(sl), Layer(ly), {v1, v2});
          if (id < 0) continue;
          const AtomIndex ai = lat.atom(id);
          const Vec2 want = double(v1) * spec().e1 + double(v2) * spec().e2 +
                            spec().site_offset(Sublattice(sl), Layer(ly));
          REQUIRE((lat.position(ai) - want).norm() < 1e-14);
          ++checked;
        }
  REQUIRE(checked > 80);

  // periodic wrap: translation by (0, n_y sqrt(3) a) maps ids to themselves
  lat.for_each_cell(Sublattice::A, Layer::Upper, [&](Cell c, int id) {
    const Cell shifted{c.v1 - lat.n_y(), c.v2 + 2 * lat.n_y()};
    REQUIRE(lat.atom_id(Sublattice::A, Layer::Upper, shifted) == id);
  });

  // boundary collar flags
  int interior = 0, boundary = 0;
  lat.for_each_cell(Sublattice::B, Layer::Lower, [&](Cell c, int id) {
    (lat.is_interior(lat.atom(id)) ? interior : boundary)++;
  });
  REQUIRE(interior > 0);
  REQUIRE(boundary > 0);
}

TEST_CASE("window rejects bad arguments") {
  REQUIRE_THROWS_AS(TruncatedLattice(spec(), -1.0, 1, 3.0, 1.8), InvalidArgument);
  REQUIRE_THROWS_AS(TruncatedLattice(spec(), 12.0, 0, 3.0, 1.8), InvalidArgument);
  REQUIRE_THROWS_AS(TruncatedLattice(spec(), 12.0, 1, -2.0, 1.8), InvalidArgument);
  REQUIRE_THROWS_AS(TruncatedLattice(spec(), 5.0, 1, 3.0, 1.8), InvalidArgument);  // L <= 2 R_cut
  REQUIRE_THROWS_AS(TruncatedLattice(spec(), 2.0, 1, 0.5, 1.8), InvalidArgument);  // R_cut < a
}

TEST_CASE("triangulation tiles the window") {
  const TruncatedLattice lat(spec(), 10.0, 1, 3.0, 1.8);
  const Triangulation TA = triangulate(lat, Sublattice::A);

  int mixed = 0, same = 0;
  for (const auto& t : TA.tris) (t.mixed ? mixed : same)++;
  // interior cells contribute one of each: 2 triangles per cell
  REQUIRE(mixed > 0);
  REQUIRE(std::abs(mixed - same) <= 2 * lat.rows_v2());

  // Delta (twice the triangle area) = sqrt(3)/2 a^2 for same-sublattice triangles
  for (const auto& t : TA.tris) {
    const Vec2 p1 = vert_position(spec(), TA, t.verts[0]);
    const Vec2 p2 = vert_position(spec(), TA, t.verts[1]);
    const Vec2 p3 = vert_position(spec(), TA, t.verts[2]);
    const double delta =
        (p2.x() - p1.x()) * (p3.y() - p1.y()) - (p3.x() - p1.x()) * (p2.y() - p1.y());
    REQUIRE_THAT(std::abs(delta), Catch::Matchers::WithinRel(kSqrt3 / 2.0, 1e-12));
    if (t.mixed) {
      // the interior atom sits at the centroid
      const Vec2 q = vert_position(spec(), TA, t.interior, true,
                                   TA.base == Sublattice::A ? Sublattice::B : Sublattice::A);
      REQUIRE((q - (p1 + p2 + p3) / 3.0).norm() < 1e-12);
    }
  }

  // base-B triangulation: same count, vertex set shifted by p
  const Triangulation TB = triangulate(lat, Sublattice::B);
  REQUIRE(std::abs(int(TB.tris.size()) - int(TA.tris.size())) <= 4 * lat.rows_v2());
  for (const auto& t : TB.tris)
    for (const auto& v : t.verts) {
      const Vec2 pos = vert_position(spec(), TB, v);
      // every base-B vertex is an A-position + p
      const Vec2 back = pos - spec().p;
      const double f2 = back.y() / (kSqrt3 / 2.0);
      const double f1 = back.x() - 0.5 * f2;
      REQUIRE(std::abs(f1 - std::round(f1)) < 1e-9);
      REQUIRE(std::abs(f2 - std::round(f2)) < 1e-9);
    }
}

TEST_CASE("nearest-only policy keeps the twelve closed triangles") {
  const PairLists pl = build_pair_lists(spec(), 1.8, 0, NeighborPolicy::NearestOnly);
  REQUIRE(pl.aa.size() == 6);
  REQUIRE(pl.ab.size() == 3);
  REQUIRE(pl.aaa.size() == 12);  // 6 closed unit triangles x 2 orderings
  REQUIRE(pl.aab.size() == 6);  // per Remark-style nearest set
}
