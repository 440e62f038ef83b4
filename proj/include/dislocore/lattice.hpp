#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "dislocore/common.hpp"
#include "dislocore/potentials.hpp"

namespace dislocore {

enum class Sublattice : std::uint8_t { A = 0, B = 1 };
enum class Layer : std::uint8_t { Upper = 0, Lower = 1 };

inline const char* name(Sublattice s) { return s == Sublattice::A ? "A" : "B"; }
inline const char* name(Layer l) { return l == Layer::Upper ? "+" : "-"; }

// AB-stacked hexagonal bilayer geometry.  Basis e1 = a(1,0),
// e2 = a(1/2, sqrt3/2); intra-layer shift p = a(1/2, sqrt3/6); inter-layer
// center shift d = a(1/2, -sqrt3/6).  Note p + d = e1, so the lower-layer B
// sublattice sits directly under the upper-layer A sublattice.
struct LatticeSpec {
  double a = 1.0;
  Vec2 e1, e2, p, d;
  double layer_gap = 1.0 / kSqrt3;  // d_z; planes at z = +- d_z/2

  static LatticeSpec hexagonal_bilayer(double a, double layer_gap) {
    if (a <= 0 || layer_gap <= 0) throw InvalidArgument("LatticeSpec: lengths must be positive");
    LatticeSpec s;
    s.a = a;
    s.e1 = a * Vec2(1.0, 0.0);
    s.e2 = a * Vec2(0.5, kSqrt3 / 2.0);
    s.p = a * Vec2(0.5, kSqrt3 / 6.0);
    s.d = a * Vec2(0.5, -kSqrt3 / 6.0);
    s.layer_gap = layer_gap;
    return s;
  }

  Vec2 cell_position(int v1, int v2) const { return v1 * e1 + v2 * e2; }

  // In-plane offset of a (sublattice, layer) site relative to its cell
  // origin.  Lower-layer B uses p + d = e1.
  Vec2 site_offset(Sublattice s, Layer l) const {
    if (l == Layer::Upper) return s == Sublattice::A ? Vec2(0, 0) : p;
    return s == Sublattice::A ? d : Vec2(p + d);
  }
};

// Integer cell index.
struct Cell {
  int v1 = 0;
  int v2 = 0;
  friend bool operator==(const Cell& a, const Cell& b) { return a.v1 == b.v1 && a.v2 == b.v2; }
};

struct AtomIndex {
  Cell cell;
  Sublattice sublattice = Sublattice::A;
  Layer layer = Layer::Upper;
};

// One entry of a translation-invariant neighbor list: partner cell is
// self + (dv1, dv2); `geom` is the in-plane geometric offset (partner
// position minus own position) in units of a.
struct NeighborOffset {
  int dv1, dv2;
  Vec2 geom;
};

// Which three-body interactions are kept.  `NearestOnly` keeps only the
// closed nearest-neighbor triangles (the twelve triangles around each
// atom), used for the zero-stability-gap construction.
enum class NeighborPolicy { Full, NearestOnly };

// Translation-invariant interaction offset lists for the bilayer.
struct PairLists {
  // intra-layer single-edge lists (relative to an A-type center; the
  // B-centered lists mirror these)
  std::vector<NeighborOffset> aa;  // same-sublattice edges s, |s| < r3_cut
  std::vector<NeighborOffset> ab;  // cell offsets s with |s + p| < r3_cut (edge s+p)

  // ordered pair lists for the three-body sums
  struct Pair {
    int i, j;  // indices into aa/ab lists per the combination type
  };
  std::vector<Pair> aaa;  // (aa[i], aa[j]), i != j, filtered by policy
  std::vector<Pair> aab;  // (ab[i] first edge, aa[j] second edge)

  // inter-layer cell-offset lists per row type; geom = upper in-plane
  // position minus lower in-plane position
  std::vector<NeighborOffset> apam;  // A+ A-
  std::vector<NeighborOffset> apbm;  // A+ B-  (vertically aligned columns)
  std::vector<NeighborOffset> bpam;  // B+ A-
  std::vector<NeighborOffset> bpbm;  // B+ B-

  NeighborPolicy policy = NeighborPolicy::Full;
};

namespace detail {

inline std::vector<NeighborOffset> scan_offsets(const LatticeSpec& spec, const Vec2& base,
                                                double radius, bool exclude_zero) {
  std::vector<NeighborOffset> out;
  const int box = static_cast<int>(std::ceil(radius / spec.a * 1.5)) + 2;
  for (int v2 = -box; v2 <= box; ++v2)
    for (int v1 = -box; v1 <= box; ++v1) {
      const Vec2 g = spec.cell_position(v1, v2) + base;
      const double n = g.norm();
      if (n > radius) continue;
      if (exclude_zero && n < 1e-12) continue;
      out.push_back({v1, v2, g});
    }
  return out;
}

}  // namespace detail

// Builds the intra-layer pair lists for a given three-body cutoff and the
// inter-layer offset lists for a given truncation radius (3D).
inline PairLists build_pair_lists(const LatticeSpec& spec, double r3_cut, double inter_cut,
                                  NeighborPolicy policy = NeighborPolicy::Full) {
  PairLists pl;
  pl.policy = policy;
  const double a = spec.a;

  pl.aa = detail::scan_offsets(spec, Vec2(0, 0), r3_cut, true);
  pl.ab = detail::scan_offsets(spec, spec.p, r3_cut, false);

  if (policy == NeighborPolicy::NearestOnly) {
    auto keep_norm = [&](std::vector<NeighborOffset>& v, double target) {
      std::vector<NeighborOffset> kept;
      for (const auto& o : v)
        if (std::abs(o.geom.norm() - target) < 1e-9 * a) kept.push_back(o);
      v = std::move(kept);
    };
    keep_norm(pl.aa, a);
    keep_norm(pl.ab, a / kSqrt3);
  }

  const double nn_ab = a / kSqrt3;
  for (int i = 0; i < static_cast<int>(pl.aa.size()); ++i)
    for (int j = 0; j < static_cast<int>(pl.aa.size()); ++j) {
      if (i == j) continue;
      if (policy == NeighborPolicy::NearestOnly) {
        const double side = (pl.aa[i].geom - pl.aa[j].geom).norm();
        if (std::abs(side - a) > 1e-9 * a) continue;  // closed unit triangle only
      }
      pl.aaa.push_back({i, j});
    }
  for (int i = 0; i < static_cast<int>(pl.ab.size()); ++i)
    for (int j = 0; j < static_cast<int>(pl.aa.size()); ++j) {
      if (policy == NeighborPolicy::NearestOnly) {
        const double side = (pl.ab[i].geom - pl.aa[j].geom).norm();
        if (std::abs(side - nn_ab) > 1e-9 * a) continue;
      }
      pl.aab.push_back({i, j});
    }

  if (inter_cut > spec.layer_gap) {
    const double rho_max = std::sqrt(inter_cut * inter_cut - spec.layer_gap * spec.layer_gap);
    auto inter = [&](Sublattice up, Sublattice low) {
      const Vec2 base = spec.site_offset(up, Layer::Upper) - spec.site_offset(low, Layer::Lower);
      // pair (upper cell v, lower cell v - s): offset = base + s
      std::vector<NeighborOffset> out;
      const int box = static_cast<int>(std::ceil(rho_max / a * 1.5)) + 2;
      for (int v2 = -box; v2 <= box; ++v2)
        for (int v1 = -box; v1 <= box; ++v1) {
          const Vec2 g = spec.cell_position(v1, v2) + base;
          if (g.norm() <= rho_max) out.push_back({v1, v2, g});
        }
      return out;
    };
    pl.apam = inter(Sublattice::A, Sublattice::A);
    pl.apbm = inter(Sublattice::A, Sublattice::B);
    pl.bpam = inter(Sublattice::B, Sublattice::A);
    pl.bpbm = inter(Sublattice::B, Sublattice::B);
  }
  return pl;
}

// A finite computational window: periodic in y (n_y copies of the minimal
// period sqrt(3) a realized as v2 in [0, 2 n_y)), truncated in x at |x| <= L
// with a clamped collar of width `collar` at the outer edge.
//
// Atom storage is per (sublattice, layer): rows v2 in [0, 2 n_y), each row
// holding the contiguous v1 range whose in-plane x lies in [-L, L].
class TruncatedLattice {
 public:
  struct RowTable {
    std::vector<int> v1_min, v1_max, start;  // per v2 row
    int total = 0;
  };

  TruncatedLattice(const LatticeSpec& spec, double L, int n_y, double r_cut, double r3_cut,
                   NeighborPolicy policy = NeighborPolicy::Full)
      : spec_(spec), L_(L), n_y_(n_y), r_cut_(r_cut) {
    if (L <= 0 || n_y < 1 || r_cut <= 0)
      throw InvalidArgument("TruncatedLattice: L, n_y, R_cut must be positive");
    if (!(L > 2 * r_cut)) throw InvalidArgument("TruncatedLattice: require L > 2 R_cut");
    if (r_cut < spec.a) throw InvalidArgument("TruncatedLattice: require R_cut >= a");
    pairs_ = build_pair_lists(spec, r3_cut, r_cut, policy);
    collar_ = r_cut;
    rows_v2_ = 2 * n_y;
    for (int sl = 0; sl < 2; ++sl)
      for (int ly = 0; ly < 2; ++ly) {
        RowTable& t = table(Sublattice(sl), Layer(ly));
        t.v1_min.resize(rows_v2_);
        t.v1_max.resize(rows_v2_);
        t.start.resize(rows_v2_ + 1, 0);
        const double offx = spec_.site_offset(Sublattice(sl), Layer(ly)).x() / spec_.a;
        for (int v2 = 0; v2 < rows_v2_; ++v2) {
          // x(v1) = (v1 + v2/2 + offx) * a
          const double base = v2 * 0.5 + offx;
          t.v1_min[v2] = static_cast<int>(std::ceil(-L / spec_.a - base - 1e-12));
          t.v1_max[v2] = static_cast<int>(std::floor(L / spec_.a - base + 1e-12));
          if (t.v1_max[v2] < t.v1_min[v2])
            throw InvalidArgument("TruncatedLattice: window too small for a full row");
          t.start[v2 + 1] = t.start[v2] + (t.v1_max[v2] - t.v1_min[v2] + 1);
        }
        t.total = t.start[rows_v2_];
        base_[sl][ly] = total_;
        total_ += t.total;
      }
  }

  const LatticeSpec& spec() const { return spec_; }
  const PairLists& pairs() const { return pairs_; }
  double half_width() const { return L_; }
  double cutoff() const { return r_cut_; }
  double collar_width() const { return collar_; }
  int n_y() const { return n_y_; }
  int rows_v2() const { return rows_v2_; }
  int atom_count() const { return total_; }
  double period_height() const { return n_y_ * kSqrt3 * spec_.a; }

  // Wraps a cell into the stored v2 range using the lattice period
  // sqrt(3) a = -e1 + 2 e2 per minimal period: (v1, v2) ~ (v1 + n_y, v2 - 2 n_y).
  Cell wrap(Cell c) const {
    while (c.v2 < 0) {
      c.v2 += rows_v2_;
      c.v1 -= n_y_;
    }
    while (c.v2 >= rows_v2_) {
      c.v2 -= rows_v2_;
      c.v1 += n_y_;
    }
    return c;
  }

  // Global atom id, or -1 if the (wrapped) cell falls outside the window.
  int atom_id(Sublattice s, Layer l, Cell c) const {
    c = wrap(c);
    const RowTable& t = table(s, l);
    if (c.v1 < t.v1_min[c.v2] || c.v1 > t.v1_max[c.v2]) return -1;
    return base_[int(s)][int(l)] + t.start[c.v2] + (c.v1 - t.v1_min[c.v2]);
  }

  AtomIndex atom(int id) const {
    for (int sl = 0; sl < 2; ++sl)
      for (int ly = 0; ly < 2; ++ly) {
        const RowTable& t = table(Sublattice(sl), Layer(ly));
        const int local = id - base_[sl][ly];
        if (local < 0 || local >= t.total) continue;
        int v2 = static_cast<int>(std::upper_bound(t.start.begin(), t.start.end(), local) -
                                  t.start.begin()) -
                 1;
        return {{t.v1_min[v2] + (local - t.start[v2]), v2}, Sublattice(sl), Layer(ly)};
      }
    throw InvalidArgument("TruncatedLattice::atom: id out of range");
  }

  // In-plane position (units of length); exact half-integer structure in x.
  Vec2 position(const AtomIndex& ai) const {
    return spec_.cell_position(ai.cell.v1, ai.cell.v2) + spec_.site_offset(ai.sublattice, ai.layer);
  }
  double x_of(Sublattice s, Layer l, Cell c) const {
    return (c.v1 + 0.5 * c.v2) * spec_.a + spec_.site_offset(s, l).x();
  }

  // Twice the x coordinate in units of a is integral; exact arithmetic for
  // the dislocation-condition classification.
  long long two_x_int(Sublattice s, Layer l, Cell c) const {
    const double offx = spec_.site_offset(s, l).x() / spec_.a;  // 0, 1/2 or 1
    return 2ll * c.v1 + c.v2 + llround(2.0 * offx);
  }

  bool is_boundary(const AtomIndex& ai) const {
    return std::abs(position(ai).x()) > L_ - collar_;
  }
  // Interior atoms have their full interaction shell inside the window.
  bool is_interior(const AtomIndex& ai) const { return !is_boundary(ai); }

  // Iterate every stored atom of one (sublattice, layer).
  template <class F>
  void for_each_cell(Sublattice s, Layer l, F&& f) const {
    const RowTable& t = table(s, l);
    for (int v2 = 0; v2 < rows_v2_; ++v2)
      for (int v1 = t.v1_min[v2]; v1 <= t.v1_max[v2]; ++v1)
        f(Cell{v1, v2}, base_[int(s)][int(l)] + t.start[v2] + (v1 - t.v1_min[v2]));
  }

  const RowTable& table(Sublattice s, Layer l) const { return tables_[int(s)][int(l)]; }

 private:
  RowTable& table(Sublattice s, Layer l) { return tables_[int(s)][int(l)]; }

  LatticeSpec spec_;
  double L_;
  int n_y_;
  double r_cut_;
  double collar_;
  int rows_v2_ = 0;
  int total_ = 0;
  PairLists pairs_;
  RowTable tables_[2][2];
  int base_[2][2] = {{0, 0}, {0, 0}};
};

// Default interaction truncation radius: where the Morse tail drops below
// `tol` times the nearest-pair magnitude (decay-rule realization of the
// summability assumption).
inline double default_interaction_cutoff(const LatticeSpec& spec, double c, double r_e,
                                         double tol = 1e-10) {
  // |V_morse(r)| ~ 2 De exp(-c (r - r_e)) for r >> r_e; nearest pair sits at
  // distance >= d_z with |V| <= De.
  double r = r_e + std::log(2.0 / tol) / c;
  r = std::max(r, 2.0 * spec.a);
  return r;
}

// Coarse triangulation of one layer on the base sublattice: per cell one
// "same" triangle (all base-sublattice vertices) and one "mixed" triangle
// containing the other sublattice's atom strictly inside (at its centroid).
// Vertices keep their unwrapped cells so triangles crossing the periodic
// y-seam retain consistent geometry; atom ids are the wrapped lookups.
struct Triangulation {
  struct Vert {
    Cell cell;    // unwrapped, for geometry
    int atom = -1;  // wrapped atom id, for field values
  };
  struct Tri {
    std::array<Vert, 3> verts;
    bool mixed = false;
    Vert interior;  // for mixed triangles: the contained other-sublattice atom
  };
  Sublattice base = Sublattice::A;
  Layer layer = Layer::Upper;
  std::vector<Tri> tris;
};

// Builds the coarse triangulation for the window (triangles whose vertices
// are all stored).  For base A the mixed triangle of cell v is
// {v, v+e1, v+e2} with the B atom at the centroid; for base B the mixed one
// is the "down" triangle containing the A atom of cell v+e1+e2.
inline Triangulation triangulate(const TruncatedLattice& lat, Sublattice base,
                                 Layer layer = Layer::Upper) {
  Triangulation T;
  T.base = base;
  T.layer = layer;
  const Sublattice other = base == Sublattice::A ? Sublattice::B : Sublattice::A;
  bool any = false;
  lat.for_each_cell(base, layer, [&](Cell c, int id0) {
    const Cell c10{c.v1 + 1, c.v2}, c01{c.v1, c.v2 + 1}, c11{c.v1 + 1, c.v2 + 1};
    const int id10 = lat.atom_id(base, layer, c10);
    const int id01 = lat.atom_id(base, layer, c01);
    if (id10 < 0 || id01 < 0) return;
    const Triangulation::Vert w0{c, id0}, w1{c10, id10}, w2{c01, id01};
    Triangulation::Tri up{{w0, w1, w2}, false, {}};
    if (base == Sublattice::A) {
      // B atom of cell c sits at the centroid of {v, v+e1, v+e2}
      const int idb = lat.atom_id(other, layer, c);
      up.mixed = idb >= 0;
      if (up.mixed) up.interior = {c, idb};
    }
    T.tris.push_back(up);
    any = true;
    const int id11 = lat.atom_id(base, layer, c11);
    if (id11 < 0) return;
    Triangulation::Tri down{{w1, w2, {c11, id11}}, false, {}};
    if (base == Sublattice::B) {
      // A atom of cell c+e1+e2 sits at the centroid of the down triangle
      const int ida = lat.atom_id(other, layer, c11);
      down.mixed = ida >= 0;
      if (down.mixed) down.interior = {c11, ida};
    }
    T.tris.push_back(down);
  });
  if (!any) throw InvalidArgument("triangulate: window too small for one full triangle row");
  return T;
}

// In-plane position of a triangulation vertex from its unwrapped cell.
inline Vec2 vert_position(const LatticeSpec& spec, const Triangulation& T,
                          const Triangulation::Vert& v, bool interior_vertex = false,
                          Sublattice interior_sub = Sublattice::B) {
  const Sublattice s = interior_vertex ? interior_sub : T.base;
  return spec.cell_position(v.cell.v1, v.cell.v2) + spec.site_offset(s, T.layer);
}

}  // namespace dislocore
