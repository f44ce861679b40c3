#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ksplit/dissimilarity.hpp"
#include "ksplit/hull.hpp"
#include "ksplit/hypersimplex.hpp"
#include "ksplit/linalg.hpp"

namespace ksplit {

// The hypersimplex lives in the hyperplane sum x = k, so all geometry runs
// in the chart that drops the last coordinate (an affine bijection on that
// hyperplane).  Points below are chart points of length n-1 unless noted.

inline QVec chart_point(Mask K, int n) {
  QVec y(n - 1);
  for (int i = 1; i < n; ++i) y[i - 1] = mask_contains(K, i) ? 1 : 0;
  return y;
}

inline QVec chart_to_full(const QVec& y, int k) {
  QVec x(y.size() + 1);
  Rational s = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    x[i] = y[i];
    s += y[i];
  }
  x[y.size()] = Rational(k) - s;
  return x;
}

// Affine functional a.y + a0 on the chart.
struct AffineFn {
  QVec coeffs;
  Rational offset;

  Rational eval(const QVec& y) const { return dot(coeffs, y) + offset; }
  bool operator==(const AffineFn& o) const { return coeffs == o.coeffs && offset == o.offset; }
};

// sum_{i in A} x_i - 1 expressed on the chart.
inline AffineFn subset_level_fn(Mask A, int k, int n) {
  AffineFn f;
  f.coeffs.assign(n - 1, Rational(0));
  f.offset = -1;
  for (int i = 1; i < n; ++i)
    if (mask_contains(A, i)) f.coeffs[i - 1] = 1;
  if (mask_contains(A, n)) {
    f.offset += k;
    for (int i = 0; i < n - 1; ++i) f.coeffs[i] -= 1;
  }
  return f;
}

// Closed halfspace fn <= 0 on the chart.
struct HalfSpace {
  AffineFn fn;
};

struct Cell {
  std::vector<int> vertex_ranks;  // sorted colex ranks of the 0/1 vertices
  AffineFn functional;            // supporting functional of the lower facet
  bool has_functional = false;

  mutable std::vector<HalfSpace> facet_cache;
  mutable bool facets_ready = false;

  int min_level(Mask A, const std::vector<Mask>& verts) const {
    int lo = 1 << 30;
    for (int r : vertex_ranks) lo = std::min(lo, mask_size(verts[r] & A));
    return lo;
  }
  int max_level(Mask A, const std::vector<Mask>& verts) const {
    int hi = -1;
    for (int r : vertex_ranks) hi = std::max(hi, mask_size(verts[r] & A));
    return hi;
  }
};

struct Subdivision {
  int k = 0;
  int n = 0;
  std::vector<Cell> cells;  // sorted by vertex rank lists

  std::vector<std::vector<int>> cell_vertex_sets() const {
    std::vector<std::vector<int>> out;
    out.reserve(cells.size());
    for (const Cell& c : cells) out.push_back(c.vertex_ranks);
    return out;
  }

  bool same_cells(const Subdivision& o) const {
    return k == o.k && n == o.n && cell_vertex_sets() == o.cell_vertex_sets();
  }

  bool is_trivial() const { return cells.size() == 1; }

  // Does every cell lie weakly on one side of sum_A x = 1?
  bool refines_subset_hyperplane(Mask A) const {
    std::vector<Mask> verts = all_ksubset_masks(k, n);
    for (const Cell& c : cells)
      if (c.min_level(A, verts) == 0 && c.max_level(A, verts) >= 2) return false;
    return true;
  }
};

inline void sort_cells(std::vector<Cell>& cells) {
  std::sort(cells.begin(), cells.end(),
            [](const Cell& a, const Cell& b) { return a.vertex_ranks < b.vertex_ranks; });
}

// Exact halfspace description of a cell inside the chart, computed on
// demand from its vertex set.
inline const std::vector<HalfSpace>& cell_halfspaces(const Cell& c, int k, int n) {
  if (c.facets_ready) return c.facet_cache;
  std::vector<Mask> verts = all_ksubset_masks(k, n);
  std::vector<QVec> pts;
  pts.reserve(c.vertex_ranks.size());
  for (int r : c.vertex_ranks) pts.push_back(chart_point(verts[r], n));
  for (const Facet& f : convex_hull_facets(pts)) {
    HalfSpace h;
    h.fn.coeffs = f.normal;
    h.fn.offset = -f.offset;
    c.facet_cache.push_back(std::move(h));
  }
  c.facets_ready = true;
  return c.facet_cache;
}

// ---------------------------------------------------------------------------
// Regular subdivisions: project the lower facets of the lifted vertex set.
// ---------------------------------------------------------------------------

inline Subdivision trivial_subdivision(int k, int n) {
  Subdivision s;
  s.k = k;
  s.n = n;
  Cell c;
  long long m = binomial(n, k);
  c.vertex_ranks.resize(m);
  for (long long r = 0; r < m; ++r) c.vertex_ranks[r] = static_cast<int>(r);
  c.functional.coeffs.assign(n - 1, Rational(0));
  c.functional.offset = 0;
  c.has_functional = true;
  s.cells.push_back(std::move(c));
  return s;
}

// The affine interpolant of w, when w is affine (trivial subdivision).
inline std::optional<AffineFn> affine_interpolant(const WeightFunction& w) {
  int n = w.n;
  std::vector<Mask> verts = all_ksubset_masks(w.k, n);
  QMat A;
  QVec b;
  for (size_t r = 0; r < verts.size(); ++r) {
    QVec row = chart_point(verts[r], n);
    row.push_back(1);
    A.push_back(std::move(row));
    b.push_back(w.heights[r]);
  }
  std::optional<QVec> sol = solve_linear(A, b);
  if (!sol) return std::nullopt;
  AffineFn f;
  f.offset = sol->back();
  sol->pop_back();
  f.coeffs = std::move(*sol);
  return f;
}

inline Subdivision regular_subdivision(const WeightFunction& w) {
  int k = w.k, n = w.n;
  if (k <= 0 || k >= n) throw std::invalid_argument("need 0 < k < n");

  if (std::optional<AffineFn> flat = affine_interpolant(w)) {
    Subdivision s = trivial_subdivision(k, n);
    s.cells[0].functional = *flat;
    return s;
  }

  // Scaling the height coordinate by the denominator lcm keeps the lower
  // hull combinatorics and makes every hull computation integral, which is
  // far cheaper than general rational arithmetic.  The supporting
  // functionals get scaled back at the end.
  mpz_class scale = 1;
  for (const Rational& h : w.heights)
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), h.get_den().get_mpz_t());
  Rational scale_q(scale);

  std::vector<Mask> verts = all_ksubset_masks(k, n);
  std::vector<QVec> lifted(verts.size());
  for (size_t r = 0; r < verts.size(); ++r) {
    lifted[r] = chart_point(verts[r], n);
    lifted[r].push_back(w.heights[r] * scale_q);
  }

  Subdivision s;
  s.k = k;
  s.n = n;
  for (const Facet& f : convex_hull_facets(lifted)) {
    const Rational& gh = f.normal.back();
    if (gh >= 0) continue;  // keep lower facets
    Cell c;
    c.vertex_ranks = f.vertices;
    c.functional.coeffs.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) c.functional.coeffs[i] = -f.normal[i] / (gh * scale_q);
    c.functional.offset = f.offset / (gh * scale_q);
    c.has_functional = true;
    s.cells.push_back(std::move(c));
  }
  sort_cells(s.cells);
  return s;
}

// The split subdivision S_A of the hypersimplex: the two closed sides of
// sum_A x = 1, with the supporting functionals of the natural split weight.
inline Subdivision split_subdivision(Mask A, int k, int n) {
  if (!is_split_defining_subset(A, k, n))
    throw std::invalid_argument("subset does not define a split");
  std::vector<Mask> verts = all_ksubset_masks(k, n);
  Subdivision s;
  s.k = k;
  s.n = n;
  Cell low, high;
  for (size_t r = 0; r < verts.size(); ++r) {
    int level = mask_size(verts[r] & A);
    if (level <= 1) low.vertex_ranks.push_back(static_cast<int>(r));
    if (level >= 1) high.vertex_ranks.push_back(static_cast<int>(r));
  }
  AffineFn level_fn = subset_level_fn(A, k, n);
  low.functional.coeffs.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) low.functional.coeffs[i] = -Rational(k) * level_fn.coeffs[i];
  low.functional.offset = -Rational(k) * level_fn.offset;
  low.has_functional = true;  // k*(1 - sum_A x)
  high.functional.coeffs.assign(n - 1, Rational(0));
  high.functional.offset = 0;
  high.has_functional = true;
  s.cells.push_back(std::move(low));
  s.cells.push_back(std::move(high));
  sort_cells(s.cells);
  return s;
}

// ---------------------------------------------------------------------------
// Common refinement via exact halfspace cutting.
// ---------------------------------------------------------------------------

namespace detail {

struct CutVertex {
  QVec y;
  bool integral = false;
  Mask mask = 0;
};

inline CutVertex make_cut_vertex(QVec y, int k, int n) {
  CutVertex v;
  v.integral = true;
  Mask m = 0;
  Rational s = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    s += y[i];
    if (y[i] == 1)
      m |= mask_of(static_cast<int>(i) + 1);
    else if (y[i] != 0)
      v.integral = false;
  }
  Rational last = Rational(k) - s;
  if (last == 1)
    m |= mask_of(n);
  else if (last != 0)
    v.integral = false;
  v.mask = m;
  v.y = std::move(y);
  return v;
}

// Is (u,v) an edge of conv(all vertices)?  Hypersimplex vertex pairs meeting
// in k-1 elements are always edges.  Otherwise: the midpoint lies in the
// relative interior of its minimal face, so maximizing the total convex
// weight carried by the other vertices in a representation of the midpoint
// gives zero exactly when that face is the segment itself.
inline bool is_edge(const std::vector<CutVertex>& V, size_t u, size_t v, int k) {
  if (V[u].integral && V[v].integral &&
      mask_size(V[u].mask & V[v].mask) == k - 1)
    return true;
  size_t d = V[u].y.size();
  QMat A(d + 1, QVec(V.size()));
  QVec b(d + 1);
  QVec c(V.size(), Rational(1));
  for (size_t j = 0; j < V.size(); ++j)
    for (size_t i = 0; i < d; ++i) A[i][j] = V[j].y[i];
  for (size_t j = 0; j < V.size(); ++j) A[d][j] = 1;
  for (size_t i = 0; i < d; ++i) b[i] = (V[u].y[i] + V[v].y[i]) / 2;
  b[d] = 1;
  c[u] = 0;
  c[v] = 0;
  LpResult r = lp_maximize(A, b, c);
  if (r.status != LpResult::kOptimal) throw std::logic_error("edge test midpoint not in hull");
  return r.value == 0;
}

// Cuts the polytope conv(V) by fn <= 0.  Returns false when the result is
// empty.
inline bool cut_by_halfspace(std::vector<CutVertex>& V, const AffineFn& fn, int k, int n) {
  std::vector<Rational> side(V.size());
  bool any_pos = false, all_pos = true;
  for (size_t i = 0; i < V.size(); ++i) {
    side[i] = fn.eval(V[i].y);
    if (side[i] > 0)
      any_pos = true;
    else
      all_pos = false;
  }
  if (!any_pos) return true;  // cut inactive
  if (all_pos) {
    V.clear();
    return false;
  }
  std::vector<CutVertex> next;
  for (size_t i = 0; i < V.size(); ++i)
    if (side[i] <= 0) next.push_back(V[i]);
  for (size_t u = 0; u < V.size(); ++u) {
    for (size_t v = u + 1; v < V.size(); ++v) {
      if ((side[u] < 0 && side[v] > 0) || (side[u] > 0 && side[v] < 0)) {
        if (!is_edge(V, u, v, k)) continue;
        Rational t = side[u] / (side[u] - side[v]);
        QVec y(V[u].y.size());
        for (size_t j = 0; j < y.size(); ++j)
          y[j] = V[u].y[j] + t * (V[v].y[j] - V[u].y[j]);
        next.push_back(make_cut_vertex(std::move(y), k, n));
      }
    }
  }
  V = std::move(next);
  return !V.empty();
}

}  // namespace detail

struct RefinementResult {
  bool refinable = true;
  Subdivision refinement;     // valid when refinable
  QVec fractional_point;      // full n-coordinate witness otherwise
};

// Cells of the common refinement are the pairwise cell intersections; the
// refinement fails exactly when some intersection acquires a vertex that is
// not a hypersimplex vertex, and that point is reported.
inline RefinementResult common_refinement(const Subdivision& s1, const Subdivision& s2) {
  if (s1.k != s2.k || s1.n != s2.n) throw std::invalid_argument("mismatched (k,n)");
  int k = s1.k, n = s1.n;
  std::vector<Mask> verts = all_ksubset_masks(k, n);

  RefinementResult res;
  res.refinement.k = k;
  res.refinement.n = n;

  for (const Cell& c1 : s1.cells) {
    for (const Cell& c2 : s2.cells) {
      std::vector<detail::CutVertex> V;
      V.reserve(c1.vertex_ranks.size());
      for (int r : c1.vertex_ranks)
        V.push_back(detail::make_cut_vertex(chart_point(verts[r], n), k, n));
      bool alive = true;
      for (const HalfSpace& h : cell_halfspaces(c2, k, n)) {
        if (!detail::cut_by_halfspace(V, h.fn, k, n)) {
          alive = false;
          break;
        }
      }
      if (!alive) continue;
      for (const detail::CutVertex& v : V) {
        if (!v.integral) {
          res.refinable = false;
          res.fractional_point = chart_to_full(v.y, k);
          return res;
        }
      }
      std::vector<QVec> pts;
      for (const detail::CutVertex& v : V) pts.push_back(v.y);
      if (affine_dim(pts) != n - 1) continue;  // lower-dimensional intersection
      Cell c;
      for (const detail::CutVertex& v : V)
        c.vertex_ranks.push_back(static_cast<int>(ksubset_rank(v.mask)));
      std::sort(c.vertex_ranks.begin(), c.vertex_ranks.end());
      res.refinement.cells.push_back(std::move(c));
    }
  }
  sort_cells(res.refinement.cells);
  return res;
}

// Coherence by definition: the subdivision of the sum must be exactly the
// common refinement of the two summands' subdivisions.
inline bool is_coherent_sum(const WeightFunction& w1, const WeightFunction& w2) {
  if (w1.k != w2.k || w1.n != w2.n) throw std::invalid_argument("mismatched (k,n)");
  Subdivision sum = regular_subdivision(w1 + w2);
  RefinementResult r = common_refinement(regular_subdivision(w1), regular_subdivision(w2));
  if (!r.refinable) return false;
  return r.refinement.same_cells(sum);
}

// ---------------------------------------------------------------------------
// Weak compatibility of subset hyperplanes via single-point face sections.
// ---------------------------------------------------------------------------

struct FractionalPointCertificate {
  QVec point;                  // full n coordinates
  Mask fixed_zero = 0;         // face data: coordinates pinned to 0 / 1
  Mask fixed_one = 0;
  std::vector<int> subfamily;  // indices into the input family
};

struct WeakCompatibilityResult {
  bool weakly_compatible = true;
  std::optional<FractionalPointCertificate> certificate;
};

namespace detail {

// Proper faces fix disjoint coordinate sets to 0 and 1; the free part is a
// smaller hypersimplex with kk ones on the free coordinates.
struct HsFace {
  Mask zero = 0;
  Mask one = 0;
  Mask free_mask = 0;
  int kk = 0;
  std::vector<int> coords;  // elements of free_mask, ascending
};

// Exactly solves a small augmented integer system when the solution is
// unique; returns nullopt for inconsistent or underdetermined systems.
// Fraction-free elimination; entries stay tiny for the 0/1 matrices this
// serves, with a hard bailout if they would not.
inline std::optional<QVec> solve_unique_int(std::vector<std::vector<long long>> M, size_t cols) {
  size_t rows = M.size();
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      __int128 a = M[r][c], b = M[i][c];
      for (size_t j = 0; j <= cols; ++j) {
        __int128 v = a * static_cast<__int128>(M[i][j]) - b * static_cast<__int128>(M[r][j]);
        if (v > 0x3fffffffffffffffLL || v < -0x3fffffffffffffffLL)
          throw std::logic_error("integer elimination overflow");
        M[i][j] = static_cast<long long>(v);
      }
      long long g = 0;
      for (size_t j = 0; j <= cols; ++j) g = std::__gcd(g, M[i][j] < 0 ? -M[i][j] : M[i][j]);
      if (g > 1)
        for (size_t j = 0; j <= cols; ++j) M[i][j] /= g;
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (M[i][cols] != 0) return std::nullopt;  // inconsistent
  if (pivot_col.size() != cols) return std::nullopt;  // underdetermined
  QVec x(cols);
  for (size_t i = 0; i < cols; ++i) {
    x[pivot_col[i]] = make_rational(M[i][cols], M[i][pivot_col[i]]);
  }
  return x;
}

// Faces that can pin a single non-vertex point at all (at least one degree
// of freedom, at most max_free free coordinates).
inline std::vector<HsFace> pinning_faces(int k, int n, int max_free) {
  std::vector<HsFace> faces;
  Mask top = full_mask(n);
  for (Mask zero = 0; zero <= top; ++zero) {
    if (mask_size(zero) > n - k) continue;
    Mask rest = top & ~zero;
    for (Mask one = rest;; one = (one - 1) & rest) {
      int ones = mask_size(one);
      int kk = k - ones;
      Mask free = rest & ~one;
      int nf = mask_size(free);
      if (ones <= k && 1 <= kk && kk <= nf - 1 && nf <= max_free) {
        HsFace f;
        f.zero = zero;
        f.one = one;
        f.free_mask = free;
        f.kk = kk;
        f.coords = mask_elements(free);
        faces.push_back(std::move(f));
      }
      if (one == 0) break;
    }
  }
  return faces;
}

}  // namespace detail

// A family of split-defining subsets is weakly compatible (its splits have a
// common refinement) unless some face of the hypersimplex meets some
// subfamily of the hyperplanes sum_A x = 1 in a single non-vertex point.
// The search is exponential in n and meant for desk-scale inputs.
inline WeakCompatibilityResult geometric_weak_compatibility(const std::vector<Mask>& family,
                                                            int k, int n) {
  for (Mask A : family)
    if (!is_split_defining_subset(A, k, n))
      throw std::invalid_argument("family member does not define a split");

  WeakCompatibilityResult res;
  int m = static_cast<int>(family.size());
  // |subfamily| + 1 equations pin at most that many free coordinates
  std::vector<detail::HsFace> faces = detail::pinning_faces(k, n, m + 1);

  for (Mask sub = 1; sub < (Mask(1) << m); ++sub) {
    std::vector<int> members;
    for (int i = 0; i < m; ++i)
      if (sub & (Mask(1) << i)) members.push_back(i);
    Mask covered = 0;
    for (int i : members) covered |= family[i];

    for (const detail::HsFace& f : faces) {
      if (static_cast<int>(members.size()) + 1 < static_cast<int>(f.coords.size())) continue;
      // Uncovered free coordinates can only be pinned by the total sum; two
      // of them already give a line.
      if (mask_size(f.free_mask & ~covered) > 1) continue;
      // Two free coordinates lying in exactly the same subfamily members
      // leave their difference unconstrained: no single point possible.
      {
        bool degenerate_pair = false;
        std::vector<std::uint32_t> sig(f.coords.size(), 0);
        for (size_t mi = 0; mi < members.size(); ++mi)
          for (size_t j = 0; j < f.coords.size(); ++j)
            if (mask_contains(family[members[mi]], f.coords[j]))
              sig[j] |= (std::uint32_t(1) << mi);
        for (size_t a = 0; a < sig.size() && !degenerate_pair; ++a)
          for (size_t b = a + 1; b < sig.size() && !degenerate_pair; ++b)
            degenerate_pair = sig[a] == sig[b];
        if (degenerate_pair) continue;
      }

      // 0/1 system: integer elimination decides uniqueness cheaply
      size_t nf = f.coords.size();
      std::vector<std::vector<long long>> M(members.size() + 1,
                                            std::vector<long long>(nf + 1, 0));
      bool infeasible_row = false;
      for (size_t mi = 0; mi < members.size(); ++mi) {
        for (size_t j = 0; j < nf; ++j)
          M[mi][j] = mask_contains(family[members[mi]], f.coords[j]) ? 1 : 0;
        int fixed = mask_size(family[members[mi]] & f.one);
        M[mi][nf] = 1 - fixed;
        if (1 - fixed < 0) infeasible_row = true;
      }
      if (infeasible_row) continue;
      for (size_t j = 0; j < nf; ++j) M[members.size()][j] = 1;
      M[members.size()][nf] = f.kk;

      std::optional<QVec> sol = detail::solve_unique_int(M, nf);
      if (!sol) continue;
      bool feasible = true, fractional = false;
      for (const Rational& v : *sol) {
        if (v < 0 || v > 1) feasible = false;
        if (v != 0 && v != 1) fractional = true;
      }
      if (!feasible || !fractional) continue;

      FractionalPointCertificate cert;
      cert.fixed_zero = f.zero;
      cert.fixed_one = f.one;
      cert.subfamily = members;
      QVec x(n, Rational(0));
      for (int e : mask_elements(f.one)) x[e - 1] = 1;
      for (size_t j = 0; j < f.coords.size(); ++j) x[f.coords[j] - 1] = (*sol)[j];
      cert.point = std::move(x);
      res.weakly_compatible = false;
      res.certificate = std::move(cert);
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Validation helpers used by the test suites.
// ---------------------------------------------------------------------------

// Lifted-polytope consistency: every cell's vertices meet its supporting
// functional exactly, all other vertices lift strictly above it.
inline bool subdivision_supports_weight(const Subdivision& s, const WeightFunction& w) {
  std::vector<Mask> verts = all_ksubset_masks(s.k, s.n);
  for (const Cell& c : s.cells) {
    if (!c.has_functional) return false;
    std::vector<bool> in_cell(verts.size(), false);
    for (int r : c.vertex_ranks) in_cell[r] = true;
    for (size_t r = 0; r < verts.size(); ++r) {
      Rational lift = c.functional.eval(chart_point(verts[r], s.n));
      if (in_cell[r] ? (lift != w.heights[r]) : (lift >= w.heights[r])) return false;
    }
  }
  return true;
}

// Exact union check: cell volumes must add up to the hypersimplex volume.
inline bool subdivision_covers_polytope(const Subdivision& s) {
  std::vector<Mask> verts = all_ksubset_masks(s.k, s.n);
  std::vector<QVec> pts;
  for (Mask v : verts) pts.push_back(chart_point(v, s.n));
  Rational total = polytope_volume(pts);
  Rational sum = 0;
  for (const Cell& c : s.cells) {
    std::vector<QVec> cp;
    for (int r : c.vertex_ranks) cp.push_back(pts[r]);
    sum += polytope_volume(cp);
  }
  return sum == total;
}

}  // namespace ksplit
