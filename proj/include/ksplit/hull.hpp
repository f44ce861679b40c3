#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ksplit/linalg.hpp"
#include "ksplit/rational.hpp"

namespace ksplit {

// One facet of a full-dimensional polytope: normal.x <= offset holds for
// every input point, with equality exactly on `vertices` (indices into the
// input).  Normals are primitive integer vectors, so equal hyperplanes
// compare equal.
struct Facet {
  QVec normal;
  Rational offset;
  std::vector<int> vertices;

  // vertex-set bitmask (supports up to 256 input points); used to prefilter
  // ridge candidates cheaply
  std::array<std::uint64_t, 4> vbits{};

  void rebuild_bits() {
    vbits = {0, 0, 0, 0};
    for (int v : vertices) vbits[v >> 6] |= (std::uint64_t(1) << (v & 63));
  }
};

inline int facet_common_count(const Facet& a, const Facet& b) {
  int c = 0;
  for (int i = 0; i < 4; ++i)
    c += __builtin_popcountll(a.vbits[i] & b.vbits[i]);
  return c;
}

namespace detail {

// Facet vertex lists stay sorted; ridge detection intersects them.
inline void insert_sorted(std::vector<int>& v, int x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

// Hyperplane spanned by the given points (they must have affine dim d-1).
inline std::pair<QVec, Rational> hyperplane_through(const std::vector<QVec>& pts,
                                                    const std::vector<int>& idx) {
  size_t d = pts[idx[0]].size();
  QMat diffs;
  for (size_t i = 1; i < idx.size(); ++i) {
    QVec row(d);
    for (size_t j = 0; j < d; ++j) row[j] = pts[idx[i]][j] - pts[idx[0]][j];
    diffs.push_back(std::move(row));
  }
  std::vector<QVec> kern = kernel_basis(std::move(diffs));
  if (kern.size() != 1) throw std::logic_error("points do not span a hyperplane");
  QVec g = std::move(kern[0]);
  make_primitive(g);
  return {std::move(g), dot(g, pts[idx[0]])};
}

struct HyperplaneKey {
  QVec normal;
  Rational offset;
  bool operator<(const HyperplaneKey& o) const {
    if (offset != o.offset) return offset < o.offset;
    return normal < o.normal;
  }
};

}  // namespace detail

// Beneath-beyond convex hull over exact rationals.  The points must span
// the full ambient dimension; callers working inside a flat reduce to
// affine coordinates first.  Facet vertex sets list every input point lying
// on the facet hyperplane (the subdivision semantics used downstream).
inline std::vector<Facet> convex_hull_facets(const std::vector<QVec>& pts) {
  size_t m = pts.size();
  if (m == 0) throw std::invalid_argument("hull of empty point set");
  size_t d = pts[0].size();

  // Greedy affinely independent start simplex.
  std::vector<int> simplex{0};
  std::vector<QVec> chosen{pts[0]};
  for (size_t i = 1; i < m && simplex.size() < d + 1; ++i) {
    chosen.push_back(pts[i]);
    if (affine_dim(chosen) == static_cast<int>(simplex.size()))
      simplex.push_back(static_cast<int>(i));
    else
      chosen.pop_back();
  }
  if (simplex.size() != d + 1)
    throw std::invalid_argument("point set is not full-dimensional");

  QVec ref(d, Rational(0));  // interior reference, fixed for orientation
  for (int i : simplex)
    for (size_t j = 0; j < d; ++j) ref[j] += pts[i][j];
  for (size_t j = 0; j < d; ++j) ref[j] /= Rational(static_cast<long>(d + 1));

  std::vector<bool> inserted(m, false);
  for (int i : simplex) inserted[i] = true;

  auto facet_from_hyperplane = [&](QVec g, Rational c) {
    if (dot(g, ref) > c) {
      for (Rational& v : g) v = -v;
      c = -c;
    }
    Facet f;
    f.normal = std::move(g);
    f.offset = std::move(c);
    for (size_t p = 0; p < m; ++p) {
      if (!inserted[p]) continue;
      Rational s = dot(f.normal, pts[p]) - f.offset;
      if (s == 0)
        f.vertices.push_back(static_cast<int>(p));
      else if (s > 0)
        throw std::logic_error("hull facet fails validity check");
    }
    f.rebuild_bits();
    return f;
  };

  std::vector<Facet> facets;
  for (size_t skip = 0; skip < simplex.size(); ++skip) {
    std::vector<int> idx;
    for (size_t i = 0; i < simplex.size(); ++i)
      if (i != skip) idx.push_back(simplex[i]);
    auto [g, c] = detail::hyperplane_through(pts, idx);
    facets.push_back(facet_from_hyperplane(std::move(g), std::move(c)));
  }

  for (size_t q = 0; q < m; ++q) {
    if (inserted[q]) continue;
    inserted[q] = true;

    std::vector<int> visible, other;
    std::vector<bool> coplanar(facets.size(), false);
    for (size_t f = 0; f < facets.size(); ++f) {
      Rational s = dot(facets[f].normal, pts[q]) - facets[f].offset;
      if (s > 0) {
        visible.push_back(static_cast<int>(f));
      } else {
        other.push_back(static_cast<int>(f));
        coplanar[f] = (s == 0);
      }
    }
    if (visible.empty()) {
      for (size_t f = 0; f < facets.size(); ++f)
        if (coplanar[f]) {
          detail::insert_sorted(facets[f].vertices, static_cast<int>(q));
          facets[f].rebuild_bits();
        }
      continue;
    }

    // Horizon ridges sit between a visible facet and a strictly-beneath one;
    // coplanar facets absorb q instead of spawning a cone facet.
    std::map<detail::HyperplaneKey, bool> seen;
    std::vector<Facet> created;
    for (int fv : visible) {
      for (int fo : other) {
        if (coplanar[fo]) continue;
        if (facet_common_count(facets[fv], facets[fo]) < static_cast<int>(d) - 1) continue;
        std::vector<int> common;
        common.reserve(std::min(facets[fv].vertices.size(), facets[fo].vertices.size()));
        std::set_intersection(facets[fv].vertices.begin(), facets[fv].vertices.end(),
                              facets[fo].vertices.begin(), facets[fo].vertices.end(),
                              std::back_inserter(common));
        std::vector<QVec> cpts;
        for (int i : common) cpts.push_back(pts[i]);
        if (affine_dim(cpts) != static_cast<int>(d) - 2) continue;
        common.push_back(static_cast<int>(q));
        auto [g, c] = detail::hyperplane_through(pts, common);
        if (dot(g, ref) > c) {
          for (Rational& v : g) v = -v;
          c = -c;
        }
        detail::HyperplaneKey key{g, c};
        if (seen.emplace(key, true).second)
          created.push_back(facet_from_hyperplane(std::move(g), std::move(c)));
      }
    }
    // Coplanar facets may absorb the point without any cone facet appearing
    // (the point completes already-known hyperplanes).
    bool absorbed = false;
    for (size_t f = 0; f < facets.size() && !absorbed; ++f) absorbed = coplanar[f];
    if (created.empty() && !absorbed) throw std::logic_error("no horizon found for exterior point");

    std::vector<Facet> next;
    std::vector<bool> is_visible(facets.size(), false);
    for (int fv : visible) is_visible[fv] = true;
    for (size_t f = 0; f < facets.size(); ++f) {
      if (is_visible[f]) continue;
      if (coplanar[f]) {
        detail::insert_sorted(facets[f].vertices, static_cast<int>(q));
        facets[f].rebuild_bits();
      }
      next.push_back(std::move(facets[f]));
    }
    for (Facet& f : created) next.push_back(std::move(f));
    facets = std::move(next);
  }

  for (Facet& f : facets) std::sort(f.vertices.begin(), f.vertices.end());
  std::sort(facets.begin(), facets.end(),
            [](const Facet& a, const Facet& b) { return a.vertices < b.vertices; });
  return facets;
}

inline Rational simplex_volume(const std::vector<QVec>& pts, const std::vector<int>& idx) {
  size_t d = pts[idx[0]].size();
  QMat M;
  for (size_t i = 1; i < idx.size(); ++i) {
    QVec row(d);
    for (size_t j = 0; j < d; ++j) row[j] = pts[idx[i]][j] - pts[idx[0]][j];
    M.push_back(std::move(row));
  }
  // determinant by elimination
  Rational det = 1;
  for (size_t c = 0; c < d; ++c) {
    size_t p = c;
    while (p < d && M[p][c] == 0) ++p;
    if (p == d) return Rational(0);
    if (p != c) {
      std::swap(M[p], M[c]);
      det = -det;
    }
    det *= M[c][c];
    for (size_t i = c + 1; i < d; ++i) {
      if (M[i][c] == 0) continue;
      Rational f = M[i][c] / M[c][c];
      for (size_t j = c; j < d; ++j) M[i][j] -= f * M[c][j];
    }
  }
  if (det < 0) det = -det;
  Rational fact = 1;
  for (size_t i = 2; i <= d; ++i) fact *= Rational(static_cast<long>(i));
  return det / fact;
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace detail

// Exact volume of conv(pts) (full-dimensional): lift by deterministic
// generic heights, take the lower-hull triangulation, sum simplex volumes.
// Retries with a different salt if a lift comes out non-generic.
inline Rational polytope_volume(const std::vector<QVec>& pts) {
  size_t d = pts[0].size();
  if (pts.size() < d + 1) throw std::invalid_argument("volume of a lower-dimensional set");
  if (pts.size() == d + 1) {
    std::vector<int> all(pts.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return simplex_volume(pts, all);
  }
  for (std::uint64_t salt = 1; salt <= 32; ++salt) {
    std::vector<QVec> lifted(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
      lifted[i] = pts[i];
      std::uint64_t h = detail::splitmix64(salt * 0x10001ull + i);
      lifted[i].push_back(Rational(static_cast<long>(h % 1000003ull)));
    }
    if (affine_dim(lifted) != static_cast<int>(d) + 1) continue;
    std::vector<Facet> facets;
    try {
      facets = convex_hull_facets(lifted);
    } catch (const std::logic_error&) {
      continue;
    }
    bool simplicial = true;
    Rational vol = 0;
    for (const Facet& f : facets) {
      if (f.normal.back() >= 0) continue;  // lower facets only
      if (f.vertices.size() != d + 1) {
        simplicial = false;
        break;
      }
      vol += simplex_volume(pts, f.vertices);
    }
    if (simplicial) return vol;
  }
  throw std::logic_error("could not find a generic lift for volume computation");
}

}  // namespace ksplit
