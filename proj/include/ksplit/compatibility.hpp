#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "ksplit/dissimilarity.hpp"
#include "ksplit/hypersimplex.hpp"
#include "ksplit/linalg.hpp"
#include "ksplit/rational.hpp"

namespace ksplit {

// Two splits of X are compatible when one of the four block intersections
// is empty.
inline bool splits_compatible_X(const Split& s1, const Split& s2) {
  if (s1.n != s2.n) throw std::invalid_argument("splits of different ground sets");
  Mask a = s1.block, b = s1.other_block();
  Mask c = s2.block, d = s2.other_block();
  return (a & c) == 0 || (a & d) == 0 || (b & c) == 0 || (b & d) == 0;
}

inline bool is_compatible_system(const std::vector<Split>& splits) {
  for (size_t i = 0; i < splits.size(); ++i)
    for (size_t j = i + 1; j < splits.size(); ++j)
      if (!splits_compatible_X(splits[i], splits[j])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Forbidden configurations.  A witness stores the participating points and
// the relevant block of each participating split (the block containing the
// anchor point for kind A, the block containing i_l for kinds B and C), so
// the same record serves both the split-system and the subset-family tests.
// ---------------------------------------------------------------------------

enum class WitnessKind { kA, kB, kC };

struct ForbiddenWitness {
  WitnessKind kind = WitnessKind::kA;
  int nu = 0;                // kinds B and C only
  std::vector<int> points;   // kind A: i0,i1,i2,i3; kind B: i1..i_{2nu+1}; kind C: i1..i_nu
  std::vector<Mask> blocks;  // one block per split position
  int complement_size = 0;   // |X minus the union of the blocks|
  int k = 0;
  int n = 0;
};

namespace detail {

// Membership pattern per kind: which points must lie in block l.
inline bool pattern_requires(WitnessKind kind, int L, int l, int m) {
  switch (kind) {
    case WitnessKind::kA:
      return m == 0 || m == l;
    case WitnessKind::kB: {
      int next = (l % L) + 1;
      return m == l || m == next;
    }
    case WitnessKind::kC: {
      int n1 = (l % L) + 1, n2 = (n1 % L) + 1;
      return m == l || m == n1 || m == n2;
    }
  }
  return false;
}

inline int point_index_base(WitnessKind kind) { return kind == WitnessKind::kA ? 0 : 1; }

}  // namespace detail

// Re-checks the defining membership pattern and the cardinality bound.
inline bool witness_valid(const ForbiddenWitness& w) {
  int L = static_cast<int>(w.blocks.size());
  int base = detail::point_index_base(w.kind);
  if (static_cast<int>(w.points.size()) != (w.kind == WitnessKind::kA ? 4 : L)) return false;
  switch (w.kind) {
    case WitnessKind::kA:
      if (L != 3) return false;
      break;
    case WitnessKind::kB:
      if (w.nu < 1 || w.nu >= w.k || L != 2 * w.nu + 1) return false;
      break;
    case WitnessKind::kC:
      if (w.nu < 7 || w.nu >= 3 * w.k || w.nu % 3 == 0 || L != w.nu) return false;
      break;
  }
  for (size_t i = 0; i < w.points.size(); ++i)
    for (size_t j = i + 1; j < w.points.size(); ++j)
      if (w.points[i] == w.points[j]) return false;
  for (int l = 1; l <= L; ++l) {
    for (size_t pi = 0; pi < w.points.size(); ++pi) {
      int m = static_cast<int>(pi) + base;
      bool want = detail::pattern_requires(w.kind, L, l, m);
      if (mask_contains(w.blocks[l - 1], w.points[pi]) != want) return false;
    }
  }
  Mask uni = 0;
  for (Mask b : w.blocks) uni |= b;
  int comp = w.n - mask_size(uni);
  if (comp != w.complement_size) return false;
  int needed = 0;
  switch (w.kind) {
    case WitnessKind::kA: needed = w.k - 2; break;
    case WitnessKind::kB: needed = w.k - w.nu; break;
    case WitnessKind::kC: needed = w.k - w.nu / 3; break;
  }
  return comp >= needed;
}

namespace detail {

// Depth-first search for one forbidden configuration.  block_choices(i)
// yields the candidate blocks for a split placed at a position anchored at
// point i (for split systems this is S(i) over all S; for subset families
// it is every member containing i).  Positions are filled in order with
// full incremental pattern checks, so dead branches die early.
struct WitnessSearch {
  int n = 0;
  int k = 0;
  WitnessKind kind = WitnessKind::kA;
  int nu = 0;
  int min_complement = 0;

  std::vector<int> points;
  std::vector<Mask> blocks;

  // anchored candidate blocks: for kind A all blocks containing i0, for
  // kinds B and C all blocks containing the position's own point
  const std::vector<Mask>* candidates = nullptr;

  std::optional<ForbiddenWitness> found;

  int L() const {
    switch (kind) {
      case WitnessKind::kA: return 3;
      case WitnessKind::kB: return 2 * nu + 1;
      case WitnessKind::kC: return nu;
    }
    return 0;
  }

  bool point_used(int p) const {
    for (int q : points)
      if (q == p) return true;
    return false;
  }

  bool consistent(int upto) const {
    int base = point_index_base(kind);
    int total = L();
    for (int l = 1; l <= upto; ++l) {
      for (size_t pi = 0; pi < points.size(); ++pi) {
        int m = static_cast<int>(pi) + base;
        bool want = pattern_requires(kind, total, l, m);
        if (mask_contains(blocks[l - 1], points[pi]) != want) return false;
      }
    }
    return true;
  }

  void finish() {
    Mask uni = 0;
    for (Mask b : blocks) uni |= b;
    int comp = n - mask_size(uni);
    if (comp < min_complement) return;
    ForbiddenWitness w;
    w.kind = kind;
    w.nu = nu;
    w.points = points;
    w.blocks = blocks;
    w.complement_size = comp;
    w.k = k;
    w.n = n;
    if (!witness_valid(w)) throw std::logic_error("search produced an invalid witness");
    found = std::move(w);
  }

  // Kind A: anchor i0, then positions 1..3 with (block, point) pairs.
  void run_kind_a() {
    for (int i0 = 1; i0 <= n && !found; ++i0) {
      points = {i0};
      blocks.clear();
      descend_a(i0);
    }
  }
  void descend_a(int i0) {
    int pos = static_cast<int>(blocks.size()) + 1;
    if (pos == 4) {
      if (consistent(3)) finish();
      return;
    }
    for (Mask b : *candidates) {
      if (!mask_contains(b, i0)) continue;
      blocks.push_back(b);
      for (int p = 1; p <= n && !found; ++p) {
        if (point_used(p) || !mask_contains(b, p)) continue;
        points.push_back(p);
        if (consistent(static_cast<int>(blocks.size()))) descend_a(i0);
        points.pop_back();
      }
      blocks.pop_back();
      if (found) return;
    }
  }

  // Kinds B and C: positions 1..L each carry their own point and block.
  void run_cycle() {
    points.clear();
    blocks.clear();
    descend_cycle();
  }
  void descend_cycle() {
    int pos = static_cast<int>(blocks.size()) + 1;
    if (pos == L() + 1) {
      if (consistent(L())) finish();
      return;
    }
    for (int p = 1; p <= n && !found; ++p) {
      if (point_used(p)) continue;
      points.push_back(p);
      for (Mask b : *candidates) {
        if (!mask_contains(b, p)) continue;
        blocks.push_back(b);
        if (consistent(static_cast<int>(blocks.size()))) descend_cycle();
        blocks.pop_back();
        if (found) break;
      }
      points.pop_back();
    }
  }
};

inline std::optional<ForbiddenWitness> search_witness(const std::vector<Mask>& candidate_blocks,
                                                      int k, int n, WitnessKind kind, int nu,
                                                      int min_complement) {
  WitnessSearch s;
  s.n = n;
  s.k = k;
  s.kind = kind;
  s.nu = nu;
  s.min_complement = min_complement;
  s.candidates = &candidate_blocks;
  if (kind == WitnessKind::kA)
    s.run_kind_a();
  else
    s.run_cycle();
  return s.found;
}

}  // namespace detail

struct KWeakCompatibilityResult {
  bool compatible = true;
  std::optional<ForbiddenWitness> witness;
};

// Classic weak compatibility of a split system: no quartet configuration,
// with no cardinality constraint attached.
inline KWeakCompatibilityResult is_weakly_compatible_classic(const std::vector<Split>& system) {
  KWeakCompatibilityResult res;
  if (system.empty()) return res;
  int n = system.front().n;
  std::vector<Mask> blocks;
  for (const Split& s : system) {
    blocks.push_back(s.block);
    blocks.push_back(s.other_block());
  }
  res.witness = detail::search_witness(blocks, 2, n, WitnessKind::kA, 0, 0);
  res.compatible = !res.witness.has_value();
  return res;
}

// k-weak compatibility of a split system: no condition (a), (b) or (c)
// configuration.  Search order is kind A first, then B and C by ascending
// nu; the first witness found is reported.
inline KWeakCompatibilityResult is_k_weakly_compatible(const std::vector<Split>& system, int k) {
  KWeakCompatibilityResult res;
  if (system.empty()) return res;
  int n = system.front().n;
  if (k < 2 || k >= n) throw std::invalid_argument("need 2 <= k < n");
  std::vector<Mask> blocks;
  for (const Split& s : system) {
    blocks.push_back(s.block);
    blocks.push_back(s.other_block());
  }
  res.witness = detail::search_witness(blocks, k, n, WitnessKind::kA, 0, k - 2);
  for (int nu = 1; nu < k && !res.witness; ++nu) {
    if (2 * nu + 1 > n) break;
    res.witness = detail::search_witness(blocks, k, n, WitnessKind::kB, nu, k - nu);
  }
  for (int nu = 7; nu < 3 * k && !res.witness; ++nu) {
    if (nu % 3 == 0 || nu > n) continue;
    res.witness = detail::search_witness(blocks, k, n, WitnessKind::kC, nu, k - nu / 3);
  }
  res.compatible = !res.witness.has_value();
  return res;
}

// Same three conditions on a family of split-defining subsets: the
// hypersimplex-level criterion for the corresponding splits S_A to admit a
// common refinement.
inline KWeakCompatibilityResult subset_family_weakly_compatible(const std::vector<Mask>& family,
                                                              int k, int n) {
  for (Mask A : family)
    if (!is_split_defining_subset(A, k, n))
      throw std::invalid_argument("family member does not define a split");
  KWeakCompatibilityResult res;
  if (family.empty()) return res;
  res.witness = detail::search_witness(family, k, n, WitnessKind::kA, 0, k - 2);
  for (int nu = 1; nu < k && !res.witness; ++nu) {
    if (2 * nu + 1 > n) break;
    res.witness = detail::search_witness(family, k, n, WitnessKind::kB, nu, k - nu);
  }
  for (int nu = 7; nu < 3 * k && !res.witness; ++nu) {
    if (nu % 3 == 0 || nu > n) continue;
    res.witness = detail::search_witness(family, k, n, WitnessKind::kC, nu, k - nu / 3);
  }
  res.compatible = !res.witness.has_value();
  return res;
}

// The explicit non-vertex point pinned down by a forbidden configuration:
// it lies on every hyperplane sum_{A_l} x = 1, inside the face that fixes
// the filler coordinates, and has fractional entries.  For kind C the last
// filler coordinate is forced to 1 - (nu mod 3)/3 by the total sum.
inline QVec witness_point(const ForbiddenWitness& w) {
  if (!witness_valid(w)) throw std::invalid_argument("invalid witness");
  int n = w.n, k = w.k;
  Mask uni = 0;
  for (Mask b : w.blocks) uni |= b;
  std::vector<int> complement = mask_elements(full_mask(n) & ~uni);

  QVec x(n, Rational(0));
  int b_size = 0;
  switch (w.kind) {
    case WitnessKind::kA: b_size = k - 2; break;
    case WitnessKind::kB: b_size = k - w.nu; break;
    case WitnessKind::kC: b_size = k - w.nu / 3; break;
  }
  std::vector<int> B(complement.begin(), complement.begin() + b_size);

  switch (w.kind) {
    case WitnessKind::kA:
      for (int e : B) x[e - 1] = 1;
      for (int p : w.points) x[p - 1] = Rational(1, 2);
      break;
    case WitnessKind::kB: {
      int m = B.front();
      for (int e : B) x[e - 1] = 1;
      x[m - 1] = Rational(1, 2);
      for (int p : w.points) x[p - 1] = Rational(1, 2);
      break;
    }
    case WitnessKind::kC: {
      int m = B.front();
      for (int e : B) x[e - 1] = 1;
      for (int p : w.points) x[p - 1] = Rational(1, 3);
      x[m - 1] = Rational(3 - w.nu % 3, 3);
      break;
    }
  }

  Rational total = 0;
  for (const Rational& v : x) total += v;
  if (total != k) throw std::logic_error("witness point misses the hypersimplex hyperplane");
  for (Mask b : w.blocks) {
    Rational s = 0;
    for (int e : mask_elements(b)) s += x[e - 1];
    if (s != 1) throw std::logic_error("witness point misses a split hyperplane");
  }
  bool fractional = false;
  for (const Rational& v : x)
    if (v != 0 && v != 1) fractional = true;
  if (!fractional) throw std::logic_error("witness point is a vertex");
  return x;
}

}  // namespace ksplit
