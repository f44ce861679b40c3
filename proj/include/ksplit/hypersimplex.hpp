#pragma once

#include <stdexcept>
#include <vector>

#include "ksplit/combinatorics.hpp"
#include "ksplit/dissimilarity.hpp"
#include "ksplit/rational.hpp"

namespace ksplit {

// Vertices of the hypersimplex: the 0/1 points with exactly k ones,
// identified with k-subsets of {1,...,n} in colex rank order.
inline std::vector<KSubset> hypersimplex_vertices(int k, int n) {
  if (k <= 0 || k >= n) throw std::invalid_argument("hypersimplex needs 0 < k < n");
  return all_ksubsets(k, n);
}

// Does the hyperplane sum_{i in A} x_i = 1 cut a split out of the
// hypersimplex?  Outside 2 <= |A| <= n-k it induces the trivial subdivision.
inline bool is_split_defining_subset(Mask A, int k, int n) {
  if (A == 0 || A == full_mask(n)) throw std::invalid_argument("subset must be proper and nonempty");
  int s = mask_size(A);
  return 2 <= s && s <= n - k;
}

// A split of the hypersimplex cut by mu * sum_A x = (k - mu) * sum_B x,
// stored with the identification (A,B,mu) <-> (B,A,k-mu) resolved so that
// the A-block is the lexicographically smaller option.
struct HsSplit {
  Mask A = 0;
  Mask B = 0;
  int mu = 0;
  int k = 0;
  int n = 0;

  bool operator==(const HsSplit& o) const {
    return A == o.A && B == o.B && mu == o.mu && k == o.k && n == o.n;
  }
};

inline HsSplit make_hs_split(Mask A, int mu, int k, int n) {
  Mask B = full_mask(n) & ~A;
  int a = mask_size(A);
  if (mu < 1 || mu > k - 1 || a < k - mu + 1 || a > n - mu - 1)
    throw std::invalid_argument("not a hypersimplex split");
  HsSplit s;
  s.k = k;
  s.n = n;
  if (B < A) {
    s.A = B;
    s.B = A;
    s.mu = k - mu;
  } else {
    s.A = A;
    s.B = B;
    s.mu = mu;
  }
  return s;
}

// The split S_A cut by sum_A x = 1 corresponds to the (X\A, A, 1) data.
inline HsSplit hs_split_of_subset(Mask A, int k, int n) {
  return make_hs_split(full_mask(n) & ~A, 1, k, n);
}

// All splits of the hypersimplex, deduplicated.
inline std::vector<HsSplit> enumerate_hypersimplex_splits(int k, int n) {
  std::vector<HsSplit> out;
  Mask top = full_mask(n);
  for (Mask A = 1; A < top; ++A) {
    if (!mask_contains(A, 1)) continue;  // representative block holds element 1
    int a = mask_size(A);
    for (int mu = 1; mu <= k - 1; ++mu)
      if (k - mu + 1 <= a && a <= n - mu - 1) out.push_back(make_hs_split(A, mu, k, n));
  }
  return out;
}

// Two hypersimplex splits are compatible when their hyperplanes avoid each
// other inside the polytope; for (A,B,mu) versus (C,D,nu) this is the
// four-intersection cardinality test.
inline bool hs_splits_compatible(const HsSplit& s1, const HsSplit& s2) {
  if (s1.k != s2.k || s1.n != s2.n) throw std::invalid_argument("splits of different hypersimplices");
  int k = s1.k;
  int mu = s1.mu, nu = s2.mu;
  if (mask_size(s1.A & s2.A) <= k - mu - nu) return true;
  if (mask_size(s1.A & s2.B) <= nu - mu) return true;
  if (mask_size(s1.B & s2.A) <= mu - nu) return true;
  if (mask_size(s1.B & s2.B) <= mu + nu - k) return true;
  return false;
}

// Specialized form for S_A versus S_B: nested blocks, a big union, or the
// k = 2 disjoint case.
inline bool subset_splits_compatible(Mask A, Mask B, int k, int n) {
  if ((A & ~B) == 0 || (B & ~A) == 0) return true;
  if (mask_size(A | B) >= n - k + 2) return true;
  return k == 2 && (A & B) == 0;
}

// Weight function whose regular subdivision is the split S_A: heights k on
// the vertices avoiding A, zero elsewhere.
inline WeightFunction split_weight_function(Mask A, int k, int n) {
  if (!is_split_defining_subset(A, k, n))
    throw std::invalid_argument("subset does not define a split");
  WeightFunction w(k, n);
  std::vector<Mask> verts = all_ksubset_masks(k, n);
  for (size_t r = 0; r < verts.size(); ++r)
    if ((verts[r] & A) == 0) w.heights[r] = k;
  return w;
}

// Same formula with the split-defining guard dropped; used by cross-checks
// that probe the non-defining cases as well.
inline WeightFunction split_weight_function_raw(Mask A, int k, int n) {
  WeightFunction w(k, n);
  std::vector<Mask> verts = all_ksubset_masks(k, n);
  for (size_t r = 0; r < verts.size(); ++r)
    if ((verts[r] & A) == 0) w.heights[r] = k;
  return w;
}

}  // namespace ksplit
