#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksplit/combinatorics.hpp"
#include "ksplit/rational.hpp"

namespace ksplit {

// A bipartition {A,B} of X = {1,...,n}.  The canonical representative is
// the block that does not contain element 1, so every bipartition has
// exactly one stored form.
struct Split {
  Mask block = 0;  // the block without element 1
  int n = 0;

  Split() = default;
  Split(Mask any_block, int n_) : n(n_) {
    Mask all = full_mask(n_);
    if ((any_block & ~all) != 0) throw std::invalid_argument("split block out of range");
    block = mask_contains(any_block, 1) ? (all & ~any_block) : any_block;
    if (block == 0 || block == all) throw std::invalid_argument("split block must be proper and nonempty");
  }

  Mask other_block() const { return full_mask(n) & ~block; }
  bool is_trivial() const {
    int s = mask_size(block);
    return s == 1 || s == n - 1;
  }

  // S(i): the block containing element i.
  Mask restriction(int i) const {
    if (i < 1 || i > n) throw std::out_of_range("element out of range");
    return mask_contains(block, i) ? block : other_block();
  }

  bool operator==(const Split& o) const { return n == o.n && block == o.block; }
  bool operator<(const Split& o) const { return block < o.block; }

  std::string to_string() const {
    std::string s;
    for (int e : mask_elements(block)) s += std::to_string(e) + " ";
    s += "|";
    for (int e : mask_elements(other_block())) s += " " + std::to_string(e);
    return s;
  }
};

// The trivial split {a} | X\{a}.
inline Split trivial_split(int a, int n) { return Split(mask_of(a), n); }

// All nontrivial splits of {1,...,n}: blocks not containing 1 with
// 2 <= |A| <= n-2, giving 2^(n-1) - n - 1 of them.
inline std::vector<Split> all_nontrivial_splits(int n) {
  std::vector<Split> out;
  Mask top = full_mask(n);
  for (Mask b = 1; b < top; ++b) {
    if (mask_contains(b, 1)) continue;
    int s = mask_size(b);
    if (s >= 2 && s <= n - 2) out.push_back(Split(b, n));
  }
  return out;
}

// An exact-valued function on all k-subsets of X, indexed by colex rank.
struct KDissimilarityMap {
  int n = 0;
  int k = 0;
  std::vector<Rational> values;

  KDissimilarityMap() = default;
  KDissimilarityMap(int k_, int n_)
      : n(n_), k(k_), values(static_cast<size_t>(binomial(n_, k_)), Rational(0)) {
    if (k_ < 2 || k_ >= n_) throw std::invalid_argument("need 2 <= k < n");
  }

  const Rational& at(Mask subset) const { return values[ksubset_rank(subset)]; }
  Rational& at(Mask subset) { return values[ksubset_rank(subset)]; }
  const Rational& at(const KSubset& K) const { return values[ksubset_rank(K)]; }

  bool is_zero() const {
    for (const Rational& v : values)
      if (v != 0) return false;
    return true;
  }

  KDissimilarityMap& operator+=(const KDissimilarityMap& o) {
    check_shape(o);
    for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  KDissimilarityMap& operator-=(const KDissimilarityMap& o) {
    check_shape(o);
    for (size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  friend KDissimilarityMap operator+(KDissimilarityMap a, const KDissimilarityMap& b) { return a += b; }
  friend KDissimilarityMap operator-(KDissimilarityMap a, const KDissimilarityMap& b) { return a -= b; }
  friend KDissimilarityMap operator*(const Rational& c, KDissimilarityMap a) {
    for (Rational& v : a.values) v *= c;
    return a;
  }
  bool operator==(const KDissimilarityMap& o) const {
    return n == o.n && k == o.k && values == o.values;
  }

 private:
  void check_shape(const KDissimilarityMap& o) const {
    if (n != o.n || k != o.k) throw std::invalid_argument("mismatched (k,n)");
  }
};

// Heights on the vertices of the hypersimplex, same indexing as above.
struct WeightFunction {
  int n = 0;
  int k = 0;
  std::vector<Rational> heights;

  WeightFunction() = default;
  WeightFunction(int k_, int n_)
      : n(n_), k(k_), heights(static_cast<size_t>(binomial(n_, k_)), Rational(0)) {}

  const Rational& at(Mask subset) const { return heights[ksubset_rank(subset)]; }
  Rational& at(Mask subset) { return heights[ksubset_rank(subset)]; }

  WeightFunction& operator+=(const WeightFunction& o) {
    if (n != o.n || k != o.k) throw std::invalid_argument("mismatched (k,n)");
    for (size_t i = 0; i < heights.size(); ++i) heights[i] += o.heights[i];
    return *this;
  }
  friend WeightFunction operator+(WeightFunction a, const WeightFunction& b) { return a += b; }
  friend WeightFunction operator*(const Rational& c, WeightFunction a) {
    for (Rational& v : a.heights) v *= c;
    return a;
  }
};

// delta^k_S: indicator of the k-subsets meeting both blocks of S.
inline KDissimilarityMap split_dissimilarity(const Split& S, int k) {
  KDissimilarityMap d(k, S.n);
  Mask a = S.block, b = S.other_block();
  std::vector<Mask> verts = all_ksubset_masks(k, S.n);
  for (size_t r = 0; r < verts.size(); ++r)
    d.values[r] = ((verts[r] & a) != 0 && (verts[r] & b) != 0) ? 1 : 0;
  return d;
}

// w_D(K) = -D(K).
inline WeightFunction weight_of(const KDissimilarityMap& D) {
  WeightFunction w(D.k, D.n);
  for (size_t i = 0; i < D.values.size(); ++i) w.heights[i] = -D.values[i];
  return w;
}

inline KDissimilarityMap dissimilarity_of(const WeightFunction& w) {
  KDissimilarityMap D(w.k, w.n);
  for (size_t i = 0; i < w.heights.size(); ++i) D.values[i] = -w.heights[i];
  return D;
}

// A set of splits with positive rational weights.
struct WeightedSplitSystem {
  int n = 0;
  std::map<Split, Rational> weights;

  bool contains(const Split& s) const { return weights.count(s) != 0; }

  void add(const Split& s, const Rational& w) {
    if (w <= 0) throw std::invalid_argument("split weights must be positive");
    if (!weights.emplace(s, w).second) throw std::invalid_argument("duplicate split");
  }

  std::vector<Split> splits() const {
    std::vector<Split> out;
    out.reserve(weights.size());
    for (const auto& [s, w] : weights) out.push_back(s);
    return out;
  }
};

}  // namespace ksplit
