#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ksplit/dissimilarity.hpp"
#include "ksplit/parallel.hpp"
#include "ksplit/subdivision.hpp"

namespace ksplit {

// ---------------------------------------------------------------------------
// Wall bends.  Subtracting lambda times the natural split height function of
// sum_A x = 1 from a weight function lowers the bend of its lower-hull
// surface across every wall lying in that hyperplane by exactly lambda, and
// touches nothing else.  The largest coherent lambda is therefore the
// smallest such bend, provided no cell of the subdivision crosses the
// hyperplane at all (otherwise no positive lambda is coherent).
// ---------------------------------------------------------------------------

// Smallest bend of the subdivision across sum_A x = 1, or nullopt when some
// cell crosses the hyperplane.  Bends are measured against the unit-height
// split function max(0, 1 - sum_A x).
inline std::optional<Rational> min_wall_bend(const Subdivision& s, Mask A) {
  int n = s.n;
  std::vector<Mask> verts = all_ksubset_masks(s.k, n);

  std::vector<int> low, high;
  for (size_t i = 0; i < s.cells.size(); ++i) {
    int lo = s.cells[i].min_level(A, verts);
    int hi = s.cells[i].max_level(A, verts);
    if (lo == 0 && hi >= 2) return std::nullopt;  // crossing cell
    if (lo == 0)
      low.push_back(static_cast<int>(i));
    else
      high.push_back(static_cast<int>(i));
  }

  AffineFn level = subset_level_fn(A, s.k, n);
  std::optional<Rational> best;
  for (int il : low) {
    const Cell& cl = s.cells[il];
    for (int ih : high) {
      const Cell& ch = s.cells[ih];
      std::vector<int> common;
      common.reserve(std::min(cl.vertex_ranks.size(), ch.vertex_ranks.size()));
      std::set_intersection(cl.vertex_ranks.begin(), cl.vertex_ranks.end(),
                            ch.vertex_ranks.begin(), ch.vertex_ranks.end(),
                            std::back_inserter(common));
      if (static_cast<int>(common.size()) < n - 1) continue;
      std::vector<QVec> pts;
      for (int r : common) pts.push_back(chart_point(verts[r], n));
      if (affine_dim(pts) != n - 2) continue;

      if (!cl.has_functional || !ch.has_functional)
        throw std::logic_error("wall bend needs supporting functionals");
      // functional difference must be a positive multiple of (sum_A x - 1)
      Rational beta;
      bool have_beta = false;
      for (int j = 0; j < n - 1; ++j) {
        if (level.coeffs[j] == 0) continue;
        beta = (ch.functional.coeffs[j] - cl.functional.coeffs[j]) / level.coeffs[j];
        have_beta = true;
        break;
      }
      if (!have_beta) beta = (ch.functional.offset - cl.functional.offset) / level.offset;
      for (int j = 0; j < n - 1; ++j)
        if (ch.functional.coeffs[j] - cl.functional.coeffs[j] != beta * level.coeffs[j])
          throw std::logic_error("wall functional difference not supported on hyperplane");
      if (ch.functional.offset - cl.functional.offset != beta * level.offset)
        throw std::logic_error("wall functional difference not supported on hyperplane");
      if (beta <= 0) throw std::logic_error("nonpositive wall bend");
      if (!best || beta < *best) best = beta;
    }
  }
  if (!best) throw std::logic_error("hyperplane refined by subdivision but no wall found");
  return best;
}

// Coherency index of w with respect to the split weight function of S_A
// (heights k on the A-avoiding vertices): the largest lambda such that
// (w - lambda w_{S_A}) + lambda w_{S_A} is a coherent sum.
inline Rational coherency_index(const Subdivision& s, Mask A) {
  if (!is_split_defining_subset(A, s.k, s.n))
    throw std::invalid_argument("subset does not define a split");
  std::optional<Rational> bend = min_wall_bend(s, A);
  if (!bend) return Rational(0);
  return *bend / Rational(s.k);
}

inline Rational coherency_index(const WeightFunction& w, Mask A) {
  return coherency_index(regular_subdivision(w), A);
}

// ---------------------------------------------------------------------------
// Split indices of k-dissimilarity maps.
// ---------------------------------------------------------------------------

// Index of a nontrivial split of X against a precomputed subdivision of the
// map's weight function.  Subtracting lambda * delta^k_S subtracts the
// unit-height split functions of every split-defining block at once, so the
// per-hyperplane budgets combine: at k = 2 both blocks cut the same
// hyperplane (bend halves), otherwise each defining block constrains its
// own hyperplane.
inline Rational nontrivial_split_index(const Subdivision& s, const Split& S) {
  if (S.is_trivial()) throw std::invalid_argument("split index needs a nontrivial split");
  int k = s.k, n = s.n;
  Mask A = S.block, B = S.other_block();
  int sa = mask_size(A), sb = mask_size(B);
  if (std::max(sa, sb) < k) return Rational(0);  // constant map delta, by fiat

  if (k == 2) {
    std::optional<Rational> bend = min_wall_bend(s, A);
    return bend ? *bend / 2 : Rational(0);
  }
  std::optional<Rational> alpha;
  for (Mask F : {A, B}) {
    if (!is_split_defining_subset(F, k, n)) continue;
    std::optional<Rational> bend = min_wall_bend(s, F);
    if (!bend) return Rational(0);
    if (!alpha || *bend < *alpha) alpha = *bend;
  }
  return alpha ? *alpha : Rational(0);
}

inline Rational nontrivial_split_index(const KDissimilarityMap& D, const Split& S) {
  return nontrivial_split_index(regular_subdivision(weight_of(D)), S);
}

// Bandelt-Dress isolation index for k = 2, used as the independent oracle
// and as the fast path of the decomposition.  A zero running minimum stops
// the scan early when allowed: individual terms are never negative.
inline Rational bandelt_dress_isolation_index(const KDissimilarityMap& d, const Split& S,
                                              bool early_exit = false) {
  if (d.k != 2) throw std::invalid_argument("isolation index is a k=2 notion");
  if (S.is_trivial()) throw std::invalid_argument("isolation index needs a nontrivial split");
  std::vector<int> A = mask_elements(S.block);
  std::vector<int> B = mask_elements(S.other_block());
  auto dist = [&](int x, int y) -> Rational {
    if (x == y) return Rational(0);
    return d.at(mask_of(x) | mask_of(y));
  };
  std::optional<Rational> best;
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = i; j < A.size(); ++j)
      for (size_t p = 0; p < B.size(); ++p)
        for (size_t q = p; q < B.size(); ++q) {
          int a = A[i], a2 = A[j], b = B[p], b2 = B[q];
          Rational s1 = dist(a, b) + dist(a2, b2);
          Rational s2 = dist(a, b2) + dist(a2, b);
          Rational s3 = dist(a, a2) + dist(b, b2);
          Rational v = std::max(std::max(s1, s2), s3) - s3;
          if (!best || v < *best) {
            best = v;
            if (early_exit && *best == 0) return Rational(0);
          }
        }
  return *best / 2;
}

// Trivial split index, the closed form: half the minimum of
// D(L,a,b) + D(L,a,c) - D(L,b,c) over (k-2)-sets L avoiding a and distinct
// b, c outside L + a.  Meaningful on maps already free of nontrivial
// splits; may be negative.
inline Rational trivial_split_index_paper(const KDissimilarityMap& D, int a) {
  int k = D.k, n = D.n;
  if (a < 1 || a > n) throw std::out_of_range("element out of range");
  if (n < k + 2) throw std::invalid_argument("trivial split index needs n >= k+2");
  Mask rest = full_mask(n) & ~mask_of(a);
  std::optional<Rational> best;
  // enumerate L as (k-2)-subsets of rest
  std::vector<int> pool = mask_elements(rest);
  std::vector<int> choose(k - 2);
  auto recurse = [&](auto&& self, int start, int depth) -> void {
    if (depth == k - 2) {
      Mask L = 0;
      for (int e : choose) L |= mask_of(e);
      std::vector<int> outside = mask_elements(rest & ~L);
      for (size_t i = 0; i < outside.size(); ++i)
        for (size_t j = i + 1; j < outside.size(); ++j) {
          int b = outside[i], c = outside[j];
          Rational v = D.at(L | mask_of(a) | mask_of(b)) + D.at(L | mask_of(a) | mask_of(c)) -
                       D.at(L | mask_of(b) | mask_of(c));
          if (!best || v < *best) best = v;
        }
      return;
    }
    for (int i = start; i < static_cast<int>(pool.size()); ++i) {
      choose[depth] = pool[i];
      self(self, i + 1, depth + 1);
    }
  };
  recurse(recurse, 0, 0);
  return *best / 2;
}

// Exact least-squares projection onto the span of the trivial split maps.
// The Gram matrix has diagonal C(n-1,k-1) and off-diagonal C(n-2,k-2), and
// is invertible for 2 <= k < n, so the coefficients are unique.
struct TrivialProjection {
  std::vector<Rational> coefficients;  // indexed by element-1
  KDissimilarityMap remainder;
};

inline TrivialProjection trivial_projection(const KDissimilarityMap& D) {
  int k = D.k, n = D.n;
  QMat G(n, QVec(n));
  QVec r(n);
  Rational diag = Rational(static_cast<long>(binomial(n - 1, k - 1)));
  Rational off = Rational(static_cast<long>(binomial(n - 2, k - 2)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = (i == j) ? diag : off;
  std::vector<Mask> verts = all_ksubset_masks(k, n);
  for (int a = 1; a <= n; ++a) {
    Rational s = 0;
    for (size_t t = 0; t < verts.size(); ++t)
      if (mask_contains(verts[t], a)) s += D.values[t];
    r[a - 1] = s;
  }
  bool unique = false;
  std::optional<QVec> sol = solve_linear(G, r, &unique);
  if (!sol || !unique) throw std::logic_error("trivial split maps failed to span");

  TrivialProjection out;
  out.coefficients = *sol;
  out.remainder = D;
  for (size_t t = 0; t < verts.size(); ++t) {
    Rational proj = 0;
    for (int a = 1; a <= n; ++a)
      if (mask_contains(verts[t], a)) proj += (*sol)[a - 1];
    out.remainder.values[t] -= proj;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The split decomposition.
// ---------------------------------------------------------------------------

enum class TrivialMode { kPaper, kProjection };

struct SplitDecomposition {
  KDissimilarityMap source;
  WeightedSplitSystem nontrivial;            // strictly positive indices only
  std::map<int, Rational> trivial_index;     // element -> alpha (any sign)
  KDissimilarityMap residual;                // source minus all split parts
  TrivialMode trivial_mode = TrivialMode::kPaper;

  bool identity_holds() const {
    KDissimilarityMap acc = residual;
    for (const auto& [s, alpha] : nontrivial.weights) acc += alpha * split_dissimilarity(s, source.k);
    for (const auto& [a, alpha] : trivial_index)
      if (alpha != 0) acc += alpha * split_dissimilarity(trivial_split(a, source.n), source.k);
    return acc == source;
  }
};

// Nonnegative with all triangle inequalities: the regime where the closed
// isolation-index form provably computes the coherency index.
inline bool is_metric(const KDissimilarityMap& d) {
  if (d.k != 2) return false;
  for (const Rational& v : d.values)
    if (v < 0) return false;
  for (int a = 1; a <= d.n; ++a)
    for (int b = a + 1; b <= d.n; ++b)
      for (int x = 1; x <= d.n; ++x) {
        if (x == a || x == b) continue;
        if (d.at(mask_of(a) | mask_of(b)) >
            d.at(mask_of(a) | mask_of(x)) + d.at(mask_of(x) | mask_of(b)))
          return false;
      }
  return true;
}

// Indices of all nontrivial splits of X.  Metric k = 2 maps go through the
// closed isolation-index form; everything else prices every split off one
// lower-hull computation.  (On non-metric maps the closed form can fall
// below the true coherency index, so it is only a fast path, not a
// definition.)
inline std::map<Split, Rational> all_nontrivial_split_indices(const KDissimilarityMap& D,
                                                               int jobs = 1) {
  std::vector<Split> splits = all_nontrivial_splits(D.n);
  std::vector<Rational> alpha(splits.size());
  if (D.k == 2 && is_metric(D)) {
    parallel_for(jobs, splits.size(), [&](size_t i) {
      alpha[i] = bandelt_dress_isolation_index(D, splits[i], /*early_exit=*/true);
    });
  } else {
    Subdivision s = regular_subdivision(weight_of(D));
    parallel_for(jobs, splits.size(),
                 [&](size_t i) { alpha[i] = nontrivial_split_index(s, splits[i]); });
  }
  std::map<Split, Rational> out;
  for (size_t i = 0; i < splits.size(); ++i) out[splits[i]] = alpha[i];
  return out;
}

inline SplitDecomposition split_decompose(const KDissimilarityMap& D,
                                          TrivialMode mode = TrivialMode::kPaper,
                                          int jobs = 1) {
  SplitDecomposition dec;
  dec.source = D;
  dec.trivial_mode = mode;
  dec.nontrivial.n = D.n;

  KDissimilarityMap rest = D;
  for (const auto& [S, alpha] : all_nontrivial_split_indices(D, jobs)) {
    if (alpha == 0) continue;
    if (alpha < 0) throw std::logic_error("negative nontrivial split index");
    dec.nontrivial.add(S, alpha);
    rest -= alpha * split_dissimilarity(S, D.k);
  }

  if (mode == TrivialMode::kPaper) {
    for (int a = 1; a <= D.n; ++a) dec.trivial_index[a] = trivial_split_index_paper(rest, a);
    for (const auto& [a, alpha] : dec.trivial_index)
      if (alpha != 0) rest -= alpha * split_dissimilarity(trivial_split(a, D.n), D.k);
    dec.residual = std::move(rest);
  } else {
    TrivialProjection proj = trivial_projection(rest);
    for (int a = 1; a <= D.n; ++a) dec.trivial_index[a] = proj.coefficients[a - 1];
    dec.residual = std::move(proj.remainder);
  }
  return dec;
}

inline bool is_split_prime(const KDissimilarityMap& D) {
  for (const auto& [S, alpha] : all_nontrivial_split_indices(D))
    if (alpha != 0) return false;
  if (D.n >= D.k + 2) {
    for (int a = 1; a <= D.n; ++a)
      if (trivial_split_index_paper(D, a) != 0) return false;
  }
  return true;
}

// S_D: the splits of X carrying strictly positive index in the split
// decomposition, trivial ones included.
inline WeightedSplitSystem support_splits(const KDissimilarityMap& D) {
  SplitDecomposition dec = split_decompose(D, TrivialMode::kPaper);
  WeightedSplitSystem out = dec.nontrivial;
  out.n = D.n;
  for (const auto& [a, alpha] : dec.trivial_index)
    if (alpha > 0) out.add(trivial_split(a, D.n), alpha);
  return out;
}

}  // namespace ksplit
