// Test-only oracles, kept independent of the production geometry paths:
// the lower-hull oracle enumerates candidate vertex sets and certifies each
// through a supporting-hyperplane LP, and the coherency-index oracle walks
// candidate breakpoints from circuits of the lifted configuration.
#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "ksplit/dissimilarity.hpp"
#include "ksplit/linalg.hpp"
#include "ksplit/subdivision.hpp"

namespace ksplit::testing {

// Every maximal lower face, found by LP: heights y with an affine ell such
// that ell(v) <= w(v) everywhere; the face is the equality set, kept when it
// spans dimension n-2 in the chart... (full-dimensional cells only).
//
// The LP searches for a functional tight at a seed subset; enumerating seed
// subsets of size n (affinely independent) covers every maximal cell.
inline std::vector<std::vector<int>> brute_force_lower_cells(const WeightFunction& w) {
  int n = w.n;
  std::vector<Mask> verts = all_ksubset_masks(w.k, n);
  size_t m = verts.size();
  std::vector<QVec> pts(m);
  for (size_t r = 0; r < m; ++r) pts[r] = chart_point(verts[r], n);

  std::set<std::vector<int>> cells;

  // candidate functional from each affinely independent n-subset of points
  std::vector<int> idx(n);
  std::vector<bool> used(m, false);
  auto try_support = [&](const std::vector<int>& seed) {
    // solve ell(p_i) = w_i on the seed:  a . p + a0 = w
    QMat A;
    QVec b;
    for (int r : seed) {
      QVec row = pts[r];
      row.push_back(1);
      A.push_back(std::move(row));
      b.push_back(w.heights[r]);
    }
    bool unique = false;
    std::optional<QVec> sol = solve_linear(A, b, &unique);
    if (!sol || !unique) return;
    AffineFn ell;
    ell.offset = sol->back();
    sol->pop_back();
    ell.coeffs = std::move(*sol);
    std::vector<int> face;
    for (size_t r = 0; r < m; ++r) {
      Rational v = ell.eval(pts[r]);
      if (v > w.heights[r]) return;  // not supporting from below
      if (v == w.heights[r]) face.push_back(static_cast<int>(r));
    }
    std::vector<QVec> fp;
    for (int r : face) fp.push_back(pts[r]);
    if (affine_dim(fp) == n - 1) cells.insert(face);
  };

  // depth-first over strictly increasing n-tuples
  std::vector<int> seed;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(seed.size()) == n) {
      try_support(seed);
      return;
    }
    for (int r = start; r < static_cast<int>(m); ++r) {
      seed.push_back(r);
      // prune: seed must stay affinely independent
      std::vector<QVec> sp;
      for (int s : seed) sp.push_back(pts[s]);
      if (affine_dim(sp) == static_cast<int>(seed.size()) - 1) self(self, r + 1);
      seed.pop_back();
    }
  };
  rec(rec, 0);
  return {cells.begin(), cells.end()};
}

// Coherency index by breakpoint search: circuits of the lifted vertex set
// give the heights where the subdivision of w - lambda * w_split can change;
// the answer is the largest candidate that is still a coherent sum,
// certified by the subdivision engine's own coherence test.
inline Rational coherency_index_breakpoints(const WeightFunction& w, Mask A) {
  int n = w.n, k = w.k;
  std::vector<Mask> verts = all_ksubset_masks(k, n);
  size_t m = verts.size();
  std::vector<QVec> pts(m);
  for (size_t r = 0; r < m; ++r) pts[r] = chart_point(verts[r], n);
  WeightFunction split_w = split_weight_function_raw(A, k, n);

  // circuits: minimal affinely dependent subsets, size <= n+1
  std::set<Rational> candidates;
  std::vector<int> sel;
  auto process = [&](const std::vector<int>& sub) {
    // affine dependence: sum c_i (p_i,1) = 0, unique up to scale for circuits
    QMat M(n, QVec(sub.size()));
    for (size_t j = 0; j < sub.size(); ++j) {
      for (int i = 0; i < n - 1; ++i) M[i][j] = pts[sub[j]][i];
      M[n - 1][j] = 1;
    }
    std::vector<QVec> kern = kernel_basis(M);
    if (kern.size() != 1) return;  // not a circuit
    const QVec& c = kern[0];
    for (const Rational& ci : c)
      if (ci == 0) return;  // dependence not supported on the whole subset
    Rational num = 0, den = 0;
    for (size_t j = 0; j < sub.size(); ++j) {
      num += c[j] * w.heights[sub[j]];
      den += c[j] * split_w.heights[sub[j]];
    }
    if (den == 0) return;
    Rational lambda = num / den;
    if (lambda > 0) candidates.insert(lambda);
  };
  auto rec = [&](auto&& self, size_t start) -> void {
    if (sel.size() >= 3) process(sel);
    if (sel.size() == static_cast<size_t>(n) + 1) return;
    for (size_t r = start; r < m; ++r) {
      sel.push_back(static_cast<int>(r));
      self(self, r + 1);
      sel.pop_back();
    }
  };
  rec(rec, 0);

  Rational best = 0;
  for (const Rational& lambda : candidates) {
    WeightFunction rest = w;
    for (size_t r = 0; r < m; ++r) rest.heights[r] -= lambda * split_w.heights[r];
    if (is_coherent_sum(rest, lambda * split_w)) best = std::max(best, lambda);
  }
  return best;
}

}  // namespace ksplit::testing
