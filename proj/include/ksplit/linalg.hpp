#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ksplit/rational.hpp"

namespace ksplit {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

inline Rational dot(const QVec& a, const QVec& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Row-reduces M in place, returns the pivot columns.  Full fraction-free is
// unnecessary at this scale; plain rational elimination is exact anyway.
inline std::vector<int> row_reduce(QMat& M) {
  std::vector<int> pivots;
  if (M.empty()) return pivots;
  size_t rows = M.size(), cols = M[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    Rational inv = M[r][c];
    for (size_t j = c; j < cols; ++j) M[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rational f = M[i][c];
      for (size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

inline int rank(QMat M) { return static_cast<int>(row_reduce(M).size()); }

namespace detail {

// Rank over machine integers with overflow bailout.  Rows are scaled by
// their denominator lcm first (rank-invariant); entries that stop fitting
// send the caller back to the exact path.
inline std::optional<int> rank_int64(std::vector<std::vector<long long>> M) {
  size_t rows = M.size(), cols = rows == 0 ? 0 : M[0].size();
  int r = 0;
  for (size_t c = 0; c < cols && static_cast<size_t>(r) < rows; ++c) {
    size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (M[i][c] == 0) continue;
      // eliminate: row_i := row_i * M[r][c] - row_r * M[i][c]
      __int128 a = M[r][c], b = M[i][c];
      for (size_t j = c; j < cols; ++j) {
        __int128 v = a * static_cast<__int128>(M[i][j]) - b * static_cast<__int128>(M[r][j]);
        if (v > 0x3fffffffffffffffLL || v < -0x3fffffffffffffffLL) return std::nullopt;
        M[i][j] = static_cast<long long>(v);
      }
      // keep entries small
      long long g = 0;
      for (size_t j = c; j < cols; ++j) {
        long long x = M[i][j] < 0 ? -M[i][j] : M[i][j];
        g = std::__gcd(g, x);
      }
      if (g > 1)
        for (size_t j = c; j < cols; ++j) M[i][j] /= g;
    }
    ++r;
  }
  return r;
}

inline std::optional<std::vector<long long>> int_row(const QVec& row) {
  mpz_class lcm_den = 1;
  for (const Rational& q : row)
    if (q != 0) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());
  if (!lcm_den.fits_slong_p()) return std::nullopt;
  std::vector<long long> out(row.size());
  mpz_class tmp;
  for (size_t j = 0; j < row.size(); ++j) {
    tmp = row[j].get_num() * (lcm_den / row[j].get_den());
    if (!tmp.fits_slong_p()) return std::nullopt;
    out[j] = tmp.get_si();
    if (out[j] > 0x1fffffffLL || out[j] < -0x1fffffffLL) return std::nullopt;
  }
  return out;
}

}  // namespace detail

// Dimension of the affine hull of the given points (-1 if none).
inline int affine_dim(const std::vector<QVec>& pts) {
  if (pts.empty()) return -1;
  if (pts.size() == 1) return 0;

  std::vector<std::vector<long long>> fast;
  fast.reserve(pts.size() - 1);
  bool ok = true;
  for (size_t i = 1; i < pts.size() && ok; ++i) {
    QVec d(pts[i].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    if (auto row = detail::int_row(d))
      fast.push_back(std::move(*row));
    else
      ok = false;
  }
  if (ok) {
    if (std::optional<int> r = detail::rank_int64(std::move(fast))) return *r;
  }

  QMat diffs;
  for (size_t i = 1; i < pts.size(); ++i) {
    QVec d(pts[i].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(std::move(d));
  }
  return rank(std::move(diffs));
}

// One solution of A x = b, if consistent.  unique is set when the kernel is
// trivial on the involved columns.
inline std::optional<QVec> solve_linear(const QMat& A, const QVec& b, bool* unique = nullptr) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  QMat M(rows, QVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) M[i][j] = A[i][j];
    M[i][cols] = b[i];
  }
  std::vector<int> pivots = row_reduce(M);
  for (int p : pivots)
    if (static_cast<size_t>(p) == cols) return std::nullopt;  // 0 = nonzero row
  QVec x(cols, Rational(0));
  for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = M[i][cols];
  if (unique) *unique = pivots.size() == cols;
  return x;
}

// Basis of the kernel of A.
inline std::vector<QVec> kernel_basis(QMat A) {
  size_t cols = A.empty() ? 0 : A[0].size();
  std::vector<int> pivots = row_reduce(A);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<QVec> basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    QVec v(cols, Rational(0));
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -A[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Clears denominators and common integer factors; first nonzero entry > 0.
inline void make_primitive(QVec& v) {
  mpz_class lcm_den = 1, gcd_num = 0;
  for (const Rational& q : v)
    if (q != 0) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());
  for (Rational& q : v) q *= lcm_den;
  for (const Rational& q : v)
    if (q != 0) mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), q.get_num().get_mpz_t());
  if (gcd_num == 0) return;
  for (Rational& q : v) q /= Rational(gcd_num);
  for (const Rational& q : v) {
    if (q == 0) continue;
    if (q < 0)
      for (Rational& r : v) r = -r;
    break;
  }
}

// ---------------------------------------------------------------------------
// Exact simplex, standard form: maximize c.x subject to A x = b, x >= 0.
// Bland's rule, so it terminates on the degenerate instances polytope code
// produces all the time.
// ---------------------------------------------------------------------------

struct LpResult {
  enum Status { kOptimal, kInfeasible, kUnbounded } status = kInfeasible;
  Rational value;
  QVec x;
};

namespace detail {

// Pivots the tableau rows plus the objective row at (row, col).
inline void lp_pivot(QMat& T, QVec& obj, std::vector<int>& basic, int row, int col) {
  size_t ncols = T[0].size();
  Rational inv = T[row][col];
  for (size_t j = 0; j < ncols; ++j) T[row][j] /= inv;
  for (size_t i = 0; i < T.size(); ++i) {
    if (static_cast<int>(i) == row || T[i][col] == 0) continue;
    Rational f = T[i][col];
    for (size_t j = 0; j < ncols; ++j) T[i][j] -= f * T[row][j];
  }
  if (obj[col] != 0) {
    Rational f = obj[col];
    for (size_t j = 0; j < ncols; ++j) obj[j] -= f * T[row][j];
  }
  basic[row] = col;
}

// Runs simplex iterations until the objective row has no positive entry.
// Returns false on unboundedness.
inline bool lp_iterate(QMat& T, QVec& obj, std::vector<int>& basic, int nvars) {
  size_t rhs = T.empty() ? 0 : T[0].size() - 1;
  for (;;) {
    int enter = -1;
    for (int j = 0; j < nvars; ++j)
      if (obj[j] > 0) { enter = j; break; }  // Bland
    if (enter < 0) return true;
    int leave = -1;
    Rational best;
    for (size_t i = 0; i < T.size(); ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][rhs] / T[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basic[i] < basic[leave])) {
        leave = static_cast<int>(i);
        best = ratio;
      }
    }
    if (leave < 0) return false;
    lp_pivot(T, obj, basic, leave, enter);
  }
}

}  // namespace detail

inline LpResult lp_maximize(const QMat& A, const QVec& b, const QVec& c) {
  size_t m = A.size();
  size_t nv = c.size();
  LpResult res;
  if (m == 0) throw std::invalid_argument("lp with no constraints");

  // Tableau columns: nv original variables, m artificials, rhs.
  size_t total = nv + m;
  QMat T(m, QVec(total + 1, Rational(0)));
  std::vector<int> basic(m);
  for (size_t i = 0; i < m; ++i) {
    bool flip = b[i] < 0;
    for (size_t j = 0; j < nv; ++j) T[i][j] = flip ? -A[i][j] : A[i][j];
    T[i][total] = flip ? -b[i] : b[i];
    T[i][nv + i] = 1;
    basic[i] = static_cast<int>(nv + i);
  }

  // Phase 1: maximize -(sum of artificials).
  QVec obj(total + 1, Rational(0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= total; ++j) obj[j] += T[i][j];  // cost row for sum of artificials
  for (size_t j = nv; j < total; ++j) obj[j] -= 1;
  if (!detail::lp_iterate(T, obj, basic, static_cast<int>(nv)))
    throw std::logic_error("phase 1 unbounded");
  if (obj[total] != 0) {
    res.status = LpResult::kInfeasible;
    return res;
  }
  // Drive leftover artificials out of the basis (or drop redundant rows).
  for (size_t i = 0; i < T.size();) {
    if (basic[i] < static_cast<int>(nv)) { ++i; continue; }
    int col = -1;
    for (size_t j = 0; j < nv; ++j)
      if (T[i][j] != 0) { col = static_cast<int>(j); break; }
    if (col >= 0) {
      detail::lp_pivot(T, obj, basic, static_cast<int>(i), col);
      ++i;
    } else {
      T.erase(T.begin() + i);
      basic.erase(basic.begin() + i);
    }
  }

  // Phase 2 objective row: c_j minus the basic combination.
  QVec obj2(total + 1, Rational(0));
  for (size_t j = 0; j < nv; ++j) obj2[j] = c[j];
  for (size_t i = 0; i < T.size(); ++i) {
    Rational cb = c[basic[i]];
    if (cb == 0) continue;
    for (size_t j = 0; j <= total; ++j) obj2[j] -= cb * T[i][j];
  }
  for (size_t j = nv; j < total; ++j) obj2[j] = -1;  // keep artificials out
  if (!detail::lp_iterate(T, obj2, basic, static_cast<int>(nv))) {
    res.status = LpResult::kUnbounded;
    return res;
  }

  res.status = LpResult::kOptimal;
  res.x.assign(nv, Rational(0));
  size_t rhs = total;
  for (size_t i = 0; i < T.size(); ++i)
    if (basic[i] < static_cast<int>(nv)) res.x[basic[i]] = T[i][rhs];
  res.value = dot(c, res.x);
  return res;
}

inline bool lp_feasible(const QMat& A, const QVec& b) {
  QVec c(A.empty() ? 0 : A[0].size(), Rational(0));
  return lp_maximize(A, b, c).status == LpResult::kOptimal;
}

// Is x a convex combination of the given points?
inline bool point_in_hull(const std::vector<QVec>& pts, const QVec& x) {
  if (pts.empty()) return false;
  size_t d = x.size();
  QMat A(d + 1, QVec(pts.size()));
  QVec b(d + 1);
  for (size_t j = 0; j < pts.size(); ++j) {
    for (size_t i = 0; i < d; ++i) A[i][j] = pts[j][i];
    A[d][j] = 1;
  }
  for (size_t i = 0; i < d; ++i) b[i] = x[i];
  b[d] = 1;
  return lp_feasible(A, b);
}

}  // namespace ksplit
