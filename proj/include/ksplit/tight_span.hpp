#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "ksplit/subdivision.hpp"

namespace ksplit {

struct FacePosetNode {
  std::vector<int> vertex_ranks;
  int dim = 0;
};

// Interior faces of a subdivision ordered by inclusion.  The tight-span
// complex of the weight function is this poset read upside down: a cell of
// dimension d dualizes to a tight-span face of dimension (n-1) - d.
struct FacePoset {
  int k = 0;
  int n = 0;
  std::vector<FacePosetNode> nodes;              // sorted by (dim, vertex set)
  std::vector<std::pair<int, int>> covering;     // (lower node id, upper node id)

  int max_dim() const {
    int d = -1;
    for (const auto& f : nodes) d = std::max(d, f.dim);
    return d;
  }
  int min_dim() const {
    int d = 1 << 30;
    for (const auto& f : nodes) d = std::min(d, f.dim);
    return nodes.empty() ? -1 : d;
  }
};

namespace detail {

// All faces of conv(points of the given ranks), as vertex-rank sets.
// Simplicial cells shortcut to the power set; general cells recurse through
// hull facets in affine coordinates.
inline void collect_faces(const std::vector<int>& ranks, const std::vector<QVec>& pts,
                          std::map<std::vector<int>, int>& out) {
  std::vector<QVec> sub;
  sub.reserve(ranks.size());
  for (int r : ranks) sub.push_back(pts[r]);
  int dim = affine_dim(sub);
  auto [it, fresh] = out.emplace(ranks, dim);
  if (!fresh) return;

  if (dim == 0) return;
  if (static_cast<int>(ranks.size()) == dim + 1) {
    // simplex: every nonempty proper subset is a face
    std::vector<int> subset;
    for (unsigned pick = 1; pick + 1 < (1u << ranks.size()); ++pick) {
      subset.clear();
      for (size_t i = 0; i < ranks.size(); ++i)
        if (pick & (1u << i)) subset.push_back(ranks[i]);
      out.emplace(subset, static_cast<int>(subset.size()) - 1);
    }
    return;
  }

  // reduce to full-dimensional coordinates via pivot columns
  QMat diffs;
  for (size_t i = 1; i < sub.size(); ++i) {
    QVec d(sub[i].size());
    for (size_t j = 0; j < d.size(); ++j) d[j] = sub[i][j] - sub[0][j];
    diffs.push_back(std::move(d));
  }
  std::vector<int> cols = row_reduce(diffs);
  std::vector<QVec> reduced(sub.size(), QVec(cols.size()));
  for (size_t i = 0; i < sub.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) reduced[i][j] = sub[i][cols[j]];

  for (const Facet& f : convex_hull_facets(reduced)) {
    std::vector<int> child;
    for (int idx : f.vertices) child.push_back(ranks[idx]);
    collect_faces(child, pts, out);
  }
}

}  // namespace detail

inline FacePoset tight_span_poset(const Subdivision& s) {
  int n = s.n;
  std::vector<Mask> verts = all_ksubset_masks(s.k, n);
  std::vector<QVec> pts;
  pts.reserve(verts.size());
  for (Mask v : verts) pts.push_back(chart_point(v, n));

  std::map<std::vector<int>, int> faces;
  for (const Cell& c : s.cells) detail::collect_faces(c.vertex_ranks, pts, faces);

  FacePoset poset;
  poset.k = s.k;
  poset.n = n;
  for (const auto& [ranks, dim] : faces) {
    // boundary faces sit inside some facet x_i = 0 or x_i = 1 of the
    // hypersimplex
    bool interior = true;
    for (int i = 1; i <= n && interior; ++i) {
      bool all_in = true, all_out = true;
      for (int r : ranks) {
        if (mask_contains(verts[r], i))
          all_out = false;
        else
          all_in = false;
      }
      if (all_in || all_out) interior = false;
    }
    if (interior) poset.nodes.push_back({ranks, dim});
  }
  std::sort(poset.nodes.begin(), poset.nodes.end(), [](const FacePosetNode& a, const FacePosetNode& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertex_ranks < b.vertex_ranks;
  });

  for (size_t i = 0; i < poset.nodes.size(); ++i) {
    for (size_t j = 0; j < poset.nodes.size(); ++j) {
      if (poset.nodes[j].dim != poset.nodes[i].dim + 1) continue;
      if (std::includes(poset.nodes[j].vertex_ranks.begin(), poset.nodes[j].vertex_ranks.end(),
                        poset.nodes[i].vertex_ranks.begin(), poset.nodes[i].vertex_ranks.end()))
        poset.covering.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return poset;
}

inline FacePoset tight_span_poset(const WeightFunction& w) {
  return tight_span_poset(regular_subdivision(w));
}

// Dual graph on maximal cells through interior walls; connectivity of the
// tight-span 1-skeleton.
inline bool dual_graph_connected(const Subdivision& s) {
  size_t m = s.cells.size();
  if (m <= 1) return true;
  int n = s.n;
  std::vector<Mask> verts = all_ksubset_masks(s.k, n);
  std::vector<std::vector<int>> adj(m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      std::vector<int> common;
      common.reserve(std::min(s.cells[i].vertex_ranks.size(), s.cells[j].vertex_ranks.size()));
      std::set_intersection(s.cells[i].vertex_ranks.begin(), s.cells[i].vertex_ranks.end(),
                            s.cells[j].vertex_ranks.begin(), s.cells[j].vertex_ranks.end(),
                            std::back_inserter(common));
      if (static_cast<int>(common.size()) < n - 1) continue;
      std::vector<QVec> pts;
      for (int r : common) pts.push_back(chart_point(verts[r], n));
      if (affine_dim(pts) == n - 2) {
        adj[i].push_back(static_cast<int>(j));
        adj[j].push_back(static_cast<int>(i));
      }
    }
  std::vector<bool> seen(m, false);
  std::vector<int> stack{0};
  seen[0] = true;
  size_t reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == m;
}

}  // namespace ksplit
