#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksplit/compatibility.hpp"
#include "ksplit/decomposition.hpp"
#include "ksplit/dissimilarity.hpp"

namespace ksplit {

// Leaf-labelled weighted tree without degree-2 vertices; trees are unrooted
// internally, rooting in Newick input is erased on parse.
struct PhyloTree {
  struct Edge {
    int u = 0;
    int v = 0;
    Rational weight;
  };

  int n = 0;                            // leaves labelled 1..n
  int vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<int> vertex_label;        // 0 for internal vertices
  std::vector<int> leaf_vertex;         // label -> vertex (index label-1)

  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(vertex_count);
    for (size_t e = 0; e < edges.size(); ++e) {
      adj[edges[e].u].push_back({edges[e].v, static_cast<int>(e)});
      adj[edges[e].v].push_back({edges[e].u, static_cast<int>(e)});
    }
    return adj;
  }

  void validate() const {
    if (n < 2) throw std::invalid_argument("tree needs at least two leaves");
    if (static_cast<int>(edges.size()) != vertex_count - 1)
      throw std::invalid_argument("edge count does not match a tree");
    auto adj = adjacency();
    std::vector<bool> seen(vertex_count, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != vertex_count) throw std::invalid_argument("tree is disconnected");
    for (int v = 0; v < vertex_count; ++v) {
      if (adj[v].size() == 2) throw std::invalid_argument("tree has a degree-2 vertex");
      if (adj[v].size() <= 1 && vertex_label[v] == 0)
        throw std::invalid_argument("unlabelled leaf");
      if (vertex_label[v] != 0 && adj[v].size() != 1)
        throw std::invalid_argument("labelled vertex is not a leaf");
    }
    std::vector<bool> have(n + 1, false);
    for (int v = 0; v < vertex_count; ++v) {
      int lbl = vertex_label[v];
      if (lbl == 0) continue;
      if (lbl < 1 || lbl > n || have[lbl]) throw std::invalid_argument("bad leaf labels");
      have[lbl] = true;
    }
    for (int a = 1; a <= n; ++a)
      if (!have[a]) throw std::invalid_argument("missing leaf label");
    for (const Edge& e : edges)
      if (e.weight <= 0) throw std::invalid_argument("edge weights must be positive");
  }
};

// ---------------------------------------------------------------------------
// Newick I/O.  Leaf names are the integers 1..n; branch lengths may be
// integers, p/q fractions or finite decimals, all parsed exactly.
// ---------------------------------------------------------------------------

namespace detail {

inline Rational parse_branch_length(const std::string& text, size_t pos) {
  if (text.empty()) throw std::invalid_argument("empty branch length at position " + std::to_string(pos));
  size_t dotp = text.find('.');
  if (dotp == std::string::npos) return parse_rational(text);
  std::string digits = text.substr(0, dotp) + text.substr(dotp + 1);
  size_t frac_digits = text.size() - dotp - 1;
  std::string den = "1";
  den.append(frac_digits, '0');
  return parse_rational(digits + "/" + den);
}

struct NewickParser {
  const std::string& text;
  size_t pos = 0;

  struct Node {
    int label = 0;  // leaf label, 0 internal
    std::optional<Rational> length;
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  explicit NewickParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("newick parse error at position " + std::to_string(pos) + ": " + what);
  }

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  int parse_node() {
    skip_space();
    int id = static_cast<int>(nodes.size());
    nodes.push_back({});
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      for (;;) {
        int child = parse_node();
        nodes[id].children.push_back(child);
        skip_space();
        if (pos >= text.size()) fail("unterminated group");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
      skip_space();
      size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      if (pos > start) fail("internal node labels are not supported");
    } else {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) fail("expected a leaf label");
      nodes[id].label = std::stoi(text.substr(start, pos - start));
      if (nodes[id].label < 1) fail("leaf labels start at 1");
    }
    skip_space();
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == '/' || text[pos] == '-' || text[pos] == '+'))
        ++pos;
      nodes[id].length = parse_branch_length(text.substr(start, pos - start), start);
    }
    return id;
  }
};

}  // namespace detail

inline PhyloTree parse_newick(const std::string& text) {
  detail::NewickParser p(text);
  int root = p.parse_node();
  p.skip_space();
  if (p.pos >= p.text.size() || p.text[p.pos] != ';') p.fail("expected ';'");
  ++p.pos;
  p.skip_space();
  if (p.pos != p.text.size()) p.fail("trailing characters");

  PhyloTree t;
  t.vertex_count = static_cast<int>(p.nodes.size());
  t.vertex_label.assign(t.vertex_count, 0);
  int max_label = 0;
  for (int i = 0; i < t.vertex_count; ++i) {
    const auto& node = p.nodes[i];
    t.vertex_label[i] = node.label;
    max_label = std::max(max_label, node.label);
    if (node.label != 0 && !node.children.empty())
      throw std::invalid_argument("labelled internal vertex");
    for (int c : node.children) {
      if (!p.nodes[c].length) throw std::invalid_argument("missing branch length");
      if (*p.nodes[c].length <= 0) throw std::invalid_argument("branch lengths must be positive");
      t.edges.push_back({i, c, *p.nodes[c].length});
    }
  }
  if (p.nodes[root].length) throw std::invalid_argument("root must not carry a branch length");
  t.n = max_label;

  // Suppress degree-2 vertices produced by rooting: merge their two edges.
  for (;;) {
    auto adj = t.adjacency();
    int victim = -1;
    for (int v = 0; v < t.vertex_count; ++v)
      if (adj[v].size() == 2 && t.vertex_label[v] == 0) {
        victim = v;
        break;
      }
    if (victim < 0) break;
    auto [w1, e1] = adj[victim][0];
    auto [w2, e2] = adj[victim][1];
    Rational merged = t.edges[e1].weight + t.edges[e2].weight;
    std::vector<PhyloTree::Edge> edges;
    for (int e = 0; e < static_cast<int>(t.edges.size()); ++e)
      if (e != e1 && e != e2) edges.push_back(t.edges[e]);
    edges.push_back({w1, w2, merged});
    // drop the vertex, compacting indices
    std::vector<int> remap(t.vertex_count, -1);
    int next = 0;
    for (int v = 0; v < t.vertex_count; ++v)
      if (v != victim) remap[v] = next++;
    for (auto& e : edges) {
      e.u = remap[e.u];
      e.v = remap[e.v];
    }
    std::vector<int> labels(next);
    for (int v = 0; v < t.vertex_count; ++v)
      if (v != victim) labels[remap[v]] = t.vertex_label[v];
    t.edges = std::move(edges);
    t.vertex_label = std::move(labels);
    t.vertex_count = next;
  }

  t.leaf_vertex.assign(t.n, -1);
  for (int v = 0; v < t.vertex_count; ++v)
    if (t.vertex_label[v] != 0) {
      if (t.vertex_label[v] > t.n || t.leaf_vertex[t.vertex_label[v] - 1] != -1)
        throw std::invalid_argument("bad leaf labels");
      t.leaf_vertex[t.vertex_label[v] - 1] = v;
    }
  t.validate();
  return t;
}

// Canonical Newick: rooted at the neighbor of leaf 1, children ordered by
// their smallest leaf label, weights emitted as exact rationals.
inline std::string emit_newick(const PhyloTree& t) {
  auto adj = t.adjacency();
  int leaf1 = t.leaf_vertex[0];
  auto [root, root_edge] = adj[leaf1][0];

  struct Sub {
    std::string text;
    int min_label;
  };
  auto render = [&](auto&& self, int v, int parent) -> Sub {
    if (t.vertex_label[v] != 0)
      return {std::to_string(t.vertex_label[v]), t.vertex_label[v]};
    std::vector<std::pair<int, std::string>> kids;
    for (auto [w, e] : adj[v]) {
      if (w == parent) continue;
      Sub s = self(self, w, v);
      kids.push_back({s.min_label, s.text + ":" + format_rational(t.edges[e].weight)});
    }
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ",";
      out += kids[i].second;
    }
    out += ")";
    return {out, kids.front().first};
  };

  if (t.n == 2) return "(1:" + format_rational(t.edges[0].weight) + ")2;";

  std::vector<std::pair<int, std::string>> kids;
  for (auto [w, e] : adj[root]) {
    Sub s = render(render, w, root);
    kids.push_back({s.min_label, s.text + ":" + format_rational(t.edges[e].weight)});
  }
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ",";
    out += kids[i].second;
  }
  out += ");";
  return out;
}

// ---------------------------------------------------------------------------
// Splits and dissimilarities of trees.
// ---------------------------------------------------------------------------

// One split per edge: the leaves on either side of the deleted edge.
inline WeightedSplitSystem tree_splits(const PhyloTree& t) {
  auto adj = t.adjacency();
  WeightedSplitSystem out;
  out.n = t.n;
  for (size_t e = 0; e < t.edges.size(); ++e) {
    Mask side = 0;
    std::vector<int> stack{t.edges[e].u};
    std::vector<bool> seen(t.vertex_count, false);
    seen[t.edges[e].u] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (t.vertex_label[v] != 0) side |= mask_of(t.vertex_label[v]);
      for (auto [w, e2] : adj[v]) {
        if (e2 == static_cast<int>(e) || seen[w]) continue;
        seen[w] = true;
        stack.push_back(w);
      }
    }
    out.add(Split(side, t.n), t.edges[e].weight);
  }
  return out;
}

// D^k_T: the total length of the subtree spanned by each k-subset of
// leaves.  Computed by Steiner counts along rooted subtrees and again as
// the weighted sum of split indicators; the two must agree exactly.
inline KDissimilarityMap k_dissimilarity_from_tree(const PhyloTree& t, int k) {
  if (k < 2 || k >= t.n) throw std::invalid_argument("need 2 <= k < n");

  auto adj = t.adjacency();
  std::vector<Mask> verts = all_ksubset_masks(k, t.n);
  KDissimilarityMap steiner(k, t.n);

  // leaves below each edge, oriented away from vertex 0
  std::vector<Mask> below(t.edges.size(), 0);
  std::vector<int> order;
  std::vector<int> parent_edge(t.vertex_count, -1), parent(t.vertex_count, -1);
  std::vector<int> stack{0};
  std::vector<bool> seen(t.vertex_count, false);
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto [w, e] : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = v;
        parent_edge[w] = e;
        stack.push_back(w);
      }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (parent_edge[v] < 0) continue;
    Mask m = t.vertex_label[v] ? mask_of(t.vertex_label[v]) : 0;
    for (auto [w, e] : adj[v])
      if (w != parent[v]) m |= below[e];
    below[parent_edge[v]] = m;
  }

  for (size_t r = 0; r < verts.size(); ++r) {
    Rational len = 0;
    for (size_t e = 0; e < t.edges.size(); ++e) {
      int cnt = mask_size(below[e] & verts[r]);
      if (cnt >= 1 && cnt <= k - 1) len += t.edges[e].weight;
    }
    steiner.values[r] = len;
  }

  KDissimilarityMap split_sum(k, t.n);
  for (const auto& [s, w] : tree_splits(t).weights)
    split_sum += w * split_dissimilarity(s, k);
  if (!(steiner == split_sum))
    throw std::logic_error("steiner and split-sum dissimilarities disagree");
  return steiner;
}

// ---------------------------------------------------------------------------
// Building trees back from weighted split systems.
// ---------------------------------------------------------------------------

// The unique tree whose edge splits are exactly the given pairwise
// compatible system; all n trivial splits must be present with positive
// weight (they become the pendant edges).
inline PhyloTree tree_from_weighted_splits(const WeightedSplitSystem& sys) {
  int n = sys.n;
  if (n < 2) throw std::invalid_argument("ground set too small");
  std::vector<Split> splits = sys.splits();
  if (!is_compatible_system(splits)) throw std::invalid_argument("split system is not compatible");
  if (n == 2) {
    // the two trivial splits of a 2-set coincide: a single edge
    PhyloTree two;
    two.n = 2;
    two.vertex_count = 2;
    two.vertex_label = {1, 2};
    two.leaf_vertex = {0, 1};
    two.edges.push_back({0, 1, sys.weights.at(trivial_split(1, 2))});
    two.validate();
    return two;
  }
  for (int a = 1; a <= n; ++a) {
    if (!sys.contains(trivial_split(a, n)))
      throw std::invalid_argument("missing trivial split for leaf " + std::to_string(a));
  }

  // Canonical blocks avoid leaf 1, so compatibility makes them laminar.
  std::vector<std::pair<int, Mask>> clusters;  // (size, block), nontrivial only
  for (const Split& s : splits)
    if (!s.is_trivial()) clusters.push_back({mask_size(s.block), s.block});
  std::sort(clusters.begin(), clusters.end());

  PhyloTree t;
  t.n = n;
  int root = 0;
  t.vertex_count = 1;
  std::map<Mask, int> cluster_vertex;
  std::vector<Mask> cluster_masks;
  for (auto& [sz, m] : clusters) {
    cluster_vertex[m] = t.vertex_count++;
    cluster_masks.push_back(m);
  }
  t.vertex_label.assign(t.vertex_count, 0);

  auto smallest_container = [&](Mask inside) -> int {
    for (Mask m : cluster_masks)  // sorted by size: first hit is smallest
      if ((inside & ~m) == 0) return cluster_vertex[m];
    return root;
  };

  // cluster edges: to the smallest strictly containing cluster
  for (size_t i = 0; i < cluster_masks.size(); ++i) {
    Mask m = cluster_masks[i];
    int up = root;
    for (size_t j = i + 1; j < cluster_masks.size(); ++j)
      if ((m & ~cluster_masks[j]) == 0) {
        up = cluster_vertex[cluster_masks[j]];
        break;
      }
    t.edges.push_back({cluster_vertex[m], up, sys.weights.at(Split(m, n))});
  }
  // pendant edges
  t.leaf_vertex.assign(n, -1);
  for (int a = 1; a <= n; ++a) {
    int v = t.vertex_count++;
    t.vertex_label.push_back(a);
    t.leaf_vertex[a - 1] = v;
    int up = (a == 1) ? root : smallest_container(mask_of(a));
    t.edges.push_back({v, up, sys.weights.at(trivial_split(a, n))});
  }
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// Tree reconstruction from a k-dissimilarity map.
// ---------------------------------------------------------------------------

struct ReconstructionResult {
  enum class Failure {
    kNone,
    kGroundSetTooSmall,     // below n = 2k-1 splits are not recoverable
    kIncompatibleSupport,
    kNonzeroRemainder,
    kNonpositiveWeight,
    kVerificationFailed,
  };

  std::optional<PhyloTree> tree;
  Failure failure = Failure::kNone;
  std::string reason;

  bool ok() const { return tree.has_value(); }
};

inline const char* reconstruction_failure_name(ReconstructionResult::Failure f) {
  switch (f) {
    case ReconstructionResult::Failure::kNone: return "none";
    case ReconstructionResult::Failure::kGroundSetTooSmall: return "ground-set-too-small";
    case ReconstructionResult::Failure::kIncompatibleSupport: return "incompatible-support";
    case ReconstructionResult::Failure::kNonzeroRemainder: return "nonzero-remainder";
    case ReconstructionResult::Failure::kNonpositiveWeight: return "nonpositive-weight";
    case ReconstructionResult::Failure::kVerificationFailed: return "verification-failed";
  }
  return "unknown";
}

inline ReconstructionResult reconstruct_tree(const KDissimilarityMap& D, int k, int jobs = 1) {
  ReconstructionResult res;
  if (D.k != k) throw std::invalid_argument("map has a different k");
  int n = D.n;
  if (n < 2 * k - 1) {
    res.failure = ReconstructionResult::Failure::kGroundSetTooSmall;
    res.reason = "tree reconstruction needs n >= 2k-1";
    return res;
  }

  std::map<Split, Rational> alphas = all_nontrivial_split_indices(D, jobs);
  WeightedSplitSystem sys;
  sys.n = n;
  KDissimilarityMap rest = D;
  for (const auto& [S, alpha] : alphas) {
    if (alpha == 0) continue;
    sys.add(S, alpha);
    rest -= alpha * split_dissimilarity(S, k);
  }
  std::vector<Split> support = sys.splits();
  for (size_t i = 0; i < support.size(); ++i)
    for (size_t j = i + 1; j < support.size(); ++j)
      if (!splits_compatible_X(support[i], support[j])) {
        res.failure = ReconstructionResult::Failure::kIncompatibleSupport;
        res.reason = "incompatible pair " + support[i].to_string() + " and " + support[j].to_string();
        return res;
      }

  TrivialProjection proj = trivial_projection(rest);
  if (!proj.remainder.is_zero()) {
    res.failure = ReconstructionResult::Failure::kNonzeroRemainder;
    res.reason = "residual is not a combination of trivial splits";
    return res;
  }
  for (int a = 1; a <= n; ++a) {
    if (proj.coefficients[a - 1] <= 0) {
      res.failure = ReconstructionResult::Failure::kNonpositiveWeight;
      res.reason = "pendant weight for leaf " + std::to_string(a) + " is not positive";
      return res;
    }
  }
  for (int a = 1; a <= n; ++a) sys.add(trivial_split(a, n), proj.coefficients[a - 1]);

  PhyloTree t = tree_from_weighted_splits(sys);
  if (!(k_dissimilarity_from_tree(t, k) == D)) {
    res.failure = ReconstructionResult::Failure::kVerificationFailed;
    res.reason = "reassembled tree does not reproduce the map";
    return res;
  }
  res.tree = std::move(t);
  return res;
}

inline ReconstructionResult is_tree_realizable(const KDissimilarityMap& D, int k, int jobs = 1) {
  return reconstruct_tree(D, k, jobs);
}

// ---------------------------------------------------------------------------
// Deterministic random trees for tests and the CLI generator.
// ---------------------------------------------------------------------------

// Uniform sequential attachment: each new leaf picks an edge (subdividing
// it) or an internal vertex, so multifurcating shapes appear too.  Weights
// are rationals num/den with num/den drawn from [lo, hi] and den in
// [1, max_den].
inline PhyloTree random_tree(int n, std::uint64_t seed, const Rational& lo, const Rational& hi,
                             int max_den = 6) {
  if (n < 2) throw std::invalid_argument("need at least two leaves");
  if (lo > hi || hi <= 0) throw std::invalid_argument("empty weight range");
  std::mt19937_64 rng(seed);

  PhyloTree t;
  t.n = n;
  t.vertex_count = 2;
  t.vertex_label = {1, 2};
  t.edges.push_back({0, 1, Rational(1)});
  for (int leaf = 3; leaf <= n; ++leaf) {
    std::vector<int> internal;
    for (int v = 0; v < t.vertex_count; ++v)
      if (t.vertex_label[v] == 0) internal.push_back(v);
    std::uniform_int_distribution<size_t> pick(0, t.edges.size() + internal.size() - 1);
    size_t c = pick(rng);
    int attach;
    if (c < t.edges.size()) {
      // subdivide edge c
      PhyloTree::Edge e = t.edges[c];
      int mid = t.vertex_count++;
      t.vertex_label.push_back(0);
      t.edges[c] = {e.u, mid, Rational(1)};
      t.edges.push_back({mid, e.v, Rational(1)});
      attach = mid;
    } else {
      attach = internal[c - t.edges.size()];
    }
    int v = t.vertex_count++;
    t.vertex_label.push_back(leaf);
    t.edges.push_back({attach, v, Rational(1)});
  }

  auto draw_weight = [&]() -> Rational {
    std::uniform_int_distribution<int> dens(1, max_den);
    for (;;) {
      int d = dens(rng);
      mpz_class lo_num = mpz_class(lo.get_num() * d + lo.get_den() - 1) / lo.get_den();  // ceil
      mpz_class hi_num = mpz_class(hi.get_num() * d) / hi.get_den();                     // floor
      if (lo_num <= 0) lo_num = 1;
      if (lo_num > hi_num) continue;
      unsigned long span = mpz_class(hi_num - lo_num).get_ui();
      std::uniform_int_distribution<unsigned long> nums(0, span);
      Rational w(mpz_class(lo_num + nums(rng)), mpz_class(d));
      w.canonicalize();
      if (w > 0) return w;
    }
  };
  for (auto& e : t.edges) e.weight = draw_weight();

  t.leaf_vertex.assign(n, -1);
  for (int v = 0; v < t.vertex_count; ++v)
    if (t.vertex_label[v] != 0) t.leaf_vertex[t.vertex_label[v] - 1] = v;
  t.validate();
  return t;
}

// Label-and-weight preserving isomorphism, via canonical Newick strings.
inline bool trees_isomorphic(const PhyloTree& a, const PhyloTree& b) {
  return emit_newick(a) == emit_newick(b);
}

}  // namespace ksplit
