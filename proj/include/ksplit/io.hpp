#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksplit/compatibility.hpp"
#include "ksplit/decomposition.hpp"
#include "ksplit/dissimilarity.hpp"
#include "ksplit/subdivision.hpp"
#include "ksplit/tight_span.hpp"
#include "ksplit/trees.hpp"

namespace ksplit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Dissimilarity map files: {"n":..,"k":..,"entries":[{"subset":[..],"value":".."}]}
// with exactly C(n,k) entries; duplicates and gaps are rejected.
// ---------------------------------------------------------------------------

inline json dissimilarity_to_json(const KDissimilarityMap& D) {
  json entries = json::array();
  for (long long r = 0; r < static_cast<long long>(D.values.size()); ++r) {
    KSubset K = ksubset_unrank(r, D.k, D.n);
    entries.push_back({{"subset", K.elements}, {"value", format_rational(D.values[r])}});
  }
  return json{{"n", D.n}, {"k", D.k}, {"entries", entries}};
}

inline KDissimilarityMap dissimilarity_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("entries"))
    throw std::invalid_argument("dissimilarity file needs n, k and entries");
  int n = j.at("n").get<int>();
  int k = j.at("k").get<int>();
  KDissimilarityMap D(k, n);
  std::vector<bool> seen(D.values.size(), false);
  const json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != D.values.size())
    throw std::invalid_argument("expected exactly " + std::to_string(D.values.size()) + " entries");
  for (const json& e : entries) {
    KSubset K(e.at("subset").get<std::vector<int>>());
    K.validate(k, n);
    long long r = ksubset_rank(K);
    if (seen[r]) throw std::invalid_argument("duplicate subset in dissimilarity file");
    seen[r] = true;
    const json& v = e.at("value");
    D.values[r] = v.is_string() ? parse_rational(v.get<std::string>())
                                : parse_rational(v.dump());
  }
  return D;
}

// ---------------------------------------------------------------------------
// Split files: one split per line, "a1 a2 .. | b1 b2 ..", optional ": p/q"
// weight suffix.
// ---------------------------------------------------------------------------

struct SplitFileEntry {
  Split split;
  std::optional<Rational> weight;
};

inline std::vector<SplitFileEntry> parse_split_file(std::istream& in, int n) {
  std::vector<SplitFileEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::optional<Rational> weight;
    size_t colon = body.rfind(':');
    if (colon != std::string::npos) {
      weight = parse_rational(body.substr(colon + 1));
      body = body.substr(0, colon);
    }
    size_t bar = body.find('|');
    if (bar == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": missing '|'");
    auto read_side = [&](const std::string& s) {
      std::istringstream ss(s);
      std::vector<int> elems;
      int x;
      while (ss >> x) elems.push_back(x);
      return elems;
    };
    std::vector<int> a = read_side(body.substr(0, bar));
    std::vector<int> b = read_side(body.substr(bar + 1));
    Mask am = mask_from_elements(a, n);
    Mask bm = mask_from_elements(b, n);
    if ((am & bm) != 0 || (am | bm) != full_mask(n))
      throw std::invalid_argument("line " + std::to_string(lineno) + ": not a bipartition of 1.." +
                                  std::to_string(n));
    out.push_back({Split(am, n), weight});
  }
  return out;
}

// Largest element mentioned, for callers that infer n from the file.
inline int split_file_ground_size(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    size_t colon = line.rfind(':');
    if (colon != std::string::npos) line = line.substr(0, colon);
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (tok == "|") continue;
      try {
        n = std::max(n, std::stoi(tok));
      } catch (...) {
        throw std::invalid_argument("bad token in split file: " + tok);
      }
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Subdivision and face-poset dumps.
// ---------------------------------------------------------------------------

inline json subdivision_to_json(const Subdivision& s) {
  json cells = json::array();
  for (const Cell& c : s.cells) {
    json cell = json::array();
    for (int r : c.vertex_ranks) cell.push_back(ksubset_unrank(r, s.k, s.n).elements);
    cells.push_back(cell);
  }
  return json{{"k", s.k}, {"n", s.n}, {"cells", cells}};
}

inline json face_poset_to_json(const FacePoset& p) {
  json nodes = json::array();
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    json verts = json::array();
    for (int r : p.nodes[i].vertex_ranks) verts.push_back(ksubset_unrank(r, p.k, p.n).elements);
    nodes.push_back({{"id", i},
                     {"dim", p.nodes[i].dim},
                     {"dual_dim", p.n - 1 - p.nodes[i].dim},
                     {"vertices", verts}});
  }
  json edges = json::array();
  for (auto [lo, hi] : p.covering) edges.push_back({lo, hi});
  return json{{"k", p.k}, {"n", p.n}, {"nodes", nodes}, {"edges", edges}};
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

inline json decomposition_to_json(const SplitDecomposition& dec) {
  json nontrivial = json::array();
  for (const auto& [s, alpha] : dec.nontrivial.weights)
    nontrivial.push_back({{"split", s.to_string()}, {"alpha", format_rational(alpha)}});
  json trivial = json::object();
  for (const auto& [a, alpha] : dec.trivial_index)
    trivial[std::to_string(a)] = format_rational(alpha);
  return json{{"k", dec.source.k},
              {"n", dec.source.n},
              {"trivial_mode", dec.trivial_mode == TrivialMode::kPaper ? "paper" : "projection"},
              {"nontrivial", nontrivial},
              {"trivial", trivial},
              {"residual_zero", dec.residual.is_zero()},
              {"residual", dissimilarity_to_json(dec.residual)}};
}

inline json witness_to_json(const ForbiddenWitness& w) {
  json blocks = json::array();
  for (Mask b : w.blocks) blocks.push_back(mask_elements(b));
  json point = json::array();
  for (const Rational& v : witness_point(w)) point.push_back(format_rational(v));
  const char* kind = w.kind == WitnessKind::kA ? "A" : (w.kind == WitnessKind::kB ? "B" : "C");
  json out{{"kind", kind},
           {"points", w.points},
           {"splits", blocks},
           {"complement_size", w.complement_size},
           {"point", point}};
  if (w.kind != WitnessKind::kA) out["nu"] = w.nu;
  return out;
}

inline json reconstruction_to_json(const ReconstructionResult& r) {
  json out;
  out["verified"] = r.ok();
  if (r.ok()) {
    out["tree"] = emit_newick(*r.tree);
  } else {
    out["failure"] = reconstruction_failure_name(r.failure);
    out["reason"] = r.reason;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ksplit
