// Command-line front end: split decompositions, compatibility checks,
// hypersimplex subdivisions, tight spans and tree workflows over the JSON
// and text formats defined in the library headers.
//
// Exit codes: 0 success, 1 domain failure (reported as JSON on stdout),
// 2 usage or input errors.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ksplit/io.hpp"
#include "ksplit/tight_span.hpp"

using namespace ksplit;

namespace {

struct CommonOpts {
  std::optional<int> k;
  int jobs = 1;
  bool force = false;
  std::string trivial_mode;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_trivial, const char* default_mode) {
  cmd->add_option("--k", o.k, "subset size k");
  cmd->add_option("--jobs", o.jobs, "max worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--force", o.force, "run past the desk-scale size guards");
  if (with_trivial)
    cmd->add_option("--trivial-mode", o.trivial_mode, "trivial split handling: paper|projection")
        ->default_val(default_mode)
        ->check(CLI::IsMember({"paper", "projection"}));
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json"}));
}

KDissimilarityMap load_map(const std::string& path, const CommonOpts& o) {
  KDissimilarityMap D = dissimilarity_from_json(json::parse(read_file(path)));
  if (o.k && *o.k != D.k)
    throw CLI::ValidationError("--k", "disagrees with the k stored in " + path);
  return D;
}

// decompose and reconstruct enumerate all 2^(n-1) splits; refuse sizes
// where that is no longer a desk-scale computation
void guard_size(const KDissimilarityMap& D, bool force) {
  int limit = D.k == 2 ? 12 : 8;
  if (D.n > limit && !force)
    throw CLI::ValidationError(
        "input", "n = " + std::to_string(D.n) + " exceeds the guard for k = " +
                     std::to_string(D.k) + " (rerun with --force)");
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact split decomposition of k-dissimilarity maps"};
  app.require_subcommand(1);

  CommonOpts dec_o, cc_o, sub_o, ts_o, td_o, tt_o, rc_o;
  std::string dec_in, cc_in, sub_in, ts_in, td_in, tt_in, rc_in;
  std::optional<int> cc_n;
  int gen_n = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_min = "1", gen_max = "3";

  CLI::App* dec = app.add_subcommand("decompose", "split decomposition of a dissimilarity map");
  add_common(dec, dec_o, true, "paper");
  dec->add_option("input", dec_in, "dissimilarity JSON file")->required();

  CLI::App* cc = app.add_subcommand("check-compat", "k-weak compatibility of a split system");
  add_common(cc, cc_o, false, "");
  cc->add_option("--n", cc_n, "ground set size (default: largest element in the file)");
  cc->add_option("input", cc_in, "split file, one 'a b | c d [: weight]' per line")->required();

  CLI::App* sub = app.add_subcommand("subdivide", "regular subdivision induced by a map");
  add_common(sub, sub_o, false, "");
  sub->add_option("input", sub_in, "dissimilarity JSON file")->required();

  CLI::App* ts = app.add_subcommand("tightspan", "interior face poset of the induced subdivision");
  add_common(ts, ts_o, false, "");
  ts->add_option("input", ts_in, "dissimilarity JSON file")->required();

  CLI::App* td = app.add_subcommand("tree-diss", "k-dissimilarity map of a tree");
  add_common(td, td_o, false, "");
  td->add_option("input", td_in, "Newick file")->required();

  CLI::App* tt = app.add_subcommand("tree-test", "does the map come from a tree?");
  add_common(tt, tt_o, false, "");
  tt->add_option("input", tt_in, "dissimilarity JSON file")->required();

  CLI::App* rc = app.add_subcommand("reconstruct", "recover the tree behind a tree-derived map");
  add_common(rc, rc_o, true, "projection");
  rc->add_option("input", rc_in, "dissimilarity JSON file")->required();

  CLI::App* gen = app.add_subcommand("gen-tree", "deterministic random phylogenetic tree");
  gen->add_option("--n", gen_n, "number of leaves")->required()->check(CLI::Range(2, 64));
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--min-weight", gen_min, "smallest edge weight (rational)");
  gen->add_option("--max-weight", gen_max, "largest edge weight (rational)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dec) {
      KDissimilarityMap D = load_map(dec_in, dec_o);
      guard_size(D, dec_o.force);
      TrivialMode mode =
          dec_o.trivial_mode == "projection" ? TrivialMode::kProjection : TrivialMode::kPaper;
      emit(decomposition_to_json(split_decompose(D, mode, dec_o.jobs)));
      return 0;
    }
    if (*cc) {
      if (!cc_o.k) throw CLI::ValidationError("--k", "required for check-compat");
      std::string text = read_file(cc_in);
      int n = cc_n ? *cc_n : split_file_ground_size(text);
      if (n < 3) throw CLI::ValidationError("input", "ground set too small");
      std::istringstream in(text);
      std::vector<Split> system;
      for (const SplitFileEntry& e : parse_split_file(in, n)) system.push_back(e.split);
      KWeakCompatibilityResult r = is_k_weakly_compatible(system, *cc_o.k);
      json out{{"k", *cc_o.k}, {"n", n}, {"compatible", r.compatible}};
      if (r.witness) out["witness"] = witness_to_json(*r.witness);
      emit(out);
      return r.compatible ? 0 : 1;
    }
    if (*sub) {
      KDissimilarityMap D = load_map(sub_in, sub_o);
      emit(subdivision_to_json(regular_subdivision(weight_of(D))));
      return 0;
    }
    if (*ts) {
      KDissimilarityMap D = load_map(ts_in, ts_o);
      emit(face_poset_to_json(tight_span_poset(weight_of(D))));
      return 0;
    }
    if (*td) {
      if (!td_o.k) throw CLI::ValidationError("--k", "required for tree-diss");
      PhyloTree t = parse_newick(read_file(td_in));
      emit(dissimilarity_to_json(k_dissimilarity_from_tree(t, *td_o.k)));
      return 0;
    }
    if (*tt || *rc) {
      bool test_only = static_cast<bool>(*tt);
      const CommonOpts& o = test_only ? tt_o : rc_o;
      KDissimilarityMap D = load_map(test_only ? tt_in : rc_in, o);
      guard_size(D, o.force);
      ReconstructionResult r = reconstruct_tree(D, D.k, o.jobs);
      json out = reconstruction_to_json(r);
      if (r.ok()) {
        // mirror the decomposition report: edge splits carry the indices
        WeightedSplitSystem sys = tree_splits(*r.tree);
        json nontrivial = json::array();
        json trivial = json::object();
        for (const auto& [s, w] : sys.weights) {
          if (s.is_trivial()) {
            int a = mask_size(s.block) == 1 ? mask_elements(s.block)[0]
                                            : mask_elements(s.other_block())[0];
            trivial[std::to_string(a)] = format_rational(w);
          } else {
            nontrivial.push_back({{"split", s.to_string()}, {"alpha", format_rational(w)}});
          }
        }
        out["nontrivial"] = nontrivial;
        out["trivial"] = trivial;
        out["residual_zero"] = true;
      }
      if (test_only) out["tree_realizable"] = r.ok();
      out["k"] = D.k;
      out["n"] = D.n;
      emit(out);
      return r.ok() ? 0 : 1;
    }
    if (*gen) {
      PhyloTree t = random_tree(gen_n, gen_seed, parse_rational(gen_min), parse_rational(gen_max));
      std::cout << emit_newick(t) << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
