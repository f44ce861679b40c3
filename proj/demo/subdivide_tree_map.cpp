// Build the 3-dissimilarity map of a tree, subdivide the hypersimplex and
// walk the interior face poset.
#include <iostream>

#include "ksplit/tight_span.hpp"
#include "ksplit/trees.hpp"

using namespace ksplit;

int main() {
  PhyloTree t = parse_newick("((1:1,6:1):1,5:1,(2:1,(3:1,4:1):1):1);");
  KDissimilarityMap D = k_dissimilarity_from_tree(t, 3);

  Subdivision s = regular_subdivision(weight_of(D));
  std::cout << "maximal cells: " << s.cells.size() << "\n";
  for (const Cell& c : s.cells) std::cout << "  cell with " << c.vertex_ranks.size() << " vertices\n";

  FacePoset p = tight_span_poset(s);
  std::cout << "interior faces: " << p.nodes.size() << ", tight-span dimension "
            << p.n - 1 - p.min_dim() << "\n";
  return 0;
}
