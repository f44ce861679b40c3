// Decompose a small five-point metric and print the weighted splits.
#include <iostream>

#include "ksplit/decomposition.hpp"

using namespace ksplit;

int main() {
  // path metric of the unit caterpillar ((1,2),3,(4,5)) plus a bump
  KDissimilarityMap d(2, 5);
  auto set = [&](int a, int b, const char* v) {
    d.at(mask_of(a) | mask_of(b)) = parse_rational(v);
  };
  set(1, 2, "2");
  set(1, 3, "3");
  set(1, 4, "4");
  set(1, 5, "4");
  set(2, 3, "3");
  set(2, 4, "4");
  set(2, 5, "4");
  set(3, 4, "3");
  set(3, 5, "3");
  set(4, 5, "2");

  SplitDecomposition dec = split_decompose(d);
  std::cout << "nontrivial splits:\n";
  for (const auto& [s, alpha] : dec.nontrivial.weights)
    std::cout << "  " << s.to_string() << "  alpha = " << format_rational(alpha) << "\n";
  std::cout << "trivial indices:\n";
  for (const auto& [a, alpha] : dec.trivial_index)
    std::cout << "  leaf " << a << ": " << format_rational(alpha) << "\n";
  std::cout << "residual is zero: " << (dec.residual.is_zero() ? "yes" : "no") << "\n";
  return 0;
}
