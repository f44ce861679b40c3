#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksplit {

// Ground sets are X = {1,...,n}.  Subsets of X are stored as bitmasks with
// bit (i-1) standing for element i; n stays small (desk scale), so 32 bits
// are plenty.
using Mask = std::uint32_t;

inline Mask full_mask(int n) { return (n >= 32) ? ~Mask(0) : ((Mask(1) << n) - 1); }
inline bool mask_contains(Mask m, int element) { return (m >> (element - 1)) & 1u; }
inline Mask mask_of(int element) { return Mask(1) << (element - 1); }
inline int mask_size(Mask m) { return __builtin_popcount(m); }

inline std::vector<int> mask_elements(Mask m) {
  std::vector<int> out;
  for (int i = 1; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline Mask mask_from_elements(const std::vector<int>& elems, int n) {
  Mask m = 0;
  for (int e : elems) {
    if (e < 1 || e > n) throw std::out_of_range("element out of range: " + std::to_string(e));
    if (mask_contains(m, e)) throw std::invalid_argument("repeated element: " + std::to_string(e));
    m |= mask_of(e);
  }
  return m;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long res = 1;
  for (int i = 0; i < k; ++i) {
    res = res * (n - i) / (i + 1);
  }
  return res;
}

// A k-element subset of {1,...,n}, kept strictly increasing.
struct KSubset {
  std::vector<int> elements;

  KSubset() = default;
  explicit KSubset(std::vector<int> elems) : elements(std::move(elems)) {}

  int k() const { return static_cast<int>(elements.size()); }

  Mask mask() const {
    Mask m = 0;
    for (int e : elements) m |= mask_of(e);
    return m;
  }

  bool operator==(const KSubset& o) const { return elements == o.elements; }

  void validate(int k, int n) const {
    if (static_cast<int>(elements.size()) != k)
      throw std::invalid_argument("subset has wrong cardinality");
    int prev = 0;
    for (int e : elements) {
      if (e <= prev || e > n) throw std::invalid_argument("subset not strictly increasing in [1,n]");
      prev = e;
    }
  }
};

// k-subsets are ordered colexicographically; this ordering fixes the layout
// of every dissimilarity map, weight function and subdivision dump.
inline long long ksubset_rank(const KSubset& K) {
  long long r = 0;
  for (int i = 0; i < K.k(); ++i) r += binomial(K.elements[i] - 1, i + 1);
  return r;
}

inline long long ksubset_rank(Mask m) {
  long long r = 0;
  int i = 0;
  for (int e = 1; m != 0; ++e, m >>= 1)
    if (m & 1u) r += binomial(e - 1, ++i);
  return r;
}

inline KSubset ksubset_unrank(long long r, int k, int n) {
  if (r < 0 || r >= binomial(n, k)) throw std::out_of_range("k-subset rank out of range");
  std::vector<int> elems(k);
  for (int i = k; i >= 1; --i) {
    int e = i;
    while (binomial(e, i) <= r) ++e;  // largest e with C(e-1, i) <= r
    elems[i - 1] = e;
    r -= binomial(e - 1, i);
  }
  return KSubset(std::move(elems));
}

// All k-subsets of {1,...,n} in rank order.
inline std::vector<KSubset> all_ksubsets(int k, int n) {
  long long count = binomial(n, k);
  std::vector<KSubset> out;
  out.reserve(count);
  for (long long r = 0; r < count; ++r) out.push_back(ksubset_unrank(r, k, n));
  return out;
}

inline std::vector<Mask> all_ksubset_masks(int k, int n) {
  std::vector<KSubset> subs = all_ksubsets(k, n);
  std::vector<Mask> out(subs.size());
  for (size_t i = 0; i < subs.size(); ++i) out[i] = subs[i].mask();
  return out;
}

}  // namespace ksplit
