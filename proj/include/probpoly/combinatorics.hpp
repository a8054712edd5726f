#pragma once

#include <functional>
#include <vector>

#include "probpoly/rat.hpp"

namespace probpoly {

inline Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

// advance a strictly increasing k-combination of {0..n-1}; false when done
inline bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

// visit all k-subsets of {0..n-1} in lex order; fn may return false to stop
inline void for_each_combination(int n, int k,
                                 const std::function<bool(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
  if (k == 0) {
    fn(comb);
    return;
  }
  do {
    if (!fn(comb)) return;
  } while (next_combination(comb, n));
}

}  // namespace probpoly
