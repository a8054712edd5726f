#pragma once

// Truth tables in standard binary order (bit i of the row index = value of
// variable i), plus the Moebius-transform bridge to the unique multilinear
// polynomial agreeing with the table on the cube.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "probpoly/polynomial.hpp"

namespace probpoly {

struct TruthTable {
  int n = 0;
  std::vector<bool> bits;  // size 2^n

  TruthTable() = default;
  TruthTable(int n_, std::vector<bool> bits_) : n(n_), bits(std::move(bits_)) {
    if (bits.size() != (std::size_t(1) << n))
      throw std::invalid_argument("TruthTable: need exactly 2^n entries");
  }

  bool operator()(std::uint64_t mask) const { return bits.at(mask); }
  std::size_t size() const { return bits.size(); }
};

template <typename Pred>
TruthTable table_from_predicate(int n, Pred f) {
  std::vector<bool> bits(std::size_t(1) << n);
  for (std::uint64_t a = 0; a < bits.size(); ++a) bits[a] = f(a);
  return TruthTable(n, std::move(bits));
}

inline TruthTable or_table(int n) {
  return table_from_predicate(n, [](std::uint64_t a) { return a != 0; });
}

inline TruthTable and_table(int n) {
  const std::uint64_t full = (n == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
  return table_from_predicate(n, [full](std::uint64_t a) { return a == full; });
}

inline TruthTable parity_table(int n) {
  return table_from_predicate(
      n, [](std::uint64_t a) { return (__builtin_popcountll(a) & 1) != 0; });
}

// strict majority: 1 iff Hamming weight > n/2
inline TruthTable majority_table(int n) {
  return table_from_predicate(
      n, [n](std::uint64_t a) { return 2 * __builtin_popcountll(a) > n; });
}

// The unique multilinear polynomial over variables {0..n-1} agreeing with f
// on all of {0,1}^n. Coefficient of monomial S is
//   sum_{T subset of S} (-1)^{|S|-|T|} f(1_T).
inline Polynomial multilinear_extension(const TruthTable& f) {
  std::vector<Var> uni(static_cast<std::size_t>(f.n));
  for (int i = 0; i < f.n; ++i) uni[static_cast<std::size_t>(i)] = i;
  std::vector<Rat> values(f.size());
  for (std::uint64_t a = 0; a < f.size(); ++a) values[a] = f(a) ? 1 : 0;
  return interpolate_cube(uni, std::move(values));
}

}  // namespace probpoly
