#pragma once

// k-wise independent distributions with enumerable seed spaces, exact
// fooling-gap computation, and the greedy combinatorial-design builder with
// its size-bound checker.
//
// The workhorse family evaluates a random degree-<k polynomial over GF(2^m)
// (2^m >= n) at n fixed distinct points and keeps one balanced output bit per
// point: any k evaluations of the random polynomial are jointly uniform over
// field tuples, so the selected bits are exactly k-wise independent. Seed
// space size is 2^(k*m).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "probpoly/circuit.hpp"
#include "probpoly/combinatorics.hpp"
#include "probpoly/rat.hpp"

namespace probpoly {

// ---- GF(2^m) ----

struct GF2m {
  int m;
  std::uint32_t reduction;  // irreducible polynomial bitmask, degree m

  explicit GF2m(int m_) : m(m_) {
    // minimal-weight irreducible polynomials; irreducibility is covered by a
    // unit test so a table typo cannot slip through
    static const std::uint32_t table[17] = {
        0,      0x3,    0x7,   0xB,    0x13,   0x25,   0x43,   0x83,  0x11B,
        0x211,  0x409,  0x805, 0x1053, 0x201B, 0x402B, 0x8003, 0x1002D};
    if (m_ < 1 || m_ > 16) throw std::invalid_argument("GF2m: degree out of table range");
    reduction = table[m_];
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0;
    while (b) {
      if (b & 1) r ^= a;
      b >>= 1;
      a <<= 1;
      if (a & (std::uint32_t(1) << m)) a ^= reduction;
    }
    return r;
  }

  // brute-force irreducibility check for the table test
  bool reduction_irreducible() const {
    const std::uint32_t poly = reduction;
    auto polymul_mod = [poly, this](std::uint32_t a, std::uint32_t b) {
      std::uint64_t r = 0;
      std::uint64_t aa = a;
      while (b) {
        if (b & 1) r ^= aa;
        b >>= 1;
        aa <<= 1;
      }
      for (int bit = 2 * m; bit >= m; --bit)
        if ((r >> bit) & 1) r ^= std::uint64_t(poly) << (bit - m);
      return static_cast<std::uint32_t>(r);
    };
    for (std::uint32_t d = 2; d < (std::uint32_t(1) << (m / 2 + 1)); ++d) {
      if (d >= (std::uint32_t(1) << m)) break;
      // trial division of poly by d over GF(2)
      std::uint64_t rem = poly;
      const int dd = 31 - __builtin_clz(d);
      for (int bit = m; bit >= dd; --bit)
        if ((rem >> bit) & 1) rem ^= std::uint64_t(d) << (bit - dd);
      if (rem == 0) return false;
    }
    (void)polymul_mod;
    return true;
  }
};

// ---- families ----

struct KWiseFamily {
  std::string name;
  int n = 0;
  int k = 0;
  std::uint64_t seed_count = 0;
  std::function<std::uint32_t(std::uint64_t)> output;  // seed index -> n-bit string
};

// uniform over {0,1}^n; n-wise independent
inline KWiseFamily uniform_family(int n) {
  if (n < 1 || n > 31) throw std::invalid_argument("uniform_family: n out of range");
  KWiseFamily f;
  f.name = "uniform";
  f.n = n;
  f.k = n;
  f.seed_count = std::uint64_t(1) << n;
  f.output = [](std::uint64_t seed) { return static_cast<std::uint32_t>(seed); };
  return f;
}

// uniform over the even-weight strings; (n-1)-wise independent
inline KWiseFamily even_parity_family(int n) {
  if (n < 2 || n > 31) throw std::invalid_argument("even_parity_family: n out of range");
  KWiseFamily f;
  f.name = "even-parity";
  f.n = n;
  f.k = n - 1;
  f.seed_count = std::uint64_t(1) << (n - 1);
  f.output = [n](std::uint64_t seed) {
    std::uint32_t s = static_cast<std::uint32_t>(seed);
    std::uint32_t parity = static_cast<std::uint32_t>(__builtin_popcountll(seed) & 1);
    return s | (parity << (n - 1));
  };
  return f;
}

// degree-<k polynomial evaluation over GF(2^m); the output bit per point is
// the low coefficient bit, which is balanced and linear
inline KWiseFamily build_kwise(int n, int k, std::uint64_t seed_space_cap = std::uint64_t(1) << 24) {
  if (k < 1 || k > n) throw std::invalid_argument("build_kwise: need 1 <= k <= n");
  if (k == n) return uniform_family(n);
  int m = 1;
  while ((1 << m) < n) ++m;
  const int seed_bits = k * m;
  if (seed_bits >= 63 || (std::uint64_t(1) << seed_bits) > seed_space_cap)
    throw cap_error("build_kwise: seed space exceeds enumeration cap",
                    seed_bits, 63 - __builtin_clzll(seed_space_cap));

  GF2m field(m);
  KWiseFamily f;
  f.name = "polyeval";
  f.n = n;
  f.k = k;
  f.seed_count = std::uint64_t(1) << seed_bits;
  f.output = [n, k, m, field](std::uint64_t seed) {
    std::uint32_t out = 0;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t x = static_cast<std::uint32_t>(i);
      // Horner over the k coefficients packed in the seed, low coeff first
      std::uint32_t acc = 0;
      for (int c = k - 1; c >= 0; --c) {
        std::uint32_t coeff =
            static_cast<std::uint32_t>((seed >> (c * m)) & ((std::uint64_t(1) << m) - 1));
        acc = field.add(field.mul(acc, x), coeff);
      }
      out |= (acc & 1) << i;
    }
    return out;
  };
  return f;
}

// histogram of family outputs; the basis for all exact family computations
inline std::vector<std::uint64_t> family_histogram(const KWiseFamily& f,
                                                   std::uint64_t seed_cap = std::uint64_t(1) << 24) {
  if (f.seed_count > seed_cap)
    throw cap_error("family_histogram: seed space exceeds cap",
                    static_cast<long long>(f.seed_count), static_cast<long long>(seed_cap));
  std::vector<std::uint64_t> hist(std::size_t(1) << f.n, 0);
  for (std::uint64_t s = 0; s < f.seed_count; ++s) ++hist[f.output(s)];
  return hist;
}

struct KWiseCheck {
  bool ok = true;
  std::vector<int> index_set;  // violating T when !ok
  std::uint32_t pattern = 0;   // violating b when !ok
};

// Every |T| <= k marginal must be exactly uniform: count matches
// seed_count / 2^|T| for each pattern.
inline KWiseCheck verify_kwise(const KWiseFamily& f,
                               std::uint64_t seed_cap = std::uint64_t(1) << 24,
                               long marginal_cap = 1 << 24) {
  {
    // C(n, <=k) * 2^k marginal patterns must stay enumerable
    Int checks = 0;
    for (int t = 1; t <= f.k; ++t) checks += binomial(f.n, t) * (Int(1) << t);
    if (checks > marginal_cap)
      throw cap_error("verify_kwise: marginal check count exceeds cap",
                      static_cast<long long>(checks.get_si()), marginal_cap);
  }
  auto hist = family_histogram(f, seed_cap);
  KWiseCheck result;
  for (int t = 1; t <= f.k && result.ok; ++t) {
    if (f.seed_count % (std::uint64_t(1) << t) != 0) {
      result.ok = false;
      result.index_set.clear();
      return result;  // seed space not divisible: cannot be exactly uniform
    }
    const std::uint64_t expect = f.seed_count >> t;
    for_each_combination(f.n, t, [&](const std::vector<int>& comb) {
      std::uint32_t tmask = 0;
      for (int v : comb) tmask |= std::uint32_t(1) << v;
      std::vector<std::uint64_t> counts(std::size_t(1) << t, 0);
      for (std::uint32_t x = 0; x < (std::uint32_t(1) << f.n); ++x) {
        if (!hist[x]) continue;
        std::uint32_t pattern = 0;
        int bit = 0;
        for (int v : comb) pattern |= ((x >> v) & 1) << bit++;
        counts[pattern] += hist[x];
      }
      for (std::uint32_t b = 0; b < counts.size(); ++b) {
        if (counts[b] != expect) {
          result.ok = false;
          result.index_set = comb;
          result.pattern = b;
          return false;
        }
      }
      return true;
    });
  }
  return result;
}

// |Pr_uniform[C=1] - Pr_family[C=1]|, both exact
inline Rat fooling_gap_exact(const Circuit& c, const KWiseFamily& f,
                             std::uint64_t seed_cap = std::uint64_t(1) << 24) {
  if (c.n_inputs() != f.n) throw std::invalid_argument("fooling_gap_exact: arity mismatch");
  auto hist = family_histogram(f, seed_cap);
  auto words = output_words(c);
  Int accepted = 0;
  for (std::uint32_t x = 0; x < hist.size(); ++x)
    if (hist[x] && ((words[x >> 6] >> (x & 63)) & 1)) accepted += static_cast<long>(hist[x]);
  Rat fam_prob(accepted, Int(static_cast<long>(f.seed_count)));
  fam_prob.canonicalize();
  return rat_abs(accept_prob_uniform(c) - fam_prob);
}

struct SweepRow {
  int k;
  Rat gap;
};

inline std::vector<SweepRow> fooling_sweep(const Circuit& c, int k_min, int k_max,
                                           std::uint64_t seed_cap = std::uint64_t(1) << 24) {
  std::vector<SweepRow> rows;
  for (int k = k_min; k <= k_max; ++k)
    rows.push_back({k, fooling_gap_exact(c, build_kwise(c.n_inputs(), k, seed_cap), seed_cap)});
  return rows;
}

// ---- combinatorial designs ----

struct Design {
  int m = 0;    // universe size
  int r = 0;    // set size
  int ell = 0;  // pairwise intersection bound
  std::vector<std::vector<int>> sets;
};

inline bool design_intersections_ok(const Design& d) {
  for (std::size_t i = 0; i < d.sets.size(); ++i)
    for (std::size_t j = i + 1; j < d.sets.size(); ++j) {
      std::vector<int> both;
      std::set_intersection(d.sets[i].begin(), d.sets[i].end(), d.sets[j].begin(),
                            d.sets[j].end(), std::back_inserter(both));
      if (static_cast<int>(both.size()) > d.ell) return false;
    }
  return true;
}

// Greedy packing of r-subsets of [m] in lex order, keeping a set iff every
// pairwise intersection with the kept ones stays <= ell.
inline Design greedy_design(int m, int r, int ell, int s_target,
                            long candidate_cap = 2000000) {
  if (!(m >= r && r >= ell && ell >= 0) || r < 1)
    throw std::invalid_argument("greedy_design: need m >= r >= ell >= 0, r >= 1");
  if (binomial(m, r) > candidate_cap)
    throw cap_error("greedy_design: candidate space exceeds cap",
                    static_cast<long long>(binomial(m, r).get_si()), candidate_cap);
  Design d;
  d.m = m;
  d.r = r;
  d.ell = ell;
  for_each_combination(m, r, [&](const std::vector<int>& comb) {
    for (const auto& kept : d.sets) {
      std::vector<int> both;
      std::set_intersection(comb.begin(), comb.end(), kept.begin(), kept.end(),
                            std::back_inserter(both));
      if (static_cast<int>(both.size()) > ell) return true;  // skip, keep scanning
    }
    d.sets.push_back(comb);
    return static_cast<int>(d.sets.size()) < s_target;
  });
  return d;
}

// m >= min(r^2 / 2*ell, s): holds for any design with at least r/ell sets.
// ell = 0 designs are excluded (the bound divides by ell); callers treat the
// check as vacuously satisfied there.
inline bool design_bound_check(const Design& d) {
  if (d.ell == 0) return true;
  const long s = static_cast<long>(d.sets.size());
  if (Rat(s) < Rat(d.r, d.ell)) return true;  // hypothesis not met, nothing to check
  Rat lhs(d.m);
  Rat bound = Rat(d.r) * Rat(d.r) / (2 * Rat(d.ell));
  if (Rat(s) < bound) bound = Rat(s);
  return lhs >= bound;
}

}  // namespace probpoly
