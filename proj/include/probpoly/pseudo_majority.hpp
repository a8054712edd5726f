#pragma once

// Pseudo-majorities: polynomials on l inputs that collapse formally to the
// constant b whenever any strict-majority-sized subset of inputs is fixed to
// b, with the remaining inputs free to take arbitrary real values. The
// multilinear extension of Majority is one, and is what build() returns.
//
// Symmetry is exploited heavily: the extension of a symmetric function has
// one Moebius coefficient per monomial size, and its value at an arbitrary
// rational point is a Poisson-binomial style dynamic program, O(l^2) instead
// of 2^l. Compositions Q(P_1,...,P_l) over a small common cube are recovered
// from pointwise values by interpolation, which yields exactly the eagerly
// reduced expansion (two multilinear polynomials agreeing on the cube are
// term-identical).

#include <optional>
#include <vector>

#include "probpoly/combinatorics.hpp"
#include "probpoly/polynomial.hpp"
#include "probpoly/truth_table.hpp"

namespace probpoly {

// least integer strictly greater than l/2
inline int pseudo_majority_threshold(int ell) { return ell / 2 + 1; }

struct PseudoMajority {
  Polynomial poly;
  int ell = 0;
  int r = 0;
  bool verified = false;  // build-time restriction sweep ran and passed
};

struct PseudoMajorityCheck {
  bool ok = true;
  std::vector<Var> subset;  // violating S when !ok
  int bit = 0;              // violating b when !ok
};

// Checks every size-r constant-b restriction for formal constancy.
inline PseudoMajorityCheck verify_pseudo_majority(const Polynomial& q, int ell,
                                                  int cap = 16) {
  if (ell > cap)
    throw cap_error("verify_pseudo_majority: ell exceeds restriction-sweep cap", ell, cap);
  const int r = pseudo_majority_threshold(ell);
  PseudoMajorityCheck result;
  for_each_combination(ell, r, [&](const std::vector<int>& comb) {
    for (int b = 0; b <= 1; ++b) {
      Polynomial restricted = q.restricted_to_bit(comb, Rat(b));
      if (!restricted.is_formally_constant(Rat(b))) {
        result.ok = false;
        result.subset = comb;
        result.bit = b;
        return false;
      }
    }
    return true;
  });
  return result;
}

// Multilinear extension of Majority_l over variables {0..l-1}.
inline PseudoMajority build_pseudo_majority(int ell, int build_cap = 20,
                                            int verify_cap = 14) {
  if (ell < 1) throw std::invalid_argument("build_pseudo_majority: need ell >= 1");
  if (ell > build_cap)
    throw cap_error("build_pseudo_majority: extension cost 2^ell exceeds cap", ell,
                    build_cap);
  PseudoMajority pm;
  pm.ell = ell;
  pm.r = pseudo_majority_threshold(ell);
  pm.poly = multilinear_extension(majority_table(ell));
  if (ell <= verify_cap) {
    PseudoMajorityCheck check = verify_pseudo_majority(pm.poly, ell, verify_cap);
    if (!check.ok)
      throw std::logic_error("build_pseudo_majority: restriction sweep failed");
    pm.verified = true;
  }
  return pm;
}

// ---- symmetric-function machinery ----

// value of Majority_l per Hamming weight
inline std::vector<int> majority_levels(int ell) {
  std::vector<int> lv(static_cast<std::size_t>(ell) + 1);
  for (int w = 0; w <= ell; ++w) lv[static_cast<std::size_t>(w)] = (2 * w > ell) ? 1 : 0;
  return lv;
}

// Moebius coefficient shared by all monomials of size k in the extension of
// a symmetric 0/1 function: c_k = sum_j (-1)^{k-j} C(k,j) f(j).
inline std::vector<Int> symmetric_mobius_coeffs(const std::vector<int>& levels) {
  const int ell = static_cast<int>(levels.size()) - 1;
  std::vector<Int> c(static_cast<std::size_t>(ell) + 1);
  for (int k = 0; k <= ell; ++k) {
    Int acc = 0;
    for (int j = 0; j <= k; ++j) {
      if (!levels[static_cast<std::size_t>(j)]) continue;
      Int term = binomial(k, j);
      if ((k - j) & 1) acc -= term; else acc += term;
    }
    c[static_cast<std::size_t>(k)] = acc;
  }
  return c;
}

inline Rat symmetric_weight(const std::vector<int>& levels) {
  const int ell = static_cast<int>(levels.size()) - 1;
  auto c = symmetric_mobius_coeffs(levels);
  Int w = 0;
  for (int k = 0; k <= ell; ++k) w += binomial(ell, k) * abs(c[static_cast<std::size_t>(k)]);
  return Rat(w);
}

inline int symmetric_degree(const std::vector<int>& levels) {
  auto c = symmetric_mobius_coeffs(levels);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (c[static_cast<std::size_t>(k)] != 0) return k;
  return 0;
}

// Extension of a symmetric 0/1 function evaluated at an arbitrary rational
// point: sum_k f(k) * e_k where e_k(y) = sum_{|S|=k} prod_S y prod_~S (1-y).
inline Rat symmetric_mle_eval(const std::vector<int>& levels, const std::vector<Rat>& y) {
  const int ell = static_cast<int>(levels.size()) - 1;
  if (static_cast<int>(y.size()) != ell)
    throw std::invalid_argument("symmetric_mle_eval: arity mismatch");
  std::vector<Rat> dp(static_cast<std::size_t>(ell) + 1, Rat(0));
  dp[0] = 1;
  for (int i = 0; i < ell; ++i) {
    const Rat& yi = y[static_cast<std::size_t>(i)];
    Rat one_minus = Rat(1) - yi;
    for (int c = i + 1; c >= 1; --c)
      dp[static_cast<std::size_t>(c)] =
          dp[static_cast<std::size_t>(c)] * one_minus + dp[static_cast<std::size_t>(c - 1)] * yi;
    dp[0] *= one_minus;
  }
  Rat total = 0;
  for (int k = 0; k <= ell; ++k)
    if (levels[static_cast<std::size_t>(k)]) total += dp[static_cast<std::size_t>(k)];
  return total;
}

// Q(P_1,...,P_l) for Q the extension of a symmetric function and inner
// polynomials over a common universe of <= cap variables. Equals compose()
// with the explicit Q, term for term.
inline Polynomial compose_symmetric(const std::vector<int>& levels,
                                    const std::vector<Polynomial>& inner,
                                    int cap = 24) {
  const int ell = static_cast<int>(levels.size()) - 1;
  if (static_cast<int>(inner.size()) != ell)
    throw std::invalid_argument("compose_symmetric: arity mismatch");
  std::vector<Var> uni;
  int max_fd = 0;
  for (const auto& p : inner) {
    uni = universe_union(uni, p.universe());
    max_fd = std::max(max_fd, p.formal_degree());
  }
  const int n = static_cast<int>(uni.size());
  if (n > cap) throw cap_error("compose_symmetric: universe exceeds cube cap", n, cap);

  std::vector<std::vector<Rat>> inner_vals;
  inner_vals.reserve(inner.size());
  for (const auto& p : inner)
    inner_vals.push_back(cube_values(Polynomial(uni, p.terms(), p.formal_degree()), cap));

  const std::size_t points = std::size_t(1) << n;
  std::vector<Rat> values(points);
  std::vector<Rat> y(static_cast<std::size_t>(ell));
  for (std::uint64_t mask = 0; mask < points; ++mask) {
    for (int i = 0; i < ell; ++i) y[static_cast<std::size_t>(i)] = inner_vals[static_cast<std::size_t>(i)][mask];
    values[mask] = symmetric_mle_eval(levels, y);
  }
  return interpolate_cube(uni, std::move(values), symmetric_degree(levels) * max_fd);
}

}  // namespace probpoly
