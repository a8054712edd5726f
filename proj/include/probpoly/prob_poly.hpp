#pragma once

// Probabilistic polynomials as seeded samplers.
//
// A ProbPoly is a pure function of a 64-bit seed; "independent copies" are
// child seeds obtained by the counter split in rng.hpp. Besides the explicit
// sampler (which materializes a Polynomial and is capped by universe size),
// each construction carries an exact value oracle used by the Monte Carlo
// drivers: it reproduces the same draw from the same seed and returns the
// sampled polynomial's value at a Boolean point without expanding terms.
//
// The OR base construction: for scales j = 0..ceil(log2 n), include each
// variable in S_j with probability 2^-j and take P = 1 - prod_j (1 - L_j)
// with L_j the sum of the chosen variables. On the all-zeros input every L_j
// vanishes, so P = 0 identically. On an input of weight w the scale with
// 2^j in [w, 2w] makes L_j = 1 with probability >= 1/4, which zeroes the
// product; since the factors are integers, P = 1 exactly when some L_j = 1.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "probpoly/circuit.hpp"
#include "probpoly/polynomial.hpp"
#include "probpoly/pseudo_majority.hpp"
#include "probpoly/rng.hpp"
#include "probpoly/truth_table.hpp"

namespace probpoly {

inline int ceil_log2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

struct ProbPoly {
  int n = 0;  // variables 0..n-1
  Rat eps_claim;
  int degree_bound = 0;
  std::optional<Rat> linf_bound;
  bool one_sided_zero = false;
  std::string kind;
  int ell = 0;  // pseudo-majority arity when applicable

  std::function<Polynomial(std::uint64_t)> sample;
  std::function<Rat(std::uint64_t, std::uint64_t)> value_at;
  // exact "sampled value == target" test; constructions override this when a
  // cheaper sound test exists than computing the value
  std::function<bool(std::uint64_t, std::uint64_t, const Rat&)> agrees_at;
  // factorization of 1 - P into low-term-count factors, when the draw is a
  // product construction; lets consumers expand large products one cheap
  // factor at a time instead of multiplying expanded polynomials
  std::function<std::vector<Polynomial>(std::uint64_t)> one_minus_factors;

  void default_agrees() {
    auto v = value_at;
    agrees_at = [v](std::uint64_t seed, std::uint64_t mask, const Rat& target) {
      return v(seed, mask) == target;
    };
  }
};

namespace detail {

constexpr std::uint64_t kTagOrBase = 0x6f72626173ULL;

// per-draw scale sets as variable bitmasks; shared by sampler and oracle
inline std::vector<std::uint64_t> or_base_sets(std::uint64_t salt, std::uint64_t seed,
                                               int n) {
  const int scales = ceil_log2(n) + 1;
  Rng rng = rng_at(salt, {kTagOrBase, seed});
  std::vector<std::uint64_t> sets(static_cast<std::size_t>(scales), 0);
  for (int j = 0; j < scales; ++j)
    for (int v = 0; v < n; ++v)
      if (rng.bernoulli_pow2(j)) sets[static_cast<std::size_t>(j)] |= std::uint64_t(1) << v;
  return sets;
}

}  // namespace detail

// One-sided probabilistic polynomial for OR on n variables. eps_claim = 3/4:
// on a 1-input each draw hits P = 1 with probability >= 1/4; on the all-zeros
// input every draw is exactly 0.
inline ProbPoly or_base(int n, std::uint64_t salt = 0) {
  if (n < 1) throw std::invalid_argument("or_base: need n >= 1");
  if (n > 64) throw cap_error("or_base: variable count beyond mask width", n, 64);
  const int scales = ceil_log2(n) + 1;

  ProbPoly pp;
  pp.n = n;
  pp.eps_claim = rat_of(3, 4);
  pp.degree_bound = scales;
  pp.linf_bound = Rat(1) + rat_pow(Rat(n + 1), static_cast<unsigned long>(scales));
  pp.one_sided_zero = true;
  pp.kind = "or-base";

  std::vector<Var> uni;
  for (int v = 0; v < n; ++v) uni.push_back(v);

  pp.sample = [n, salt, uni](std::uint64_t seed) {
    if (n > 24) throw cap_error("or_base sample: universe exceeds materialization cap", n, 24);
    auto sets = detail::or_base_sets(salt, seed, n);
    Polynomial acc = Polynomial::constant(1, uni);
    for (std::uint64_t set : sets) {
      TermMap t;
      t[Monomial::one()] = 1;
      for (int v = 0; v < n; ++v)
        if ((set >> v) & 1) t[Monomial::single(v)] = -1;
      acc = multiply(acc, Polynomial(uni, std::move(t), 1));
    }
    return sub(Polynomial::constant(1, uni), acc);
  };
  pp.value_at = [n, salt](std::uint64_t seed, std::uint64_t mask) -> Rat {
    auto sets = detail::or_base_sets(salt, seed, n);
    Rat prod = 1;
    for (std::uint64_t set : sets)
      prod *= Rat(1 - __builtin_popcountll(set & mask));
    return Rat(1) - prod;
  };
  pp.one_minus_factors = [n, salt, uni](std::uint64_t seed) {
    auto sets = detail::or_base_sets(salt, seed, n);
    std::vector<Polynomial> factors;
    factors.reserve(sets.size());
    for (std::uint64_t set : sets) {
      TermMap t;
      t[Monomial::one()] = 1;
      for (int v = 0; v < n; ++v)
        if ((set >> v) & 1) t[Monomial::single(v)] = -1;
      factors.emplace_back(uni, std::move(t), 1);
    }
    return factors;
  };
  // P = 1 iff some factor vanishes (integer factors); P = 0 iff mask = 0
  pp.agrees_at = [n, salt](std::uint64_t seed, std::uint64_t mask, const Rat& target) {
    auto sets = detail::or_base_sets(salt, seed, n);
    if (target == 1) {
      for (std::uint64_t set : sets)
        if (__builtin_popcountll(set & mask) == 1) return true;
      return false;
    }
    if (target == 0 && mask == 0) return true;
    Rat prod = 1;
    for (std::uint64_t set : sets)
      prod *= Rat(1 - __builtin_popcountll(set & mask));
    return Rat(1) - prod == target;
  };
  return pp;
}

// Q = 1 - prod_{c<t} (1 - P_c): one-sided error drops to eps^t, the all-zeros
// value stays exactly 0, degree and L-infinity bounds multiply out.
inline ProbPoly amplify_onesided_or(const ProbPoly& pp, int t) {
  if (!pp.one_sided_zero)
    throw std::invalid_argument("amplify_onesided_or: input must be one-sided at 0");
  if (t < 1) throw std::invalid_argument("amplify_onesided_or: need t >= 1");

  ProbPoly out;
  out.n = pp.n;
  out.eps_claim = rat_pow(pp.eps_claim, static_cast<unsigned long>(t));
  out.degree_bound = t * pp.degree_bound;
  if (pp.linf_bound)
    out.linf_bound = Rat(1) + rat_pow(Rat(1) + *pp.linf_bound, static_cast<unsigned long>(t));
  out.one_sided_zero = true;
  out.kind = "or-amplified";

  const ProbPoly base = pp;
  out.sample = [base, t](std::uint64_t seed) {
    std::vector<Var> uni;
    for (int v = 0; v < base.n; ++v) uni.push_back(v);
    Polynomial acc = Polynomial::constant(1, uni);
    for (int c = 0; c < t; ++c) {
      Polynomial p = base.sample(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
      acc = multiply(acc, sub(Polynomial::constant(1, uni), p));
    }
    return sub(Polynomial::constant(1, uni), acc);
  };
  out.value_at = [base, t](std::uint64_t seed, std::uint64_t mask) -> Rat {
    Rat prod = 1;
    for (int c = 0; c < t; ++c)
      prod *= Rat(1) - base.value_at(derive_seed(seed, {static_cast<std::uint64_t>(c)}), mask);
    return Rat(1) - prod;
  };
  if (pp.one_minus_factors) {
    auto base_factors = pp.one_minus_factors;
    out.one_minus_factors = [base_factors, t](std::uint64_t seed) {
      std::vector<Polynomial> all;
      for (int c = 0; c < t; ++c) {
        auto part = base_factors(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
        for (auto& f : part) all.push_back(std::move(f));
      }
      return all;
    };
  }
  out.agrees_at = [base, t](std::uint64_t seed, std::uint64_t mask, const Rat& target) {
    if (target == 1) {
      // 1 - prod(1 - P_c) = 1 iff some P_c = 1 (rational factors, exact)
      for (int c = 0; c < t; ++c)
        if (base.agrees_at(derive_seed(seed, {static_cast<std::uint64_t>(c)}), mask, Rat(1)))
          return true;
      return false;
    }
    Rat prod = 1;
    for (int c = 0; c < t; ++c)
      prod *= Rat(1) - base.value_at(derive_seed(seed, {static_cast<std::uint64_t>(c)}), mask);
    return Rat(1) - prod == target;
  };
  return out;
}

struct AmplifyOptions {
  double const_a = 8.0;  // A in ell = ceil((A/delta^2) ln(1/eps)); calibratable
  int pseudo_majority_cap = 20;
  int verify_cap = 14;
  int cube_cap = 24;
};

inline int amplify_ell(double const_a, const Rat& delta, const Rat& eps) {
  const double d = rat_to_double(delta);
  const double e = rat_to_double(eps);
  const double raw = (const_a / (d * d)) * std::log(1.0 / e);
  return std::max(1, static_cast<int>(std::ceil(raw)));
}

// R = Q(P_1,...,P_ell) with Q the ell-pseudo-majority; ell independent inner
// draws with ell = ceil((A/delta^2) ln(1/eps)). The eps claim rides on the
// Chernoff argument and is validated empirically by the experiment drivers,
// never assumed.
inline ProbPoly amplify_general(const ProbPoly& pp, const Rat& delta, const Rat& eps,
                                const AmplifyOptions& opts = {}) {
  if (delta <= 0 || eps <= 0) throw std::invalid_argument("amplify_general: need delta, eps > 0");
  if (pp.eps_claim > rat_of(1, 2) - delta)
    throw std::invalid_argument("amplify_general: base error claim exceeds 1/2 - delta");
  const int ell = amplify_ell(opts.const_a, delta, eps);
  if (ell > opts.pseudo_majority_cap)
    throw cap_error("amplify_general: required pseudo-majority arity exceeds cap", ell,
                    opts.pseudo_majority_cap);

  const std::vector<int> levels = majority_levels(ell);
  const int r = pseudo_majority_threshold(ell);

  ProbPoly out;
  out.n = pp.n;
  out.eps_claim = eps;
  out.degree_bound = ell * pp.degree_bound;
  if (pp.linf_bound) {
    Rat base_l = *pp.linf_bound < 2 ? Rat(2) : *pp.linf_bound;
    out.linf_bound = symmetric_weight(levels) * rat_pow(base_l, static_cast<unsigned long>(ell));
  }
  out.one_sided_zero = pp.one_sided_zero;  // Maj(0,...,0) = 0
  out.kind = "pseudo-majority-amplified";
  out.ell = ell;

  const ProbPoly base = pp;
  const int cube_cap = opts.cube_cap;
  out.sample = [base, levels, ell, cube_cap](std::uint64_t seed) {
    std::vector<Polynomial> inner;
    inner.reserve(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i)
      inner.push_back(base.sample(derive_seed(seed, {static_cast<std::uint64_t>(i)})));
    return compose_symmetric(levels, inner, cube_cap);
  };
  out.value_at = [base, levels, ell](std::uint64_t seed, std::uint64_t mask) {
    std::vector<Rat> y(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i)
      y[static_cast<std::size_t>(i)] =
          base.value_at(derive_seed(seed, {static_cast<std::uint64_t>(i)}), mask);
    return symmetric_mle_eval(levels, y);
  };
  out.agrees_at = [base, levels, ell, r](std::uint64_t seed, std::uint64_t mask,
                                         const Rat& target) {
    if (target == 0 || target == 1) {
      // r inner values pinned to b force the pseudo-majority to b exactly,
      // whatever the remaining (real) values are
      int agree = 0;
      for (int i = 0; i < ell; ++i)
        if (base.agrees_at(derive_seed(seed, {static_cast<std::uint64_t>(i)}), mask, target))
          if (++agree >= r) return true;
    }
    std::vector<Rat> y(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i)
      y[static_cast<std::size_t>(i)] =
          base.value_at(derive_seed(seed, {static_cast<std::uint64_t>(i)}), mask);
    return symmetric_mle_eval(levels, y) == target;
  };
  return out;
}

// ---- circuit compilation ----

struct CompileOptions {
  Rat stage_error = rat_of(1, 10);  // per the amplified route
  bool amplified_route = false;     // compile at 1/10 then pseudo-majority amplify
  Rat amplify_delta = rat_of(2, 5);
  AmplifyOptions amplify;
  int materialize_cap = 24;
};

namespace detail {

constexpr std::uint64_t kTagCompile = 0x636f6d70ULL;

// repetitions per gate so that s * (3/4)^t <= eps, checked exactly
inline int gate_repetitions(int s, const Rat& eps) {
  const double se = std::max(1e-300, rat_to_double(eps) / std::max(1, s));
  int t = std::max(1, static_cast<int>(std::ceil(std::log(se) / std::log(0.75))));
  while (Rat(s) * rat_pow(rat_of(3, 4), static_cast<unsigned long>(t)) > eps) ++t;
  return t;
}

// scale subsets (arg-index lists) for one OR gate draw
inline std::vector<std::vector<int>> or_gate_sets(std::uint64_t salt, std::uint64_t seed,
                                                  int gate_id, int fan_in, int t) {
  const int scales = ceil_log2(fan_in) + 1;
  std::vector<std::vector<int>> sets;
  sets.reserve(static_cast<std::size_t>(t) * static_cast<std::size_t>(scales));
  Rng rng = rng_at(salt, {kTagCompile, seed, static_cast<std::uint64_t>(gate_id)});
  for (int c = 0; c < t; ++c)
    for (int j = 0; j < scales; ++j) {
      std::vector<int> s;
      for (int a = 0; a < fan_in; ++a)
        if (rng.bernoulli_pow2(j)) s.push_back(a);
      sets.push_back(std::move(s));
    }
  return sets;
}

}  // namespace detail

// Gate-by-gate replacement: every OR gate becomes an eps/s-error one-sided OR
// polynomial composed with its children, AND gates go through De Morgan. The
// union bound over gates gives total error <= eps on every input.
inline ProbPoly circuit_to_probpoly(const Circuit& c, const Rat& eps, std::uint64_t salt = 0,
                                    const CompileOptions& opts = {}) {
  const int n = c.n_inputs();
  const int s = c.size();

  if (opts.amplified_route) {
    CompileOptions naive = opts;
    naive.amplified_route = false;
    ProbPoly stage = circuit_to_probpoly(c, opts.stage_error, salt, naive);
    return amplify_general(stage, opts.amplify_delta, eps, opts.amplify);
  }

  // pure wiring (inputs and NOTs only): the polynomial is exact
  const int t = (s == 0) ? 0 : detail::gate_repetitions(s, eps);

  ProbPoly out;
  out.n = n;
  out.eps_claim = (s == 0) ? Rat(0) : eps;
  out.kind = "circuit-compiled";

  // exact certificates, folded along the gate list
  {
    std::vector<int> deg(c.gates().size());
    std::vector<Rat> linf(c.gates().size());
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
      const Gate& gate = c.gates()[g];
      switch (gate.op) {
        case GateOp::In:
          deg[g] = 1;
          linf[g] = 1;
          break;
        case GateOp::Not:
          deg[g] = deg[static_cast<std::size_t>(gate.args[0])];
          linf[g] = Rat(1) + linf[static_cast<std::size_t>(gate.args[0])];
          break;
        default: {
          const int k = static_cast<int>(gate.args.size());
          const int factors = t * (ceil_log2(k) + 1);
          int dmax = 0;
          Rat lsum = 0;
          for (int a : gate.args) {
            dmax = std::max(dmax, deg[static_cast<std::size_t>(a)]);
            Rat la = linf[static_cast<std::size_t>(a)];
            if (gate.op == GateOp::And) la += 1;  // complemented child
            lsum += la;
          }
          deg[g] = factors * dmax;
          linf[g] = Rat(1) + rat_pow(Rat(1) + lsum, static_cast<unsigned long>(factors));
          break;
        }
      }
    }
    out.degree_bound = deg[static_cast<std::size_t>(c.output())];
    out.linf_bound = linf[static_cast<std::size_t>(c.output())];
  }

  // one OR over inputs is the OR construction itself
  {
    const Gate& og = c.gates()[static_cast<std::size_t>(c.output())];
    bool pure_or = og.op == GateOp::Or;
    if (pure_or)
      for (int a : og.args)
        pure_or = pure_or && c.gates()[static_cast<std::size_t>(a)].op == GateOp::In;
    out.one_sided_zero = pure_or;
  }

  const Circuit circ = c;
  const int cap = opts.materialize_cap;

  out.sample = [circ, t, salt, n, cap](std::uint64_t seed) {
    if (n > cap)
      throw cap_error("circuit_to_probpoly sample: universe exceeds materialization cap", n, cap);
    std::vector<Var> uni;
    for (int v = 0; v < n; ++v) uni.push_back(v);
    const Polynomial one = Polynomial::constant(1, uni);
    std::vector<Polynomial> p(circ.gates().size());
    for (std::size_t g = 0; g < circ.gates().size(); ++g) {
      const Gate& gate = circ.gates()[g];
      switch (gate.op) {
        case GateOp::In:
          p[g] = Polynomial::variable(gate.args[0], uni);
          break;
        case GateOp::Not:
          p[g] = sub(one, p[static_cast<std::size_t>(gate.args[0])]);
          break;
        default: {
          const bool is_and = gate.op == GateOp::And;
          const int k = static_cast<int>(gate.args.size());
          auto sets = detail::or_gate_sets(salt, seed, static_cast<int>(g), k, t);
          Polynomial acc = one;
          for (const auto& set : sets) {
            Polynomial lin = Polynomial::zero(uni);
            for (int a : set) {
              const Polynomial& child = p[static_cast<std::size_t>(gate.args[static_cast<std::size_t>(a)])];
              lin = add(lin, is_and ? sub(one, child) : child);
            }
            acc = multiply(acc, sub(one, lin));
          }
          Polynomial or_poly = sub(one, acc);
          p[g] = is_and ? sub(one, or_poly) : or_poly;
          break;
        }
      }
    }
    return p[static_cast<std::size_t>(circ.output())];
  };
  out.value_at = [circ, t, salt](std::uint64_t seed, std::uint64_t mask) {
    std::vector<Rat> v(circ.gates().size());
    for (std::size_t g = 0; g < circ.gates().size(); ++g) {
      const Gate& gate = circ.gates()[g];
      switch (gate.op) {
        case GateOp::In:
          v[g] = Rat(static_cast<int>((mask >> gate.args[0]) & 1));
          break;
        case GateOp::Not:
          v[g] = Rat(1) - v[static_cast<std::size_t>(gate.args[0])];
          break;
        default: {
          const bool is_and = gate.op == GateOp::And;
          const int k = static_cast<int>(gate.args.size());
          auto sets = detail::or_gate_sets(salt, seed, static_cast<int>(g), k, t);
          Rat acc = 1;
          for (const auto& set : sets) {
            Rat lin = 0;
            for (int a : set) {
              const Rat& child = v[static_cast<std::size_t>(gate.args[static_cast<std::size_t>(a)])];
              lin += is_and ? Rat(1) - child : child;
            }
            acc *= Rat(1) - lin;
          }
          v[g] = is_and ? acc : Rat(1) - acc;
          break;
        }
      }
    }
    return v[static_cast<std::size_t>(circ.output())];
  };
  out.default_agrees();
  return out;
}

// ---- error measurement ----

struct ErrorTable {
  int n = 0;
  long long seeds_used = 0;
  std::vector<Rat> per_input;  // indexed by input mask

  Rat max_error() const {
    Rat m = 0;
    for (const Rat& e : per_input)
      if (e > m) m = e;
    return m;
  }
};

inline std::vector<std::uint64_t> seed_range(std::uint64_t master, long long count) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i)
    seeds[static_cast<std::size_t>(i)] = derive_seed(master, {static_cast<std::uint64_t>(i)});
  return seeds;
}

// Per-input disagreement frequency over an explicit seed list; the seed set
// is treated as the distribution, counts are exact.
inline ErrorTable error_exact(const ProbPoly& pp, const TruthTable& f,
                              const std::vector<std::uint64_t>& seeds, int cap = 24) {
  if (f.n != pp.n) throw std::invalid_argument("error_exact: arity mismatch");
  if (f.n > cap) throw cap_error("error_exact: input count exceeds enumeration cap", f.n, cap);
  ErrorTable table;
  table.n = f.n;
  table.seeds_used = static_cast<long long>(seeds.size());
  table.per_input.resize(f.size());
  for (std::uint64_t a = 0; a < f.size(); ++a) {
    const Rat target = Rat(f(a) ? 1 : 0);
    long bad = 0;
    for (std::uint64_t s : seeds)
      if (!pp.agrees_at(s, a, target)) ++bad;
    Rat e(Int(bad), Int(static_cast<long>(seeds.size())));
    e.canonicalize();
    table.per_input[a] = e;
  }
  return table;
}

}  // namespace probpoly
