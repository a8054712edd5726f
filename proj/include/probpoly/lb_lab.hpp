#pragma once

// The lower-bound laboratory: error profiles of polynomials against OR under
// geometric product distributions mu_i (each bit 1 with probability 2^-i),
// goodness ledgers, random restrictions and the exact averaging identity,
// greedy disjoint-term extraction, anti-concentration probes, and the full
// restriction process as a traceable simulation.
//
// Everything that can be exact is exact (rational weights, exact cube sums);
// Monte Carlo appears only above the configured enumeration cap and marks
// the trace as statistical.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "probpoly/polynomial.hpp"
#include "probpoly/prob_poly.hpp"
#include "probpoly/rng.hpp"

namespace probpoly {

// mu_i weight of a point with `ones` ones among n bits
inline Rat mu_weight(int i, int ones, int n) {
  Rat p = rat_pow2_inv(i);
  return rat_pow(p, static_cast<unsigned long>(ones)) *
         rat_pow(Rat(1) - p, static_cast<unsigned long>(n - ones));
}

namespace detail {

// exact value at a Boolean point; enumerates submasks of the support when
// that is cheaper than scanning the stored terms
inline Rat eval_boolean(const Polynomial& q, std::uint64_t mask) {
  const int pop = __builtin_popcountll(mask);
  const double scan_cost = double(q.term_count()) * (q.degree() + 1);
  if (pop <= 20 && std::pow(2.0, pop) < scan_cost) {
    const auto& uni = q.universe();
    Rat total = 0;
    std::uint64_t sub = mask;
    for (;;) {
      Monomial m;
      for (std::size_t i = 0; i < uni.size(); ++i)
        if ((sub >> i) & 1) m.vars.push_back(uni[i]);
      total += q.coefficient(m);
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
    return total;
  }
  return q.evaluate_mask(mask);
}

}  // namespace detail

// Err_i^X(q) = Pr_{x ~ mu_i}[q(x) != OR_X(x)], exact over the cube of X.
// q's universe must be contained in X; missing variables are irrelevant
// coordinates of the product distribution.
inline Rat err_level_exact(const Polynomial& q, const std::vector<Var>& X, int i,
                           int cap = 24) {
  const int n = static_cast<int>(X.size());
  if (n > cap) throw cap_error("err_level_exact: |X| exceeds enumeration cap", n, cap);
  Polynomial qx(X, q.terms(), q.formal_degree());
  auto values = cube_values(qx, cap);
  // weights grouped by popcount
  std::vector<Rat> w(static_cast<std::size_t>(n) + 1);
  for (int ones = 0; ones <= n; ++ones) w[static_cast<std::size_t>(ones)] = mu_weight(i, ones, n);
  Rat err = 0;
  for (std::uint64_t a = 0; a < values.size(); ++a) {
    const Rat target = (a != 0) ? 1 : 0;
    if (values[a] != target) err += w[static_cast<std::size_t>(__builtin_popcountll(a))];
  }
  return err;
}

// Boolean-point evaluator with a precomputed cube table when the variable
// count permits; Monte Carlo error estimation calls it per sample
class BooleanEvaluator {
 public:
  BooleanEvaluator(const Polynomial& q, const std::vector<Var>& X, int table_cap = 20)
      : qx_(X, q.terms(), q.formal_degree()) {
    if (static_cast<int>(X.size()) <= table_cap) table_ = cube_values(qx_, table_cap);
  }
  Rat operator()(std::uint64_t mask) const {
    if (!table_.empty()) return table_[mask];
    return detail::eval_boolean(qx_, mask);
  }
  int n() const { return static_cast<int>(qx_.universe().size()); }

 private:
  Polynomial qx_;
  std::vector<Rat> table_;
};

struct ErrEstimate {
  bool exact = false;
  Rat exact_value;
  double estimate = 0;
  double sigma = 0;
  long long samples = 0;

  double value() const { return exact ? rat_to_double(exact_value) : estimate; }
};

inline ErrEstimate err_level_sampled(const BooleanEvaluator& ev, int i,
                                     long long mc_samples, Rng& rng) {
  ErrEstimate e;
  const int n = ev.n();
  long long bad = 0;
  for (long long t = 0; t < mc_samples; ++t) {
    std::uint64_t mask = 0;
    for (int v = 0; v < n; ++v)
      if (rng.bernoulli_pow2(i)) mask |= std::uint64_t(1) << v;
    const Rat target = (mask != 0) ? 1 : 0;
    if (ev(mask) != target) ++bad;
  }
  e.samples = mc_samples;
  e.estimate = double(bad) / double(mc_samples);
  e.sigma = std::sqrt(std::max(e.estimate, 1.0 / double(mc_samples)) *
                      (1 - std::min(e.estimate, 1.0)) / double(mc_samples));
  return e;
}

// exact below the cap, Monte Carlo above (exact per-sample evaluation)
inline ErrEstimate err_level(const Polynomial& q, const std::vector<Var>& X, int i,
                             int exact_cap, long long mc_samples, Rng& rng) {
  ErrEstimate e;
  const int n = static_cast<int>(X.size());
  if (n <= exact_cap) {
    e.exact = true;
    e.exact_value = err_level_exact(q, X, i, exact_cap);
    return e;
  }
  BooleanEvaluator ev(q, X);
  return err_level_sampled(ev, i, mc_samples, rng);
}

// avg_{i in [ell]} Err_i^X(q), exact
inline Rat err_avg_exact(const Polynomial& q, const std::vector<Var>& X, int ell,
                         int cap = 24) {
  if (ell < 1) throw std::invalid_argument("err_avg_exact: need ell >= 1");
  Rat sum = 0;
  for (int i = 1; i <= ell; ++i) sum += err_level_exact(q, X, i, cap);
  return sum / ell;
}

// (X, ell, delta)-goodness, exact
inline bool is_good(const Polynomial& q, const std::vector<Var>& X, int ell,
                    const Rat& delta, int cap = 24) {
  return err_avg_exact(q, X, ell, cap) <= delta;
}

// ---- restrictions ----

struct Restriction {
  std::vector<Var> domain;  // X
  std::vector<Var> stars;   // X_rho; everything else maps to 0
  int b = 1;                // star probability 2^-b
};

inline Restriction sample_restriction(const std::vector<Var>& X, int b, Rng& rng) {
  if (b < 1) throw std::invalid_argument("sample_restriction: need b >= 1 (p <= 1/2)");
  Restriction rho;
  rho.domain = X;
  rho.b = b;
  for (Var v : X)
    if (rng.bernoulli_pow2(b)) rho.stars.push_back(v);
  return rho;
}

// q|rho: non-stars set to 0; delegates to formal restriction
inline Polynomial apply_restriction(const Polynomial& q, const Restriction& rho) {
  Assignment sigma;
  for (Var v : rho.domain) sigma[v] = 0;
  for (Var v : rho.stars) sigma.erase(v);
  return q.restricted(sigma);
}

struct IdentityCheck {
  Rat lhs;  // E_rho[ Err_i^{X_rho}(q|rho) ]
  Rat rhs;  // Err_{i+b}^X(q)
  bool equal = false;
};

// E_rho[Err_i^{X_rho}(q|rho)] = Err_{i+b}^X(q), both sides exact rationals.
// Equality must be exact. Enumerates all 2^|X| restrictions and, inside each,
// the cube of the stars; restriction to 0 means q|rho(a) is just q's cube
// value at a, so one cube table serves every rho.
inline IdentityCheck verify_restriction_identity(const Polynomial& q,
                                                 const std::vector<Var>& X, int i, int b,
                                                 int cap = 12) {
  const int n = static_cast<int>(X.size());
  if (n > cap)
    throw cap_error("verify_restriction_identity: |X| exceeds enumeration cap", n, cap);
  Polynomial qx(X, q.terms(), q.formal_degree());
  auto values = cube_values(qx, cap);

  std::vector<Rat> pw(static_cast<std::size_t>(n) + 1), qw(static_cast<std::size_t>(n) + 1);
  const Rat p = rat_pow2_inv(b);
  for (int k = 0; k <= n; ++k) {
    pw[static_cast<std::size_t>(k)] = rat_pow(p, static_cast<unsigned long>(k));
    qw[static_cast<std::size_t>(k)] = rat_pow(Rat(1) - p, static_cast<unsigned long>(k));
  }
  std::vector<Rat> mu(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) mu[static_cast<std::size_t>(k)] = rat_pow2_inv(i * k);
  const Rat one_minus_pi = Rat(1) - rat_pow2_inv(i);

  IdentityCheck out;
  out.lhs = 0;
  for (std::uint64_t stars = 0; stars < (std::uint64_t(1) << n); ++stars) {
    const int s = __builtin_popcountll(stars);
    const Rat rho_weight =
        pw[static_cast<std::size_t>(s)] * qw[static_cast<std::size_t>(n - s)];
    Rat err = 0;
    std::uint64_t a = stars;
    for (;;) {
      const int ones = __builtin_popcountll(a);
      const Rat target = (a != 0) ? 1 : 0;
      if (values[a] != target)
        err += mu[static_cast<std::size_t>(ones)] *
               rat_pow(one_minus_pi, static_cast<unsigned long>(s - ones));
      if (a == 0) break;
      a = (a - 1) & stars;
    }
    out.lhs += rho_weight * err;
  }
  out.rhs = err_level_exact(qx, X, i + b, cap);
  out.equal = (out.lhs == out.rhs);
  return out;
}

// ---- top-degree structure ----

// Greedy maximal set of variable-disjoint degree-d monomials, scanned in the
// graded-lex term order. Maximal, not maximum: every remaining degree-d term
// meets the returned set (checked before returning).
inline std::vector<Monomial> disjoint_terms(const Polynomial& q, int d) {
  std::vector<Monomial> picked;
  std::vector<char> used;  // indexed by var position in q.universe()
  used.assign(q.universe().size(), 0);
  auto pos = [&](Var v) {
    return static_cast<std::size_t>(
        std::lower_bound(q.universe().begin(), q.universe().end(), v) -
        q.universe().begin());
  };
  for (const auto& [m, c] : q.terms()) {
    if (m.degree() != d) continue;
    bool clash = false;
    for (Var v : m.vars)
      if (used[pos(v)]) { clash = true; break; }
    if (clash) continue;
    for (Var v : m.vars) used[pos(v)] = 1;
    picked.push_back(m);
  }
  // maximality postcondition
  for (const auto& [m, c] : q.terms()) {
    if (m.degree() != d) continue;
    bool meets = false;
    for (Var v : m.vars)
      if (used[pos(v)]) { meets = true; break; }
    if (!meets && d > 0)
      throw std::logic_error("disjoint_terms: maximality postcondition violated");
  }
  return picked;
}

struct AntiConcProbe {
  long long trials = 0;
  long long zeros = 0;
  double estimate = 0;
  double sigma = 0;
  int degree = 0;
  int disjoint_count = 0;  // r, the quantity the anti-concentration bound sees
  double reference_bound = 0;  // B * d^(4/3) * r^(-1/(4d+1)) * sqrt(ln r)
};

// Monte Carlo estimate of Pr_{x ~ uniform}[q(x) = 0] with exact per-sample
// evaluation, plus the functional value of the anti-concentration bound for
// a configured B (reported, never asserted).
inline AntiConcProbe anticoncentration_probe(const Polynomial& q, long long trials,
                                             std::uint64_t seed, double B = 1.0) {
  if (q.is_zero()) throw std::invalid_argument("anticoncentration_probe: q must be nonzero");
  const int n = static_cast<int>(q.universe().size());
  if (n > 63) throw cap_error("anticoncentration_probe: too many variables", n, 63);
  AntiConcProbe probe;
  probe.trials = trials;
  probe.degree = q.degree();
  probe.disjoint_count = static_cast<int>(disjoint_terms(q, probe.degree).size());
  Rng rng = rng_at(seed, {0x616e7469ULL});
  for (long long t = 0; t < trials; ++t) {
    std::uint64_t mask = rng.next_bits(n);
    if (detail::eval_boolean(q, mask) == 0) ++probe.zeros;
  }
  probe.estimate = double(probe.zeros) / double(trials);
  probe.sigma = std::sqrt(std::max(probe.estimate * (1 - probe.estimate), 1e-12) /
                          double(trials));
  const double d = probe.degree, r = probe.disjoint_count;
  probe.reference_bound =
      (r >= 1 && d >= 1)
          ? B * std::pow(d, 4.0 / 3.0) * std::pow(r, -1.0 / (4 * d + 1)) * std::sqrt(std::log(r))
          : 0.0;
  return probe;
}

// ---- the restriction process ----

struct LbdConfig {
  std::uint64_t seed = 1;
  enum class Preset { Paper, Scaled } preset = Preset::Scaled;
  int s_copies = 0;  // product-amplification copies for q0; 0 = ceil(log2 log2 n)
  int retry_limit = 200;
  int round_limit = 64;
  int exact_err_cap = 12;  // exact goodness at or below; Monte Carlo above
  long long mc_samples = 2000;
  double chernoff_sigmas = 3.0;
  bool measure_initial_goodness = true;
  int b_override = 0;
  int ell0_override = 0;
  std::optional<Rat> eps0_override;
};

struct LbdRound {
  int round = 0;
  bool accepted = false;
  int n_before = 0, n_after = 0;
  int d_before = 0, d_after = 0;
  int ell_after = 0;
  Rat eps_after;
  int retries = 0;  // rejected draws before the accepted one
  int e1_count = 0, e2_count = 0, e3_count = 0;
  int disjoint_count = 0;
  int s_vars = 0;  // |vars(S)|
  std::vector<Var> stars;
  bool e3_statistical = false;
  bool e3_vacuous = false;  // ledger bound >= 1, goodness trivially holds
  Polynomial poly_after;
};

struct LbdTrace {
  int n0 = 0;
  int d0 = 0;
  int s_copies = 0;
  std::uint64_t seed = 0;
  std::string preset;
  // paper-formula values and the effective ones actually used
  Int r_formula;
  int b_formula = 0, ell0_formula = 0;
  Int r_effective;
  int b = 0, ell0 = 0;
  Rat eps0;
  Rat goodness_factor;  // exact per-round ledger multiplier 1 + 16 b / floor(log2 n)
  bool statistical = false;

  ErrEstimate initial_goodness;  // measured avg err of q0 at [ell0], when enabled
  Polynomial q0;
  Rat q0_at_zero;

  std::vector<LbdRound> rounds;

  std::string terminal_reason;  // constant | retries-exhausted | ell-exhausted |
                                // round-limit | degree-violation
  std::string dominant_event;   // on retry exhaustion
  Rat terminal_constant;        // when constant
  // contradiction check (Eq-1 logic): Err_1 of the terminal polynomial vs the
  // goodness budget ell_t * eps_t
  ErrEstimate terminal_err1;
  Rat goodness_budget;
  bool contradiction = false;
};

namespace detail {

inline int floor_log2(int n) {
  int k = 0;
  while ((2 << k) <= n) ++k;
  return k;
}

// smallest b with 2^-b <= 1/r^2, i.e. 2^b >= r^2; the paper window
// [1/(2 r^2), 1/r^2] then holds automatically
inline int b_from_r(const Int& r) {
  Int r2 = r * r;
  std::size_t bits = mpz_sizeinbase(r2.get_mpz_t(), 2);
  int b = static_cast<int>(bits) - 1;
  if ((Int(1) << b) < r2) ++b;
  return std::max(1, b);
}

}  // namespace detail

inline LbdTrace run_restriction_process_from(const Polynomial& q0, const LbdConfig& cfg) {
  const std::vector<Var> X0 = q0.universe();
  const int n0 = static_cast<int>(X0.size());
  if (n0 < 2) throw std::invalid_argument("run_restriction_process: need |X0| >= 2");
  const int lg = detail::floor_log2(n0);

  LbdTrace trace;
  trace.n0 = n0;
  trace.seed = cfg.seed;
  trace.preset = cfg.preset == LbdConfig::Preset::Paper ? "paper" : "scaled";
  trace.q0 = q0;
  trace.d0 = q0.degree();
  trace.q0_at_zero = q0.coefficient(Monomial::one());

  // paper-formula parameters: r = (d0 log^2 n)^(10 d0), p in [1/2r^2, 1/r^2]
  {
    Int base = Int(std::max(1, trace.d0)) * lg * lg;
    Int r = 1;
    for (int e = 0; e < 10 * std::max(1, trace.d0); ++e) r *= base;
    trace.r_formula = r;
    trace.b_formula = detail::b_from_r(r);
    trace.ell0_formula = std::max(1, lg / 2);
  }

  if (cfg.preset == LbdConfig::Preset::Paper) {
    trace.r_effective = trace.r_formula;
    trace.b = trace.b_formula;
    trace.ell0 = trace.ell0_formula;
  } else {
    // desk-scale: small fixed r so that restrictions keep a workable fraction
    // of the variables, and enough goodness levels for every possible round
    trace.r_effective = 2;
    trace.b = detail::b_from_r(trace.r_effective);
    trace.ell0 = trace.b * std::max(1, trace.d0) + std::max(2, lg / 2);
  }
  if (cfg.b_override > 0) trace.b = cfg.b_override;
  if (cfg.ell0_override > 0) trace.ell0 = cfg.ell0_override;
  trace.eps0 = cfg.eps0_override ? *cfg.eps0_override : Rat(1, lg * lg);
  trace.goodness_factor = Rat(1) + Rat(16 * trace.b, lg);

  if (cfg.measure_initial_goodness) {
    Rng mc = rng_at(cfg.seed, {0x676f6f64ULL});
    if (n0 <= cfg.exact_err_cap) {
      trace.initial_goodness.exact = true;
      trace.initial_goodness.exact_value = err_avg_exact(q0, X0, trace.ell0, cfg.exact_err_cap);
    } else {
      trace.statistical = true;
      BooleanEvaluator ev(q0, X0);
      double sum = 0, var = 0;
      long long samples = 0;
      for (int i = 1; i <= trace.ell0; ++i) {
        ErrEstimate e = err_level_sampled(ev, i, cfg.mc_samples, mc);
        sum += e.estimate;
        var += e.sigma * e.sigma;
        samples += e.samples;
      }
      trace.initial_goodness.estimate = sum / trace.ell0;
      trace.initial_goodness.sigma = std::sqrt(var) / trace.ell0;
      trace.initial_goodness.samples = samples;
    }
  }

  Polynomial q = q0;
  std::vector<Var> X = X0;
  int ell = trace.ell0;
  Rat eps = trace.eps0;
  trace.terminal_reason = "round-limit";

  for (int round = 1; round <= cfg.round_limit; ++round) {
    if (q.is_constant()) {
      trace.terminal_reason = "constant";
      trace.terminal_constant = q.constant_value();
      break;
    }
    const int m = static_cast<int>(X.size());
    const int d = q.degree();
    auto S = disjoint_terms(q, d);
    std::vector<Var> s_vars;
    for (const Monomial& mono : S)
      for (Var v : mono.vars) s_vars.push_back(v);
    std::sort(s_vars.begin(), s_vars.end());

    const int ell_next = ell - trace.b;
    if (ell_next < 1) {
      trace.terminal_reason = "ell-exhausted";
      break;
    }
    const Rat eps_next = eps * trace.goodness_factor;

    LbdRound log;
    log.round = round;
    log.n_before = m;
    log.d_before = d;
    log.disjoint_count = static_cast<int>(S.size());
    log.s_vars = static_cast<int>(s_vars.size());

    bool accepted = false;
    Restriction rho;
    Polynomial q_next;
    for (int attempt = 0; attempt < cfg.retry_limit; ++attempt) {
      Rng rng = rng_at(cfg.seed, {0x726f756eULL, static_cast<std::uint64_t>(round),
                                  static_cast<std::uint64_t>(attempt)});
      rho = sample_restriction(X, trace.b, rng);
      const long stars = static_cast<long>(rho.stars.size());

      // E1: |X_rho| outside [pm/2, 3pm/2]; integer comparison at p = 2^-b
      bool e1;
      {
        Int lhs = Int(stars) << (trace.b + 1);
        e1 = (lhs < m) || (lhs > 3 * Int(m));
      }
      if (e1) {
        ++log.e1_count;
        ++log.retries;
        continue;
      }
      // E2: some variable of S survives
      bool e2 = false;
      for (Var v : s_vars)
        if (std::binary_search(rho.stars.begin(), rho.stars.end(), v)) { e2 = true; break; }
      if (e2) {
        ++log.e2_count;
        ++log.retries;
        continue;
      }
      // E3: restricted polynomial not (X_rho, ell', eps')-good
      q_next = apply_restriction(q, rho);
      if (eps_next >= 1) {
        log.e3_vacuous = true;
        accepted = true;
        break;
      }
      bool e3;
      if (stars <= cfg.exact_err_cap) {
        e3 = !is_good(q_next, rho.stars, ell_next, eps_next, cfg.exact_err_cap);
      } else {
        log.e3_statistical = true;
        trace.statistical = true;
        BooleanEvaluator ev(q_next, rho.stars);
        double sum = 0, var = 0;
        for (int i = 1; i <= ell_next; ++i) {
          ErrEstimate e = err_level_sampled(ev, i, cfg.mc_samples, rng);
          sum += e.estimate;
          var += e.sigma * e.sigma;
        }
        double avg = sum / ell_next;
        double margin = cfg.chernoff_sigmas * std::sqrt(var) / ell_next;
        e3 = avg > rat_to_double(eps_next) + margin;
      }
      if (e3) {
        ++log.e3_count;
        ++log.retries;
        continue;
      }
      accepted = true;
      break;
    }

    if (!accepted) {
      trace.terminal_reason = "retries-exhausted";
      int m1 = log.e1_count, m2 = log.e2_count, m3 = log.e3_count;
      trace.dominant_event = (m1 >= m2 && m1 >= m3) ? "E1" : (m2 >= m3 ? "E2" : "E3");
      trace.rounds.push_back(std::move(log));
      break;
    }

    log.accepted = true;
    log.n_after = static_cast<int>(rho.stars.size());
    log.d_after = q_next.degree();
    log.ell_after = ell_next;
    log.eps_after = eps_next;
    log.stars = rho.stars;
    log.poly_after = q_next;
    const bool degree_dropped = log.d_after < d;
    trace.rounds.push_back(std::move(log));
    if (!degree_dropped) {
      trace.terminal_reason = "degree-violation";
      break;
    }

    q = std::move(q_next);
    X = rho.stars;
    ell = ell_next;
    eps = eps_next;
    if (q.is_constant()) {
      trace.terminal_reason = "constant";
      trace.terminal_constant = q.constant_value();
      break;
    }
  }

  // terminal contradiction check: Eq-1 logic on the final polynomial
  trace.goodness_budget = Rat(ell) * eps;
  {
    Rng mc = rng_at(cfg.seed, {0x7465726dULL});
    trace.terminal_err1 = err_level(q, X, 1, cfg.exact_err_cap, cfg.mc_samples, mc);
    if (!trace.terminal_err1.exact) trace.statistical = true;
    if (trace.terminal_err1.exact)
      trace.contradiction = trace.terminal_err1.exact_value > trace.goodness_budget;
    else
      trace.contradiction =
          trace.terminal_err1.estimate > rat_to_double(trace.goodness_budget);
  }
  return trace;
}

// Builds q0 = 1 - prod_{i<s}(1 - P_i) from one-sided draws of pp (draws with
// a nonzero value at 0 are discarded and redrawn, mirroring the conditioning
// in the argument), then runs the process.
inline LbdTrace run_restriction_process(const ProbPoly& pp, const LbdConfig& cfg) {
  const int n = pp.n;
  int s = cfg.s_copies;
  if (s <= 0) s = std::max(1, ceil_log2(std::max(2, ceil_log2(std::max(2, n)))));

  std::vector<Var> uni;
  for (int v = 0; v < n; ++v) uni.push_back(v);
  Polynomial acc = Polynomial::constant(1, uni);
  int copies = 0;
  std::uint64_t counter = 0;
  while (copies < s) {
    std::uint64_t child = derive_seed(cfg.seed, {0x71306271ULL, counter++});
    if (counter > 64 * static_cast<std::uint64_t>(s))
      throw std::runtime_error("run_restriction_process: cannot draw zero-at-zero samples");
    if (pp.value_at(child, 0) != 0) continue;  // discard, per the conditioning step
    if (pp.one_minus_factors) {
      // expand factor by factor; far cheaper than multiplying expanded draws
      for (const Polynomial& f : pp.one_minus_factors(child)) acc = multiply(acc, f);
    } else {
      acc = multiply(acc, sub(Polynomial::constant(1, uni), pp.sample(child)));
    }
    ++copies;
  }
  Polynomial q0 = sub(Polynomial::constant(1, uni), acc);

  LbdTrace trace = run_restriction_process_from(q0, cfg);
  trace.s_copies = s;
  return trace;
}

}  // namespace probpoly
