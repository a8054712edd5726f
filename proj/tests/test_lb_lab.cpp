#include <catch2/catch_amalgamated.hpp>

#include "probpoly/lb_lab.hpp"
#include "probpoly/truth_table.hpp"

using namespace probpoly;

namespace {

std::vector<Var> vars_upto(int n) {
  std::vector<Var> X;
  for (int v = 0; v < n; ++v) X.push_back(v);
  return X;
}

Polynomial random_sparse(int n, int max_terms, Rng& rng) {
  TermMap t;
  const int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int k = 0; k < terms; ++k) {
    Monomial m;
    for (int v = 0; v < n; ++v)
      if (rng.next_bits(1)) m.vars.push_back(v);
    Rat c = rat_of(static_cast<long>(rng.below(11)) - 5, static_cast<long>(rng.below(3)) + 1);
    if (c == 0) continue;
    t[m] += c;
    if (t[m] == 0) t.erase(m);
  }
  return Polynomial(vars_upto(n), std::move(t));
}

// independent oracle: brute-force sum over all points, no cube-table sharing
Rat err_level_bruteforce(const Polynomial& q, const std::vector<Var>& X, int i) {
  const int n = static_cast<int>(X.size());
  Polynomial qx(X, q.terms(), q.formal_degree());
  Rat total = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a) {
    Assignment asg;
    for (int v = 0; v < n; ++v) asg[X[static_cast<std::size_t>(v)]] = Rat(static_cast<int>((a >> v) & 1));
    Rat val = qx.evaluate(asg);
    Rat target = (a != 0) ? 1 : 0;
    if (val != target) total += mu_weight(i, __builtin_popcountll(a), n);
  }
  return total;
}

}  // namespace

TEST_CASE("err_level on named examples") {
  // q = 0 against OR_n: 1 - (1 - 2^-i)^n
  for (int n : {3, 5}) {
    for (int i = 1; i <= 4; ++i) {
      Rat expect = Rat(1) - rat_pow(Rat(1) - rat_pow2_inv(i), static_cast<unsigned long>(n));
      REQUIRE(err_level_exact(Polynomial::zero(vars_upto(n)), vars_upto(n), i) == expect);
    }
  }
  // exact OR extension: zero error at every level
  for (int i = 1; i <= 5; ++i)
    REQUIRE(err_level_exact(multilinear_extension(or_table(4)), vars_upto(4), i) == 0);

  // q = x0 on {x0, x1} at level 2
  REQUIRE(err_level_exact(Polynomial::variable(0, {0, 1}), {0, 1}, 2) == rat_of(3, 16));
}

TEST_CASE("err_level matches the brute-force oracle") {
  Rng rng(700);
  for (int rep = 0; rep < 25; ++rep) {
    int n = 2 + static_cast<int>(rng.below(5));  // up to 6 here; acceptance covers 10
    Polynomial q = random_sparse(n, 8, rng);
    for (int i = 1; i <= 6; ++i)
      REQUIRE(err_level_exact(q, vars_upto(n), i) == err_level_bruteforce(q, vars_upto(n), i));
  }
}

TEST_CASE("goodness on named examples") {
  Polynomial or4 = multilinear_extension(or_table(4));
  for (int ell : {1, 2, 5})
    REQUIRE(is_good(or4, vars_upto(4), ell, Rat(0)));

  Polynomial zero = Polynomial::zero(vars_upto(4));
  REQUIRE(is_good(zero, vars_upto(4), 2, Rat(1)));
  // avg = (15/16 + 175/256)/2 = 415/512
  REQUIRE(err_avg_exact(zero, vars_upto(4), 2) == rat_of(415, 512));
  REQUIRE(is_good(zero, vars_upto(4), 2, rat_of(415, 512)));
  REQUIRE(!is_good(zero, vars_upto(4), 2, rat_of(414, 512)));
}

TEST_CASE("restriction sampling and application") {
  Rng rng(41);
  Polynomial q({0, 1, 2}, [] {
    TermMap t;
    t[Monomial({0, 1})] = 1;
    t[Monomial::single(2)] = 1;
    return t;
  }());

  Restriction all_stars{{0, 1, 2}, {0, 1, 2}, 1};
  REQUIRE(same_terms(apply_restriction(q, all_stars), q));

  Restriction none{{0, 1, 2}, {}, 1};
  Polynomial c = apply_restriction(q, none);
  REQUIRE(c.is_formally_constant(0));  // q(0,0,0) = 0

  Restriction only2{{0, 1, 2}, {2}, 1};
  Polynomial r = apply_restriction(q, only2);
  REQUIRE(r.terms().size() == 1);
  REQUIRE(r.coefficient(Monomial::single(2)) == 1);
  REQUIRE(r.universe() == std::vector<Var>{2});

  REQUIRE_THROWS_AS(sample_restriction({0, 1}, 0, rng), std::invalid_argument);
  // star rate 2^-b in aggregate
  long long stars = 0;
  for (int rep = 0; rep < 20000; ++rep) stars += static_cast<long long>(
      sample_restriction(vars_upto(4), 2, rng).stars.size());
  double rate = double(stars) / (20000.0 * 4.0);
  REQUIRE(rate > 0.25 - 0.012);
  REQUIRE(rate < 0.25 + 0.012);
}

TEST_CASE("restriction identity on named examples") {
  // q = 0: both sides 1 - (1 - 2^-(i+b))^n
  auto zero_check = verify_restriction_identity(Polynomial::zero(vars_upto(4)), vars_upto(4), 2, 1);
  REQUIRE(zero_check.equal);
  REQUIRE(zero_check.rhs == Rat(1) - rat_pow(Rat(1) - rat_pow2_inv(3), 4));

  auto x0_check = verify_restriction_identity(Polynomial::variable(0, {0, 1}), {0, 1}, 1, 1);
  REQUIRE(x0_check.equal);
  REQUIRE(x0_check.lhs == rat_of(3, 16));

  auto or_check = verify_restriction_identity(multilinear_extension(or_table(4)), vars_upto(4), 1, 2);
  REQUIRE(or_check.equal);
  REQUIRE(or_check.lhs == 0);
}

TEST_CASE("restriction identity and averaging bound on random polynomials") {
  Rng rng(900);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 2 + static_cast<int>(rng.below(7));
    Polynomial q = random_sparse(n, 10, rng);
    int i = 1 + static_cast<int>(rng.below(4));
    int b = 1 + static_cast<int>(rng.below(3));
    REQUIRE(verify_restriction_identity(q, vars_upto(n), i, b).equal);

    // avg_{i in {b+1..ell}} Err_i <= avg_{i in [ell]} Err_i / (1 - b/ell)
    int ell = b + 1 + static_cast<int>(rng.below(4));
    Rat tail = 0;
    for (int lv = b + 1; lv <= ell; ++lv) tail += err_level_exact(q, vars_upto(n), lv);
    tail /= (ell - b);
    Rat full = err_avg_exact(q, vars_upto(n), ell);
    REQUIRE(tail <= full / (Rat(1) - Rat(b, ell)));
  }
}

TEST_CASE("disjoint_terms on named examples") {
  Polynomial q1(vars_upto(4), [] {
    TermMap t;
    t[Monomial({0, 1})] = 1;
    t[Monomial({2, 3})] = 1;
    t[Monomial({0, 2})] = 1;
    return t;
  }());
  auto s1 = disjoint_terms(q1, 2);
  REQUIRE(s1.size() == 2);
  REQUIRE(s1[0] == Monomial({0, 1}));
  REQUIRE(s1[1] == Monomial({2, 3}));

  Polynomial lin(vars_upto(3), [] {
    TermMap t;
    t[Monomial::single(0)] = 2;
    t[Monomial::single(1)] = -1;
    t[Monomial::single(2)] = 1;
    return t;
  }());
  REQUIRE(disjoint_terms(lin, 1).size() == 3);

  Polynomial star(vars_upto(4), [] {
    TermMap t;
    t[Monomial({0, 1})] = 1;
    t[Monomial({0, 2})] = 1;
    t[Monomial({0, 3})] = 1;
    return t;
  }());
  REQUIRE(disjoint_terms(star, 2).size() == 1);
}

TEST_CASE("anticoncentration probe on named examples") {
  // q = x0 x1 + x2 x3: Pr[q = 0] = 9/16
  Polynomial q(vars_upto(4), [] {
    TermMap t;
    t[Monomial({0, 1})] = 1;
    t[Monomial({2, 3})] = 1;
    return t;
  }());
  AntiConcProbe p = anticoncentration_probe(q, 40000, 5);
  REQUIRE(p.degree == 2);
  REQUIRE(p.disjoint_count == 2);
  REQUIRE(std::abs(p.estimate - 9.0 / 16.0) <= 3 * p.sigma + 1e-9);

  AntiConcProbe single = anticoncentration_probe(Polynomial::variable(0), 20000, 6);
  REQUIRE(std::abs(single.estimate - 0.5) <= 3 * single.sigma + 1e-9);

  // product family: Pr[q_m = 0] = (3/4)^m, decreasing in the disjoint count
  double prev = 1.0;
  for (int m = 1; m <= 4; ++m) {
    TermMap t;
    for (int j = 0; j < m; ++j) t[Monomial({2 * j, 2 * j + 1})] = 1;
    Polynomial qm(vars_upto(2 * m), std::move(t));
    AntiConcProbe probe = anticoncentration_probe(qm, 50000, 70 + m);
    REQUIRE(probe.disjoint_count == m);
    double expect = std::pow(0.75, m);
    REQUIRE(std::abs(probe.estimate - expect) <= 3 * probe.sigma + 1e-9);
    REQUIRE(probe.estimate < prev + 0.01);
    prev = probe.estimate;
  }
}

TEST_CASE("restriction process: constant zero start terminates immediately") {
  LbdConfig cfg;
  cfg.seed = 3;
  LbdTrace trace = run_restriction_process_from(Polynomial::zero(vars_upto(8)), cfg);
  REQUIRE(trace.rounds.empty());
  REQUIRE(trace.terminal_reason == "constant");
  REQUIRE(trace.terminal_constant == 0);
  REQUIRE(trace.q0_at_zero == 0);
  // the Eq-1 tension report runs: constant 0 is a terrible OR approximation
  REQUIRE(trace.terminal_err1.exact);
  REQUIRE(trace.terminal_err1.exact_value == rat_of(255, 256));
}

TEST_CASE("restriction process: single-variable start drops degree 1 -> 0") {
  LbdConfig cfg;
  cfg.seed = 9;
  LbdTrace trace = run_restriction_process_from(Polynomial::variable(0, vars_upto(8)), cfg);
  REQUIRE(trace.terminal_reason == "constant");
  REQUIRE(trace.rounds.size() == 1);
  REQUIRE(trace.rounds[0].accepted);
  REQUIRE(trace.rounds[0].d_before == 1);
  REQUIRE(trace.rounds[0].d_after == 0);
  REQUIRE(trace.rounds[0].ell_after == trace.ell0 - trace.b);
  // accepted round respects the E1 window
  long stars = trace.rounds[0].n_after;
  REQUIRE(stars * (1 << (trace.b + 1)) >= trace.rounds[0].n_before);
  REQUIRE(stars * (1 << (trace.b + 1)) <= 3 * trace.rounds[0].n_before);
}

TEST_CASE("restriction process: full run from the OR sampler") {
  LbdConfig cfg;
  cfg.seed = 42;
  cfg.preset = LbdConfig::Preset::Scaled;
  ProbPoly pp = or_base(12, 7);
  LbdTrace trace = run_restriction_process(pp, cfg);
  REQUIRE(trace.s_copies == 2);  // ceil(log2 log2 12)
  REQUIRE(trace.q0_at_zero == 0);
  REQUIRE(static_cast<int>(trace.rounds.size()) <= std::max(1, trace.d0));

  int prev_d = trace.d0;
  Rat eps = trace.eps0;
  int ell = trace.ell0;
  for (const LbdRound& r : trace.rounds) {
    if (!r.accepted) continue;
    REQUIRE(r.d_after < prev_d);
    prev_d = r.d_after;
    eps *= trace.goodness_factor;
    ell -= trace.b;
    REQUIRE(r.eps_after == eps);
    REQUIRE(r.ell_after == ell);
    Int lhs = Int(static_cast<long>(r.n_after)) << (trace.b + 1);
    REQUIRE(lhs >= r.n_before);
    REQUIRE(lhs <= 3 * Int(r.n_before));
  }
  REQUIRE((trace.terminal_reason == "constant" || trace.terminal_reason == "retries-exhausted" ||
           trace.terminal_reason == "ell-exhausted"));
}

TEST_CASE("restriction process: paper preset reports its vacuous regime honestly") {
  LbdConfig cfg;
  cfg.seed = 5;
  cfg.preset = LbdConfig::Preset::Paper;
  cfg.retry_limit = 10;
  ProbPoly pp = or_base(8, 3);
  LbdTrace trace = run_restriction_process(pp, cfg);
  REQUIRE(trace.preset == "paper");
  REQUIRE(trace.r_formula > 1000000);
  // with p ~ 1/r^2 every draw empties the star set or ell runs out
  REQUIRE((trace.terminal_reason == "retries-exhausted" ||
           trace.terminal_reason == "ell-exhausted"));
}
