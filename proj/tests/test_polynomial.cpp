#include <catch2/catch_amalgamated.hpp>

#include "probpoly/polynomial.hpp"
#include "probpoly/rng.hpp"
#include "probpoly/truth_table.hpp"

using namespace probpoly;

namespace {

Polynomial or2() {
  // x0 + x1 - x0*x1
  TermMap t;
  t[Monomial::single(0)] = 1;
  t[Monomial::single(1)] = 1;
  t[Monomial({0, 1})] = -1;
  return Polynomial({0, 1}, std::move(t), 2);
}

Polynomial maj3() { return multilinear_extension(majority_table(3)); }

Rat random_rat(Rng& rng) {
  long num = static_cast<long>(rng.below(21)) - 10;
  long den = static_cast<long>(rng.below(9)) + 1;
  return rat_of(num, den);
}

TruthTable random_table(int n, Rng& rng) {
  std::vector<bool> bits(std::size_t(1) << n);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng.next_bits(1) != 0;
  return TruthTable(n, std::move(bits));
}

Polynomial random_sparse_poly(int n, int max_terms, Rng& rng) {
  std::vector<Var> uni;
  for (int i = 0; i < n; ++i) uni.push_back(i);
  TermMap terms;
  const int nterms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int t = 0; t < nterms; ++t) {
    Monomial m;
    for (int v = 0; v < n; ++v)
      if (rng.next_bits(1)) m.vars.push_back(v);
    Rat c = random_rat(rng);
    if (c == 0) continue;
    terms[m] += c;
    if (terms[m] == 0) terms.erase(m);
  }
  return Polynomial(uni, std::move(terms));
}

}  // namespace

TEST_CASE("evaluate on named examples") {
  Polynomial p = or2();
  REQUIRE(p.evaluate({{0, Rat(1)}, {1, Rat(0)}}) == 1);
  REQUIRE(p.evaluate({{0, rat_of(1, 2)}, {1, rat_of(1, 2)}}) == rat_of(3, 4));

  Polynomial m = Polynomial({0, 1, 2}, [] {
    TermMap t;
    t[Monomial({0, 1, 2})] = 1;
    return t;
  }());
  REQUIRE(m.evaluate({{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}}) == 1);

  REQUIRE_THROWS_AS(p.evaluate({{0, Rat(1)}}), std::invalid_argument);
}

TEST_CASE("restrict on named examples") {
  Polynomial p = or2();
  Polynomial r1 = p.restricted({{0, Rat(1)}});
  REQUIRE(r1.is_formally_constant(1));
  REQUIRE(r1.universe() == std::vector<Var>{1});

  Polynomial r0 = p.restricted({{1, Rat(0)}});
  REQUIRE(r0.terms().size() == 1);
  REQUIRE(r0.coefficient(Monomial::single(0)) == 1);

  Polynomial m = maj3();
  Polynomial rm = m.restricted({{0, Rat(1)}, {1, Rat(1)}});
  REQUIRE(rm.is_formally_constant(1));

  REQUIRE_THROWS_AS(p.restricted({{7, Rat(0)}}), std::invalid_argument);
}

TEST_CASE("add and multiply") {
  Polynomial x0 = Polynomial::variable(0);
  Polynomial sq = multiply(x0, x0);
  REQUIRE(sq.terms().size() == 1);
  REQUIRE(sq.coefficient(Monomial::single(0)) == 1);
  REQUIRE(sq.formal_degree() == 2);

  REQUIRE(add(x0, neg(x0)).is_zero());

  Polynomial x1 = Polynomial::variable(1);
  Polynomial prod = multiply(add(x0, x1), sub(x0, x1));
  REQUIRE(prod.coefficient(Monomial::single(0)) == 1);
  REQUIRE(prod.coefficient(Monomial::single(1)) == -1);
  REQUIRE(prod.terms().size() == 2);
  REQUIRE(prod.formal_degree() == 2);
}

TEST_CASE("compose on named examples") {
  Polynomial p = or2();
  Polynomial y0 = Polynomial::variable(0);
  REQUIRE(same_terms(compose(y0, {p}), p));

  Polynomial q = multiply(Polynomial::variable(0, {0, 1}), Polynomial::variable(1, {0, 1}));
  Polynomial x0 = Polynomial::variable(0);
  Polynomial c = compose(q, {x0, x0});
  REQUIRE(c.terms().size() == 1);
  REQUIRE(c.coefficient(Monomial::single(0)) == 1);
  REQUIRE(c.formal_degree() == 2);

  Polynomial one = Polynomial::constant(1, {2});
  Polynomial x2 = Polynomial::variable(2);
  REQUIRE(compose(maj3(), {one, one, x2}).is_formally_constant(1));

  REQUIRE_THROWS_AS(compose(maj3(), {x0}), std::invalid_argument);
}

TEST_CASE("multilinear extension of named functions") {
  Polynomial p = multilinear_extension(or_table(2));
  REQUIRE(same_terms(p, or2()));

  REQUIRE(multilinear_extension(TruthTable(2, {false, false, false, false})).is_zero());

  Polynomial m = maj3();
  REQUIRE(m.coefficient(Monomial({0, 1})) == 1);
  REQUIRE(m.coefficient(Monomial({0, 2})) == 1);
  REQUIRE(m.coefficient(Monomial({1, 2})) == 1);
  REQUIRE(m.coefficient(Monomial({0, 1, 2})) == -2);
  REQUIRE(m.terms().size() == 4);
}

TEST_CASE("weight, linf, degree") {
  REQUIRE(weight(maj3()) == 5);
  REQUIRE(linf_norm_exact(or2()) == 1);
  REQUIRE(Polynomial::zero().degree() == 0);
  REQUIRE(Polynomial::constant(7).degree() == 0);

  Rng rng(1);
  Polynomial big = random_sparse_poly(4, 6, rng);
  REQUIRE_THROWS_AS(linf_norm_exact(big, 3), cap_error);
  try {
    linf_norm_exact(big, 3);
  } catch (const cap_error& e) {
    REQUIRE(e.required == 4);
    REQUIRE(e.allowed == 3);
  }
}

TEST_CASE("extension agrees with the table on the whole cube") {
  Rng rng(42);
  for (int rep = 0; rep < 40; ++rep) {
    int n = 1 + static_cast<int>(rng.below(10));
    TruthTable f = random_table(n, rng);
    Polynomial p = multilinear_extension(f);
    auto vals = cube_values(p);
    for (std::uint64_t a = 0; a < f.size(); ++a)
      REQUIRE(vals[a] == (f(a) ? 1 : 0));
  }
}

TEST_CASE("uniqueness: perturbing one coefficient breaks cube agreement") {
  Rng rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 1 + static_cast<int>(rng.below(6));
    Polynomial p = multilinear_extension(random_table(n, rng));
    TermMap t = p.terms();
    // perturb or introduce one coefficient
    Monomial target;
    for (int v = 0; v < n; ++v)
      if (rng.next_bits(1)) target.vars.push_back(v);
    t[target] += rat_of(1, 3);
    Polynomial q(p.universe(), std::move(t));
    auto pv = cube_values(p);
    auto qv = cube_values(q);
    bool differ = false;
    for (std::size_t i = 0; i < pv.size(); ++i)
      if (pv[i] != qv[i]) { differ = true; break; }
    REQUIRE(differ);
  }
}

TEST_CASE("restrict commutes with evaluate at random rational points") {
  Rng rng(44);
  for (int rep = 0; rep < 100; ++rep) {
    int n = 2 + static_cast<int>(rng.below(5));
    Polynomial p = random_sparse_poly(n, 8, rng);
    Assignment sigma, rest, full;
    for (Var v : p.universe()) {
      Rat val = random_rat(rng);
      full[v] = val;
      if (rng.next_bits(1)) sigma[v] = val; else rest[v] = val;
    }
    REQUIRE(p.restricted(sigma).evaluate(rest) == p.evaluate(full));
  }
}

TEST_CASE("compose/evaluate commute") {
  Rng rng(45);
  SECTION("variable-disjoint inner polynomials, arbitrary rational points") {
    // no multilinear reduction can fire, so the identity holds off the cube
    for (int rep = 0; rep < 40; ++rep) {
      int l = 1 + static_cast<int>(rng.below(3));
      std::vector<Var> outer_uni;
      for (int i = 0; i < l; ++i) outer_uni.push_back(i);
      Polynomial q = random_sparse_poly(l, 4, rng);
      std::vector<Polynomial> inner;
      Assignment point;
      for (int i = 0; i < l; ++i) {
        // inner_i lives on variables {10i .. 10i+2}
        TermMap t;
        for (int tcount = 0; tcount < 3; ++tcount) {
          Monomial m;
          for (int v = 0; v < 3; ++v)
            if (rng.next_bits(1)) m.vars.push_back(10 * i + v);
          t[m] += random_rat(rng);
          if (t[m] == 0) t.erase(m);
        }
        std::vector<Var> uni = {10 * i, 10 * i + 1, 10 * i + 2};
        inner.emplace_back(uni, std::move(t));
        for (Var v : uni) point[v] = random_rat(rng);
      }
      Polynomial r = compose(q, inner);
      Assignment point_r = point;
      for (Var v : r.universe())
        if (!point_r.count(v)) point_r[v] = 0;
      Assignment inner_vals;
      for (int i = 0; i < l; ++i) inner_vals[i] = inner[static_cast<std::size_t>(i)].evaluate(point);
      REQUIRE(r.evaluate(point_r) == q.evaluate(inner_vals));
    }
  }
  SECTION("shared-universe inner polynomials, Boolean points") {
    // reduction is value-preserving on the cube even when inner values are
    // arbitrary rationals
    for (int rep = 0; rep < 40; ++rep) {
      int l = 1 + static_cast<int>(rng.below(3));
      int n = 2 + static_cast<int>(rng.below(3));
      Polynomial q = random_sparse_poly(l, 4, rng);
      std::vector<Polynomial> inner;
      for (int i = 0; i < l; ++i) inner.push_back(random_sparse_poly(n, 5, rng));
      Polynomial r = compose(q, inner);
      for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a) {
        Assignment inner_vals;
        for (int i = 0; i < l; ++i)
          inner_vals[i] = inner[static_cast<std::size_t>(i)].evaluate_mask(a);
        REQUIRE(r.evaluate_mask(a) == q.evaluate(inner_vals));
      }
    }
  }
}

TEST_CASE("formal degree is additive under multiply; stored degree never exceeds it") {
  Rng rng(46);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 1 + static_cast<int>(rng.below(5));
    Polynomial p = random_sparse_poly(n, 5, rng);
    Polynomial q = random_sparse_poly(n, 5, rng);
    Polynomial r = multiply(p, q);
    REQUIRE(r.formal_degree() == p.formal_degree() + q.formal_degree());
    REQUIRE(r.degree() <= r.formal_degree());
    REQUIRE(p.degree() <= p.formal_degree());
  }
}

TEST_CASE("linf norm is at most the weight") {
  Rng rng(47);
  for (int rep = 0; rep < 50; ++rep) {
    Polynomial p = random_sparse_poly(1 + static_cast<int>(rng.below(8)), 10, rng);
    REQUIRE(linf_norm_exact(p) <= weight(p));
  }
}

TEST_CASE("cube_values and interpolate_cube are inverse") {
  Rng rng(48);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 1 + static_cast<int>(rng.below(7));
    Polynomial p = random_sparse_poly(n, 10, rng);
    Polynomial q = interpolate_cube(p.universe(), cube_values(p), p.formal_degree());
    REQUIRE(same_terms(p, q));
  }
}
