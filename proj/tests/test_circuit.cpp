#include <catch2/catch_amalgamated.hpp>

#include "probpoly/circuit.hpp"

using namespace probpoly;

TEST_CASE("gate evaluation on named examples") {
  REQUIRE(or_n(4).eval_mask(0) == false);
  REQUIRE(or_n(4).eval_mask(0b0100) == true);
  REQUIRE(parity_n(3).eval({true, true, false}) == false);
  REQUIRE(parity_n(3).eval({true, true, true}) == true);
  // strict majority on 5 bits via the table
  TruthTable m5 = majority_table(5);
  REQUIRE(m5(0b00111) == true);
  REQUIRE(m5(0b00011) == false);
}

TEST_CASE("or_n accepts exactly the nonzero inputs") {
  for (int n = 1; n <= 12; ++n) {
    Circuit c = or_n(n);
    auto words = output_words(c);
    for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a) {
      bool bit = ((words[a >> 6] >> (a & 63)) & 1) != 0;
      REQUIRE(bit == (a != 0));
    }
  }
}

TEST_CASE("builder tables match reference predicates") {
  for (int n = 1; n <= 8; ++n) {
    TruthTable t_or = circuit_table(or_n(n));
    TruthTable t_and = circuit_table(and_n(n));
    TruthTable t_par = circuit_table(parity_n(n));
    for (std::uint64_t a = 0; a < t_or.size(); ++a) {
      REQUIRE(t_or(a) == or_table(n)(a));
      REQUIRE(t_and(a) == and_table(n)(a));
      REQUIRE(t_par(a) == parity_table(n)(a));
    }
  }
}

TEST_CASE("size and depth conventions") {
  Circuit c = or_n(5);
  REQUIRE(c.size() == 1);
  REQUIRE(c.depth() == 1);

  // NOT is free
  CircuitBuilder b(2);
  int x = b.input(0), y = b.input(1);
  int g = b.and_gate({b.not_gate(x), b.not_gate(y)});
  Circuit c2 = std::move(b).finish(g);
  REQUIRE(c2.depth() == 1);
  REQUIRE(c2.size() == 1);

  REQUIRE(parity_n(4).depth() == 4);  // two XOR levels, 2 layers each
}

TEST_CASE("accept_prob_uniform on named examples") {
  REQUIRE(accept_prob_uniform(or_n(2)) == rat_of(3, 4));
  REQUIRE(accept_prob_uniform(parity_n(4)) == rat_of(1, 2));
  REQUIRE(accept_prob_uniform(and_n(3)) == rat_of(1, 8));
}

TEST_CASE("splice rewires inputs to inner outputs") {
  // OR(AND(x0,x1), AND(x2,x3)) built by splicing
  Circuit outer = or_n(2);
  CircuitBuilder b1(4);
  int left_out = b1.and_gate({b1.input(0), b1.input(1)});
  Circuit left = std::move(b1).finish(left_out);
  CircuitBuilder b2(4);
  int right_out = b2.and_gate({b2.input(2), b2.input(3)});
  Circuit right = std::move(b2).finish(right_out);
  Circuit c = splice(outer, {left, right});
  REQUIRE(c.n_inputs() == 4);
  for (std::uint64_t a = 0; a < 16; ++a) {
    bool expect = ((a & 3) == 3) || ((a >> 2) == 3);
    REQUIRE(c.eval_mask(a) == expect);
  }
}

TEST_CASE("approx majority satisfies the definition at small ell") {
  for (int ell : {1, 2, 3, 5, 8, 10, 12}) {
    ApproxMajority am = approx_majority(ell, rat_of(1, 4), rat_of(2, 5), 7);
    REQUIRE(am.exhaustive_verified);
    REQUIRE(!approx_majority_violation(am.circuit, rat_of(1, 4), rat_of(2, 5)));
    REQUIRE(am.circuit.depth() <= 3);
    // recorded polynomial size bound: gates <= 200 * ell^3
    REQUIRE(am.circuit.size() <= 200 * ell * ell * ell);
  }
}

TEST_CASE("approx majority forced values at ell=8") {
  ApproxMajority am = approx_majority(8, rat_of(1, 4), rat_of(2, 5), 99);
  // weight 2 <= alpha*8 -> 0; weight 4 >= ceil(2/5 * 8) -> 1
  REQUIRE(am.circuit.eval_mask(0b00000011) == false);
  REQUIRE(am.circuit.eval_mask(0b00001111) == true);
  REQUIRE(am.weight_zero_max == 2);
  REQUIRE(am.weight_one_min == 4);
}

TEST_CASE("or_n is an (n, 0, 1/n)-approximate majority") {
  for (int n : {2, 5, 9}) {
    REQUIRE(!approx_majority_violation(or_n(n), Rat(0), rat_of(1, n)));
  }
}

TEST_CASE("approx majority threshold fallback beyond the exhaustive cap") {
  ApproxMajority am = approx_majority(10, rat_of(1, 4), rat_of(2, 5), 3,
                                      /*exhaustive_cap=*/8);
  REQUIRE(!am.exhaustive_verified);
  REQUIRE(am.construction == "threshold-fallback");
  REQUIRE(!approx_majority_violation(am.circuit, rat_of(1, 4), rat_of(2, 5)));
  REQUIRE(am.circuit.depth() == 2);
}

TEST_CASE("circuit validation rejects malformed wiring") {
  REQUIRE_THROWS_AS(Circuit(1, {{GateOp::And, {0}}}, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(Circuit(1, {{GateOp::In, {3}}}, 0), std::invalid_argument);
}
