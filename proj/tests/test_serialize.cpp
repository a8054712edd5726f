#include <catch2/catch_amalgamated.hpp>

#include "probpoly/serialize.hpp"

using namespace probpoly;

TEST_CASE("polynomial JSON round-trips bit-exactly") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 1 + static_cast<int>(rng.below(8));
    TermMap t;
    for (int k = 0; k < 6; ++k) {
      Monomial m;
      for (int v = 0; v < n; ++v)
        if (rng.next_bits(1)) m.vars.push_back(v);
      t[m] += rat_of(static_cast<long>(rng.below(2001)) - 1000,
                     static_cast<long>(rng.below(97)) + 1);
      if (t[m] == 0) t.erase(m);
    }
    std::vector<Var> uni;
    for (int v = 0; v < n; ++v) uni.push_back(v);
    Polynomial p(uni, std::move(t), n + 2);

    json j = poly_to_json(p);
    Polynomial q = poly_from_json(j);
    REQUIRE(p == q);
    REQUIRE(poly_to_json(q).dump() == j.dump());
  }
}

TEST_CASE("polynomial JSON matches the documented schema") {
  Polynomial p = multilinear_extension(or_table(2));
  json j = poly_to_json(p);
  REQUIRE(j["universe"] == json::array({0, 1}));
  REQUIRE(j["formal_degree"] == 2);
  REQUIRE(j["terms"].size() == 3);
  // graded-lex term order: x0, x1, x0*x1
  REQUIRE(j["terms"][0]["vars"] == json::array({0}));
  REQUIRE(j["terms"][0]["coef"] == "1/1");
  REQUIRE(j["terms"][2]["vars"] == json::array({0, 1}));
  REQUIRE(j["terms"][2]["coef"] == "-1/1");
}

TEST_CASE("circuit JSON round-trips and evaluates identically") {
  for (const Circuit& c : {or_n(4), and_n(3), parity_n(5)}) {
    json j = circuit_to_json(c);
    Circuit d = circuit_from_json(j);
    REQUIRE(d.n_inputs() == c.n_inputs());
    REQUIRE(d.size() == c.size());
    REQUIRE(d.depth() == c.depth());
    for (std::uint64_t a = 0; a < (std::uint64_t(1) << c.n_inputs()); ++a)
      REQUIRE(d.eval_mask(a) == c.eval_mask(a));
    REQUIRE(circuit_to_json(d).dump() == j.dump());
  }
  REQUIRE_THROWS_AS(circuit_from_json(json::parse(R"({"n":1,"gates":[{"op":"XOR","args":[0]}],"out":0})")),
                    std::invalid_argument);
}

TEST_CASE("poly hash is stable and term-sensitive") {
  Polynomial p = multilinear_extension(majority_table(3));
  REQUIRE(poly_hash(p) == poly_hash(p));
  Polynomial q = add(p, Polynomial::constant(1, p.universe()));
  REQUIRE(poly_hash(p) != poly_hash(q));
}

TEST_CASE("error table and fooling CSV shapes") {
  ErrorTable t;
  t.n = 2;
  t.seeds_used = 10;
  t.per_input = {Rat(0), rat_of(1, 10), rat_of(3, 10), Rat(0)};
  std::string csv = error_table_csv(t);
  REQUIRE(csv == "input,empirical_error,seeds_used\n"
                 "00,0/1,10\n10,1/10,10\n01,3/10,10\n11,0/1,10\n");

  std::vector<SweepRow> rows = {{1, rat_of(1, 16)}, {2, Rat(0)}};
  REQUIRE(fooling_csv(rows) == "k,gap_num,gap_den\n1,1,16\n2,0,1\n");
}

TEST_CASE("trace JSON carries rounds and the contradiction report") {
  LbdConfig cfg;
  cfg.seed = 12;
  std::vector<Var> X;
  for (int v = 0; v < 8; ++v) X.push_back(v);
  LbdTrace trace = run_restriction_process_from(Polynomial::variable(0, X), cfg);
  json j = trace_to_json(trace);
  REQUIRE(j["preset"] == "scaled");
  REQUIRE(j["rounds"].size() == trace.rounds.size());
  REQUIRE(j.contains("contradiction"));
  REQUIRE(j["q0_at_zero"] == "0/1");

  std::string csv = trace_csv(trace);
  REQUIRE(csv.find("round,n_i,d_i,ell_i,eps_i_num,eps_i_den,retries\n") == 0);
}

TEST_CASE("atomic writes round-trip file content") {
  const std::string path = "/tmp/probpoly_serialize_test.json";
  write_file_atomic(path, "{\"x\": 1}\n");
  REQUIRE(read_file(path) == "{\"x\": 1}\n");
  write_file_atomic(path, "replaced");
  REQUIRE(read_file(path) == "replaced");
  std::remove(path.c_str());
}

TEST_CASE("family export table") {
  json j = family_table_json(even_parity_family(3));
  REQUIRE(j["outputs"].size() == 4);
  // seed 1 -> bits 100 with parity bit 1 at the top: "101"
  REQUIRE(j["outputs"][1] == "101");
}
