#pragma once

// JSON and CSV interchange. Formats are stable and byte-deterministic: keys
// are emitted in sorted order, rationals as exact "num/den" strings, and
// files are written atomically (temp + rename) so reruns with the same seed
// produce byte-identical artifacts.

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "probpoly/circuit.hpp"
#include "probpoly/kwise.hpp"
#include "probpoly/lb_lab.hpp"
#include "probpoly/polynomial.hpp"
#include "probpoly/ppw.hpp"
#include "probpoly/prob_poly.hpp"

namespace probpoly {

using json = nlohmann::json;

// ---- polynomials ----

inline json poly_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json t;
    t["vars"] = m.vars;
    t["coef"] = rat_to_string(c);
    terms.push_back(std::move(t));
  }
  json out;
  out["universe"] = p.universe();
  out["formal_degree"] = p.formal_degree();
  out["terms"] = std::move(terms);
  return out;
}

inline Polynomial poly_from_json(const json& j) {
  std::vector<Var> uni = j.at("universe").get<std::vector<Var>>();
  TermMap terms;
  for (const auto& t : j.at("terms")) {
    Monomial m(t.at("vars").get<std::vector<Var>>());
    terms[m] = rat_from_string(t.at("coef").get<std::string>());
  }
  return Polynomial(std::move(uni), std::move(terms), j.at("formal_degree").get<int>());
}

// FNV-1a over the canonical term string; used when a trace polynomial is too
// large to inline
inline std::string poly_hash(const Polynomial& p) {
  std::string repr = std::to_string(p.formal_degree()) + "|";
  for (Var v : p.universe()) repr += std::to_string(v) + ",";
  repr += "|";
  for (const auto& [m, c] : p.terms()) {
    for (Var v : m.vars) repr += std::to_string(v) + ".";
    repr += ":" + rat_to_string(c) + ";";
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : repr) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

// ---- circuits ----

inline json circuit_to_json(const Circuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates()) {
    json jg;
    switch (g.op) {
      case GateOp::In: jg["op"] = "IN"; break;
      case GateOp::Not: jg["op"] = "NOT"; break;
      case GateOp::And: jg["op"] = "AND"; break;
      case GateOp::Or: jg["op"] = "OR"; break;
    }
    jg["args"] = g.args;
    gates.push_back(std::move(jg));
  }
  json out;
  out["n"] = c.n_inputs();
  out["gates"] = std::move(gates);
  out["out"] = c.output();
  return out;
}

inline Circuit circuit_from_json(const json& j) {
  std::vector<Gate> gates;
  for (const auto& jg : j.at("gates")) {
    const std::string op = jg.at("op").get<std::string>();
    Gate g;
    if (op == "IN") g.op = GateOp::In;
    else if (op == "NOT") g.op = GateOp::Not;
    else if (op == "AND") g.op = GateOp::And;
    else if (op == "OR") g.op = GateOp::Or;
    else throw std::invalid_argument("circuit_from_json: unknown op '" + op + "'");
    g.args = jg.at("args").get<std::vector<int>>();
    gates.push_back(std::move(g));
  }
  return Circuit(j.at("n").get<int>(), std::move(gates), j.at("out").get<int>());
}

// ---- certificates and experiment outputs ----

inline json certificate_json(const ProbPoly& pp) {
  json out;
  out["kind"] = pp.kind;
  out["n"] = pp.n;
  out["eps_claim"] = rat_to_string(pp.eps_claim);
  out["degree_bound"] = pp.degree_bound;
  out["linf_bound"] = pp.linf_bound ? rat_to_string(*pp.linf_bound) : "unbounded";
  out["one_sided_zero"] = pp.one_sided_zero;
  if (pp.ell > 0) out["ell"] = pp.ell;
  return out;
}

inline json certificate_json(const PPW& ppw) {
  json out;
  out["kind"] = ppw.kind;
  out["n"] = ppw.n;
  out["eps_claim"] = rat_to_string(ppw.eps_claim);
  out["degree_bound"] = ppw.degree_bound;
  out["linf_bound"] = ppw.linf_bound ? rat_to_string(*ppw.linf_bound) : "unbounded";
  out["witness_size_bound"] = ppw.witness_size_bound;
  out["witness_depth_bound"] = ppw.witness_depth_bound;
  if (ppw.ell > 0) out["ell"] = ppw.ell;
  return out;
}

// bitstring x0..x(n-1), left to right
inline std::string input_bits(std::uint64_t mask, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((mask >> i) & 1) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline std::string error_table_csv(const ErrorTable& t) {
  std::ostringstream os;
  os << "input,empirical_error,seeds_used\n";
  for (std::uint64_t a = 0; a < t.per_input.size(); ++a)
    os << input_bits(a, t.n) << "," << rat_to_string(t.per_input[a]) << ","
       << t.seeds_used << "\n";
  return os.str();
}

inline std::string fooling_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "k,gap_num,gap_den\n";
  for (const SweepRow& r : rows)
    os << r.k << "," << r.gap.get_num().get_str() << "," << r.gap.get_den().get_str()
       << "\n";
  return os.str();
}

inline json ppw_sample_json(std::uint64_t seed, const PPWSample& s) {
  json out;
  out["seed"] = seed;
  out["poly"] = poly_to_json(s.poly);
  out["witness"] = circuit_to_json(s.witness);
  return out;
}

// seed -> output string table, for small seed spaces
inline json family_table_json(const KWiseFamily& f,
                              std::uint64_t cap = std::uint64_t(1) << 16) {
  if (f.seed_count > cap)
    throw cap_error("family_table_json: seed space exceeds export cap",
                    static_cast<long long>(f.seed_count), static_cast<long long>(cap));
  json rows = json::array();
  for (std::uint64_t s = 0; s < f.seed_count; ++s)
    rows.push_back(input_bits(f.output(s), f.n));
  json out;
  out["name"] = f.name;
  out["n"] = f.n;
  out["k"] = f.k;
  out["seed_count"] = f.seed_count;
  out["outputs"] = std::move(rows);
  return out;
}

inline json design_to_json(const Design& d) {
  json out;
  out["m"] = d.m;
  out["r"] = d.r;
  out["l"] = d.ell;
  out["sets"] = d.sets;
  return out;
}

// ---- restriction traces ----

inline json err_estimate_json(const ErrEstimate& e) {
  json out;
  out["exact"] = e.exact;
  if (e.exact) {
    out["value"] = rat_to_string(e.exact_value);
  } else {
    out["estimate"] = e.estimate;
    out["sigma"] = e.sigma;
    out["samples"] = e.samples;
  }
  return out;
}

inline json trace_to_json(const LbdTrace& t, std::size_t max_poly_terms = 200) {
  json out;
  out["n0"] = t.n0;
  out["d0"] = t.d0;
  out["s_copies"] = t.s_copies;
  out["seed"] = t.seed;
  out["preset"] = t.preset;
  out["r_formula"] = t.r_formula.get_str();
  out["b_formula"] = t.b_formula;
  out["ell0_formula"] = t.ell0_formula;
  out["r_effective"] = t.r_effective.get_str();
  out["b"] = t.b;
  out["ell0"] = t.ell0;
  out["eps0"] = rat_to_string(t.eps0);
  out["goodness_factor"] = rat_to_string(t.goodness_factor);
  out["statistical"] = t.statistical;
  out["initial_goodness"] = err_estimate_json(t.initial_goodness);
  out["q0_at_zero"] = rat_to_string(t.q0_at_zero);
  out["q0"] = (t.q0.term_count() <= max_poly_terms) ? poly_to_json(t.q0)
                                                    : json(poly_hash(t.q0));

  json rounds = json::array();
  for (const LbdRound& r : t.rounds) {
    json jr;
    jr["round"] = r.round;
    jr["accepted"] = r.accepted;
    jr["n_before"] = r.n_before;
    jr["n_after"] = r.n_after;
    jr["d_before"] = r.d_before;
    jr["d_after"] = r.d_after;
    jr["ell_after"] = r.ell_after;
    jr["eps_after"] = r.accepted ? rat_to_string(r.eps_after) : "";
    jr["retries"] = r.retries;
    jr["e1"] = r.e1_count;
    jr["e2"] = r.e2_count;
    jr["e3"] = r.e3_count;
    jr["disjoint_terms"] = r.disjoint_count;
    jr["s_vars"] = r.s_vars;
    jr["stars"] = r.stars;
    jr["e3_statistical"] = r.e3_statistical;
    jr["e3_vacuous"] = r.e3_vacuous;
    if (r.accepted)
      jr["poly"] = (r.poly_after.term_count() <= max_poly_terms)
                       ? poly_to_json(r.poly_after)
                       : json(poly_hash(r.poly_after));
    rounds.push_back(std::move(jr));
  }
  out["rounds"] = std::move(rounds);

  out["terminal_reason"] = t.terminal_reason;
  if (!t.dominant_event.empty()) out["dominant_event"] = t.dominant_event;
  if (t.terminal_reason == "constant")
    out["terminal_constant"] = rat_to_string(t.terminal_constant);
  out["terminal_err1"] = err_estimate_json(t.terminal_err1);
  out["goodness_budget"] = rat_to_string(t.goodness_budget);
  out["contradiction"] = t.contradiction;
  return out;
}

inline std::string trace_csv(const LbdTrace& t) {
  std::ostringstream os;
  os << "round,n_i,d_i,ell_i,eps_i_num,eps_i_den,retries\n";
  os << 0 << "," << t.n0 << "," << t.d0 << "," << t.ell0 << ","
     << t.eps0.get_num().get_str() << "," << t.eps0.get_den().get_str() << ",0\n";
  for (const LbdRound& r : t.rounds) {
    if (!r.accepted) continue;
    os << r.round << "," << r.n_after << "," << r.d_after << "," << r.ell_after << ","
       << r.eps_after.get_num().get_str() << "," << r.eps_after.get_den().get_str() << ","
       << r.retries << "\n";
  }
  return os.str();
}

// ---- files ----

inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_file_atomic: cannot open " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write_file_atomic: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("write_file_atomic: rename failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace probpoly
