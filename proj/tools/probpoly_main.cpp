// probpoly: experiments on probabilistic polynomial approximations of
// bounded-depth circuits over exact rationals.
//
// Every run is a pure function of its flags; all randomness flows from
// --seed through counter-derived child streams, so identical invocations
// produce byte-identical artifacts. Numbers in artifacts are exact
// fractions ("num/den") wherever the computation is exact; floating-point
// values appear only in columns labeled estimate/sigma/bound.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "probpoly/probpoly.hpp"

using namespace probpoly;

namespace {

struct Caps {
  int enum_cap = 24;
  int exact_err_cap = 12;
  std::uint64_t seed_space_cap = std::uint64_t(1) << 24;
};

Caps caps_from_env() {
  Caps c;
  if (const char* s = std::getenv("PROBPOLY_ENUM_CAP")) c.enum_cap = std::atoi(s);
  if (const char* s = std::getenv("PROBPOLY_EXACT_ERR_CAP")) c.exact_err_cap = std::atoi(s);
  if (const char* s = std::getenv("PROBPOLY_SEED_SPACE_CAP"))
    c.seed_space_cap = std::strtoull(s, nullptr, 10);
  return c;
}

json load_json(const std::string& path) { return json::parse(read_file(path)); }

void emit(const std::string& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

int selftest_fail(const std::string& what) {
  std::cout << "FAIL " << what << "\n";
  return 2;
}

// exit code 2 carries validation failures (counterexamples, bound misses);
// usage problems exit 1 via CLI11
constexpr int kValidationFailure = 2;

int run_pseudomaj(int ell, bool verify, const std::string& poly_path,
                  const std::string& out) {
  if (!poly_path.empty()) {
    Polynomial q = poly_from_json(load_json(poly_path));
    auto check = verify_pseudo_majority(q, ell);
    if (!check.ok) {
      std::cout << "pseudomaj: NOT a pseudo-majority; violating S={";
      for (std::size_t i = 0; i < check.subset.size(); ++i)
        std::cout << (i ? "," : "") << check.subset[i];
      std::cout << "} b=" << check.bit << "\n";
      return kValidationFailure;
    }
    std::cout << "pseudomaj: verified ell=" << ell << " over " << poly_path << "\n";
    return 0;
  }
  PseudoMajority pm = build_pseudo_majority(ell);
  if (verify && !pm.verified) {
    auto check = verify_pseudo_majority(pm.poly, ell);
    if (!check.ok) return kValidationFailure;
    pm.verified = true;
  }
  json j = poly_to_json(pm.poly);
  j["ell"] = pm.ell;
  j["r"] = pm.r;
  j["verified"] = pm.verified;
  emit(out, j);
  std::cout << "pseudomaj: ell=" << ell << " r=" << pm.r << " terms="
            << pm.poly.term_count() << " weight=" << rat_to_string(weight(pm.poly))
            << (pm.verified ? " verified" : " unverified") << " -> " << out << "\n";
  return 0;
}

int run_or_poly(int n, int t, long long seeds, std::uint64_t seed,
                const std::string& out_csv, const std::string& out_cert, const Caps& caps) {
  ProbPoly pp = or_base(n, derive_seed(seed, {0x6f72ULL}));
  if (t > 1) pp = amplify_onesided_or(pp, t);
  ErrorTable table = error_exact(pp, or_table(n), seed_range(seed, seeds), caps.enum_cap);
  write_file_atomic(out_csv, error_table_csv(table));
  emit(out_cert, certificate_json(pp));
  std::cout << "or-poly: n=" << n << " t=" << t << " max_err="
            << rat_to_string(table.max_error()) << " claim=" << rat_to_string(pp.eps_claim)
            << " -> " << out_csv << "\n";
  return 0;
}

int run_amplify(int n, const Rat& delta, const Rat& eps, int t, double const_a,
                long long seeds, std::uint64_t seed, const std::string& out_csv,
                const std::string& out_cert, const Caps& caps) {
  ProbPoly base = or_base(n, derive_seed(seed, {0x616dULL}));
  if (t <= 0) {  // smallest t with (3/4)^t <= 1/2 - delta
    t = 1;
    while (rat_pow(rat_of(3, 4), static_cast<unsigned long>(t)) > rat_of(1, 2) - delta) ++t;
  }
  ProbPoly pp = amplify_onesided_or(base, t);
  AmplifyOptions opts;
  opts.const_a = const_a;
  ProbPoly amp = amplify_general(pp, delta, eps, opts);
  ErrorTable table = error_exact(amp, or_table(n), seed_range(seed, seeds), caps.enum_cap);
  write_file_atomic(out_csv, error_table_csv(table));
  json cert = certificate_json(amp);
  cert["base_t"] = t;
  cert["const_a"] = const_a;
  emit(out_cert, cert);
  Rat bound = eps;  // empirical target; Chernoff margin applied by callers
  std::cout << "amplify: n=" << n << " ell=" << amp.ell << " max_err="
            << rat_to_string(table.max_error()) << " target=" << rat_to_string(bound)
            << " -> " << out_csv << "\n";
  return rat_to_double(table.max_error()) <=
                 rat_to_double(eps) + 3.0 * std::sqrt(rat_to_double(eps) / double(seeds))
             ? 0
             : kValidationFailure;
}

int run_compile(const std::string& circuit_path, const Rat& eps, const std::string& route,
                double const_a, long long seeds, std::uint64_t seed,
                const std::string& out_csv, const std::string& out_cert, const Caps& caps) {
  Circuit c = circuit_from_json(load_json(circuit_path));
  CompileOptions opts;
  opts.amplified_route = (route == "amplified");
  opts.amplify.const_a = const_a;
  ProbPoly pp = circuit_to_probpoly(c, eps, derive_seed(seed, {0x636dULL}), opts);
  ErrorTable table = error_exact(pp, circuit_table(c), seed_range(seed, seeds), caps.enum_cap);
  write_file_atomic(out_csv, error_table_csv(table));
  json cert = certificate_json(pp);
  cert["route"] = route;
  cert["circuit_size"] = c.size();
  cert["circuit_depth"] = c.depth();
  emit(out_cert, cert);
  std::cout << "compile: size=" << c.size() << " depth=" << c.depth() << " route=" << route
            << " max_err=" << rat_to_string(table.max_error()) << " -> " << out_csv << "\n";
  return 0;
}

int run_ppw(int n, const std::string& circuit_path, const Rat& eps, double const_a,
            long long samples, std::uint64_t seed, const std::string& out_csv,
            const std::string& out_export, const Caps& caps) {
  Circuit target = circuit_path.empty() ? or_n(n) : circuit_from_json(load_json(circuit_path));
  PPW base = circuit_path.empty() ? ppw_base_or(target.n_inputs(), derive_seed(seed, {0x7070ULL}))
                                  : ppw_base_circuit(target, derive_seed(seed, {0x7070ULL}));
  PpwAmplifyOptions opts;
  opts.const_a = const_a;
  PPW amp = ppw_amplify(base, eps, derive_seed(seed, {0x7071ULL}), opts);

  auto seeds = seed_range(seed, samples);
  long long sound = 0;
  for (long long i = 0; i < std::min<long long>(samples, 200); ++i) {
    PPWSample s = amp.sample(seeds[static_cast<std::size_t>(i)]);
    auto check = verify_witness_soundness(s, target, caps.exact_err_cap);
    if (!check.ok) {
      std::cout << "ppw: witness soundness violated at input "
                << input_bits(check.counterexample, target.n_inputs()) << "\n";
      return kValidationFailure;
    }
    ++sound;
  }
  // per-input fire rates across the full seed list
  std::ostringstream csv;
  csv << "input,fire_rate,seeds_used\n";
  Rat worst = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << target.n_inputs()); ++a) {
    long fired = 0;
    for (std::uint64_t s : seeds)
      if (amp.witness_fires(s, a)) ++fired;
    Rat rate(Int(fired), Int(static_cast<long>(seeds.size())));
    rate.canonicalize();
    if (rate > worst) worst = rate;
    csv << input_bits(a, target.n_inputs()) << "," << rat_to_string(rate) << ","
        << seeds.size() << "\n";
  }
  write_file_atomic(out_csv, csv.str());
  if (!out_export.empty()) emit(out_export, ppw_sample_json(seeds[0], amp.sample(seeds[0])));
  json cert = certificate_json(amp);
  std::cout << "ppw: ell=" << amp.ell << " sound_samples=" << sound << " max_fire_rate="
            << rat_to_string(worst) << " claim=" << rat_to_string(amp.eps_claim) << " -> "
            << out_csv << "\n";
  return 0;
}

int run_fool(const std::string& circuit_path, int k, bool sweep, const std::string& family,
             const std::string& out, const Caps& caps) {
  Circuit c = circuit_from_json(load_json(circuit_path));
  const int n = c.n_inputs();
  std::vector<SweepRow> rows;
  if (family == "even-parity") {
    KWiseFamily f = even_parity_family(n);
    rows.push_back({f.k, fooling_gap_exact(c, f, caps.seed_space_cap)});
  } else if (family == "uniform") {
    KWiseFamily f = uniform_family(n);
    rows.push_back({f.k, fooling_gap_exact(c, f, caps.seed_space_cap)});
  } else if (sweep) {
    rows = fooling_sweep(c, 1, n, caps.seed_space_cap);
  } else {
    rows.push_back({k, fooling_gap_exact(c, build_kwise(n, k, caps.seed_space_cap),
                                         caps.seed_space_cap)});
  }
  write_file_atomic(out, fooling_csv(rows));
  std::cout << "fool: " << rows.size() << " row(s), last gap = "
            << rat_to_string(rows.back().gap) << " -> " << out << "\n";
  return 0;
}

int run_err_profile(const std::string& poly_path, int levels, std::uint64_t seed,
                    long long mc_samples, const std::string& out, const Caps& caps) {
  Polynomial q = poly_from_json(load_json(poly_path));
  std::vector<Var> X = q.universe();
  std::ostringstream csv;
  csv << "i,exact,err_num,err_den,estimate,sigma\n";
  Rng rng = rng_at(seed, {0x657270ULL});
  for (int i = 1; i <= levels; ++i) {
    ErrEstimate e = err_level(q, X, i, caps.exact_err_cap, mc_samples, rng);
    if (e.exact)
      csv << i << ",1," << e.exact_value.get_num().get_str() << ","
          << e.exact_value.get_den().get_str() << ",,\n";
    else
      csv << i << ",0,,," << e.estimate << "," << e.sigma << "\n";
  }
  write_file_atomic(out, csv.str());
  std::cout << "err-profile: " << levels << " level(s) over |X|=" << X.size() << " -> "
            << out << "\n";
  return 0;
}

int run_restrict_id(const std::string& poly_path, int i, int b, const Caps& caps) {
  Polynomial q = poly_from_json(load_json(poly_path));
  auto check = verify_restriction_identity(q, q.universe(), i, b, caps.exact_err_cap);
  std::cout << "restrict-id: lhs=" << rat_to_string(check.lhs) << " rhs="
            << rat_to_string(check.rhs) << " equal=" << (check.equal ? "yes" : "no") << "\n";
  return check.equal ? 0 : kValidationFailure;
}

int run_anticonc(int m, const std::string& poly_path, long long trials, std::uint64_t seed,
                 double const_b, const std::string& out) {
  Polynomial q;
  if (!poly_path.empty()) {
    q = poly_from_json(load_json(poly_path));
  } else {
    TermMap t;
    std::vector<Var> uni;
    for (int j = 0; j < m; ++j) {
      t[Monomial({2 * j, 2 * j + 1})] = 1;
      uni.push_back(2 * j);
      uni.push_back(2 * j + 1);
    }
    q = Polynomial(uni, std::move(t));
  }
  AntiConcProbe p = anticoncentration_probe(q, trials, seed, const_b);
  std::ostringstream csv;
  csv << "degree,disjoint_terms,trials,zeros,estimate,sigma,reference_bound\n";
  csv << p.degree << "," << p.disjoint_count << "," << p.trials << "," << p.zeros << ","
      << p.estimate << "," << p.sigma << "," << p.reference_bound << "\n";
  write_file_atomic(out, csv.str());
  std::cout << "anticonc: d=" << p.degree << " r=" << p.disjoint_count << " Pr[q=0]~"
            << p.estimate << " (sigma " << p.sigma << ") bound=" << p.reference_bound
            << " -> " << out << "\n";
  return 0;
}

int run_lbd_sim(int n, std::uint64_t seed, const std::string& preset, int s_copies,
                int retries, const std::string& out_json, const std::string& out_csv,
                const Caps& caps) {
  LbdConfig cfg;
  cfg.seed = seed;
  cfg.preset = (preset == "paper") ? LbdConfig::Preset::Paper : LbdConfig::Preset::Scaled;
  cfg.s_copies = s_copies;
  cfg.retry_limit = retries;
  cfg.exact_err_cap = caps.exact_err_cap;
  ProbPoly pp = or_base(n, derive_seed(seed, {0x6c6264ULL}));
  LbdTrace trace = run_restriction_process(pp, cfg);
  emit(out_json, trace_to_json(trace));
  if (!out_csv.empty()) write_file_atomic(out_csv, trace_csv(trace));
  std::cout << "lbd-sim: n=" << n << " d0=" << trace.d0 << " rounds=" << trace.rounds.size()
            << " terminal=" << trace.terminal_reason
            << (trace.statistical ? " (statistical)" : "") << " -> " << out_json << "\n";
  return 0;
}

int run_design_check(int m, int r, int l, int s, const std::string& out) {
  Design d = greedy_design(m, r, l, s);
  bool inter_ok = design_intersections_ok(d);
  bool bound_ok = design_bound_check(d);
  if (!out.empty()) emit(out, design_to_json(d));
  std::cout << "design-check: m=" << m << " r=" << r << " l=" << l << " sets="
            << d.sets.size() << " intersections=" << (inter_ok ? "ok" : "VIOLATED")
            << " bound=" << (bound_ok ? "ok" : "VIOLATED") << "\n";
  return (inter_ok && bound_ok) ? 0 : kValidationFailure;
}

// ---- selftests: each subcommand can replay its module's small exhaustive
// invariants without touching the filesystem ----

int selftest_pseudomaj() {
  for (int ell = 1; ell <= 8; ++ell)
    if (!verify_pseudo_majority(build_pseudo_majority(ell).poly, ell).ok)
      return selftest_fail("pseudomaj ell=" + std::to_string(ell));
  std::cout << "PASS pseudomaj selftest\n";
  return 0;
}

int selftest_or_poly() {
  ProbPoly pp = or_base(6, 1);
  for (std::uint64_t s = 0; s < 500; ++s)
    if (pp.value_at(s, 0) != 0) return selftest_fail("or one-sidedness");
  for (std::uint64_t s = 0; s < 30; ++s) {
    Polynomial p = pp.sample(s);
    for (std::uint64_t a = 0; a < 64; ++a)
      if (p.evaluate_mask(a) != pp.value_at(s, a)) return selftest_fail("or oracle");
  }
  std::cout << "PASS or-poly selftest\n";
  return 0;
}

int selftest_amplify() {
  ProbPoly base = amplify_onesided_or(or_base(4, 2), 4);
  ProbPoly amp = amplify_general(base, rat_of(1, 10), rat_of(1, 8), {.const_a = 0.05});
  ErrorTable t = error_exact(amp, or_table(4), seed_range(3, 300));
  if (t.per_input[0] != 0) return selftest_fail("amplify one-sidedness");
  if (rat_to_double(t.max_error()) > 0.125 + 0.06) return selftest_fail("amplify error");
  std::cout << "PASS amplify selftest\n";
  return 0;
}

int selftest_compile() {
  CircuitBuilder b(4);
  int o1 = b.or_gate({b.input(0), b.input(1)});
  int o2 = b.or_gate({b.input(2), b.input(3)});
  Circuit c = std::move(b).finish(b.and_gate({o1, o2}));
  ProbPoly pp = circuit_to_probpoly(c, rat_of(1, 16), 4);
  ErrorTable t = error_exact(pp, circuit_table(c), seed_range(5, 300));
  if (rat_to_double(t.max_error()) > 0.0625 + 0.05) return selftest_fail("compile error");
  std::cout << "PASS compile selftest\n";
  return 0;
}

int selftest_ppw() {
  PPW base = ppw_base_or(6, 8);
  PPW amp = ppw_amplify(base, rat_of(1, 16), 9, {.const_a = 1.5});
  Circuit or6 = or_n(6);
  for (std::uint64_t s : seed_range(11, 30)) {
    PPWSample sample = amp.sample(s);
    if (!verify_witness_soundness(sample, or6).ok) return selftest_fail("ppw soundness");
  }
  std::cout << "PASS ppw selftest\n";
  return 0;
}

int selftest_fool() {
  if (fooling_gap_exact(parity_n(4), even_parity_family(4)) != rat_of(1, 2))
    return selftest_fail("fool parity gap");
  if (fooling_gap_exact(or_n(4), even_parity_family(4)) != rat_of(1, 16))
    return selftest_fail("fool or gap");
  for (int k = 1; k <= 4; ++k)
    if (!verify_kwise(build_kwise(6, k)).ok) return selftest_fail("fool kwise");
  std::cout << "PASS fool selftest\n";
  return 0;
}

int selftest_err_profile() {
  std::vector<Var> X = {0, 1};
  if (err_level_exact(Polynomial::variable(0, X), X, 2) != rat_of(3, 16))
    return selftest_fail("err-profile level");
  std::cout << "PASS err-profile selftest\n";
  return 0;
}

int selftest_restrict_id() {
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 2 + static_cast<int>(rng.below(5));
    std::vector<Var> X;
    for (int v = 0; v < n; ++v) X.push_back(v);
    TermMap t;
    for (int k = 0; k < 5; ++k) {
      Monomial m;
      for (int v = 0; v < n; ++v)
        if (rng.next_bits(1)) m.vars.push_back(v);
      t[m] += rat_of(static_cast<long>(rng.below(9)) - 4, 1);
      if (t[m] == 0) t.erase(m);
    }
    Polynomial q(X, std::move(t));
    if (!verify_restriction_identity(q, X, 1 + static_cast<int>(rng.below(3)),
                                     1 + static_cast<int>(rng.below(2)))
             .equal)
      return selftest_fail("restrict-id identity");
  }
  std::cout << "PASS restrict-id selftest\n";
  return 0;
}

int selftest_anticonc() {
  TermMap t;
  t[Monomial({0, 1})] = 1;
  t[Monomial({2, 3})] = 1;
  AntiConcProbe p = anticoncentration_probe(Polynomial({0, 1, 2, 3}, std::move(t)), 20000, 7);
  if (std::abs(p.estimate - 0.5625) > 3 * p.sigma + 1e-9)
    return selftest_fail("anticonc estimate");
  std::cout << "PASS anticonc selftest\n";
  return 0;
}

int selftest_lbd_sim() {
  LbdConfig cfg;
  cfg.seed = 17;
  LbdTrace trace = run_restriction_process(or_base(12, 5), cfg);
  int prev = trace.d0;
  for (const LbdRound& r : trace.rounds) {
    if (!r.accepted) continue;
    if (r.d_after >= prev) return selftest_fail("lbd-sim degree decrease");
    prev = r.d_after;
  }
  if (static_cast<int>(trace.rounds.size()) > std::max(1, trace.d0))
    return selftest_fail("lbd-sim round bound");
  std::cout << "PASS lbd-sim selftest\n";
  return 0;
}

int selftest_design_check() {
  Design d = greedy_design(12, 3, 1, 50);
  if (!design_intersections_ok(d) || !design_bound_check(d))
    return selftest_fail("design-check");
  std::cout << "PASS design-check selftest\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probpoly: exact probabilistic-polynomial experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed may follow the subcommand name
  Caps caps = caps_from_env();

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "master seed; all randomness derives from it");

  int exit_code = 0;
  bool selftest = false;

  // pseudomaj
  {
    auto* cmd = app.add_subcommand("pseudomaj", "build or verify a pseudo-majority");
    auto ell = std::make_shared<int>(3);
    auto verify = std::make_shared<bool>(false);
    auto poly_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--ell", *ell, "arity");
    cmd->add_flag("--verify", *verify, "run the full restriction sweep");
    cmd->add_option("--poly", *poly_path, "verify this polynomial file instead of building");
    cmd->add_option("--out", *out, "output polynomial JSON path");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, ell, verify, poly_path, out, st] {
      if (*st) { exit_code = selftest_pseudomaj(); return; }
      if (out->empty()) *out = "pseudomaj-ell" + std::to_string(*ell) + ".json";
      exit_code = run_pseudomaj(*ell, *verify, *poly_path, *out);
    });
  }
  // or-poly
  {
    auto* cmd = app.add_subcommand("or-poly", "one-sided OR construction and amplification");
    auto n = std::make_shared<int>(8);
    auto t = std::make_shared<int>(1);
    auto seeds = std::make_shared<long long>(1000);
    auto out_csv = std::make_shared<std::string>("or-poly.csv");
    auto out_cert = std::make_shared<std::string>("or-poly.cert.json");
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--n", *n, "variables");
    cmd->add_option("--t", *t, "one-sided repetitions");
    cmd->add_option("--seeds", *seeds, "Monte Carlo seeds");
    cmd->add_option("--out-csv", *out_csv, "per-input error CSV");
    cmd->add_option("--out-cert", *out_cert, "certificate JSON");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, n, t, seeds, out_csv, out_cert, st] {
      exit_code = *st ? selftest_or_poly()
                      : run_or_poly(*n, *t, *seeds, seed, *out_csv, *out_cert, caps);
    });
  }
  // amplify
  {
    auto* cmd = app.add_subcommand("amplify", "pseudo-majority error reduction on OR_n");
    auto n = std::make_shared<int>(6);
    auto delta = std::make_shared<std::string>("1/10");
    auto eps = std::make_shared<std::string>("1/64");
    auto t = std::make_shared<int>(0);
    auto const_a = std::make_shared<double>(0.03);
    auto seeds = std::make_shared<long long>(10000);
    auto out_csv = std::make_shared<std::string>("amplify.csv");
    auto out_cert = std::make_shared<std::string>("amplify.cert.json");
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--n", *n, "variables");
    cmd->add_option("--delta", *delta, "margin below 1/2, as num/den");
    cmd->add_option("--eps", *eps, "target error, as num/den");
    cmd->add_option("--t", *t, "base repetitions (0 = derive from delta)");
    cmd->add_option("--const-a", *const_a, "constant A in ell = ceil((A/delta^2) ln(1/eps))");
    cmd->add_option("--seeds", *seeds, "Monte Carlo seeds");
    cmd->add_option("--out-csv", *out_csv, "per-input error CSV");
    cmd->add_option("--out-cert", *out_cert, "certificate JSON");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, n, delta, eps, t, const_a, seeds, out_csv, out_cert, st] {
      exit_code = *st ? selftest_amplify()
                      : run_amplify(*n, rat_from_string(*delta), rat_from_string(*eps), *t,
                                    *const_a, *seeds, seed, *out_csv, *out_cert, caps);
    });
  }
  // compile
  {
    auto* cmd = app.add_subcommand("compile", "circuit to probabilistic polynomial");
    auto circuit = std::make_shared<std::string>();
    auto eps = std::make_shared<std::string>("1/16");
    auto route = std::make_shared<std::string>("naive");
    auto const_a = std::make_shared<double>(0.03);
    auto seeds = std::make_shared<long long>(1000);
    auto out_csv = std::make_shared<std::string>("compile.csv");
    auto out_cert = std::make_shared<std::string>("compile.cert.json");
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--circuit", *circuit, "circuit JSON path");
    cmd->add_option("--eps", *eps, "target error, as num/den");
    cmd->add_option("--route", *route, "naive | amplified")
        ->check(CLI::IsMember({"naive", "amplified"}));
    cmd->add_option("--const-a", *const_a, "A for the amplified route");
    cmd->add_option("--seeds", *seeds, "Monte Carlo seeds");
    cmd->add_option("--out-csv", *out_csv, "per-input error CSV");
    cmd->add_option("--out-cert", *out_cert, "certificate JSON");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, circuit, eps, route, const_a, seeds, out_csv, out_cert, st] {
      if (*st) { exit_code = selftest_compile(); return; }
      if (circuit->empty()) throw CLI::ValidationError("compile", "--circuit is required");
      exit_code = run_compile(*circuit, rat_from_string(*eps), *route, *const_a, *seeds,
                              seed, *out_csv, *out_cert, caps);
    });
  }
  // ppw
  {
    auto* cmd = app.add_subcommand("ppw", "witnessed probabilistic polynomials");
    auto n = std::make_shared<int>(6);
    auto circuit = std::make_shared<std::string>();
    auto eps = std::make_shared<std::string>("1/32");
    auto const_a = std::make_shared<double>(1.5);
    auto samples = std::make_shared<long long>(2000);
    auto out_csv = std::make_shared<std::string>("ppw.csv");
    auto out_export = std::make_shared<std::string>();
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--n", *n, "OR arity (ignored when --circuit is given)");
    cmd->add_option("--circuit", *circuit, "target circuit JSON");
    cmd->add_option("--eps", *eps, "target witness-failure bound, as num/den");
    cmd->add_option("--const-a", *const_a, "A in ell = ceil(A ln(1/eps))");
    cmd->add_option("--samples", *samples, "seeds for fire-rate measurement");
    cmd->add_option("--out-csv", *out_csv, "per-input fire-rate CSV");
    cmd->add_option("--export", *out_export, "export the first (poly, witness) pair");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, n, circuit, eps, const_a, samples, out_csv, out_export, st] {
      exit_code = *st ? selftest_ppw()
                      : run_ppw(*n, *circuit, rat_from_string(*eps), *const_a, *samples,
                                seed, *out_csv, *out_export, caps);
    });
  }
  // fool
  {
    auto* cmd = app.add_subcommand("fool", "exact fooling gaps against k-wise families");
    auto circuit = std::make_shared<std::string>();
    auto k = std::make_shared<int>(1);
    auto sweep = std::make_shared<bool>(false);
    auto family = std::make_shared<std::string>("polyeval");
    auto out = std::make_shared<std::string>("fool.csv");
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--circuit", *circuit, "circuit JSON path");
    cmd->add_option("--k", *k, "independence parameter");
    cmd->add_flag("--sweep", *sweep, "sweep k = 1..n");
    cmd->add_option("--family", *family, "polyeval | even-parity | uniform")
        ->check(CLI::IsMember({"polyeval", "even-parity", "uniform"}));
    cmd->add_option("--out", *out, "CSV output path");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, circuit, k, sweep, family, out, st] {
      if (*st) { exit_code = selftest_fool(); return; }
      if (circuit->empty()) throw CLI::ValidationError("fool", "--circuit is required");
      exit_code = run_fool(*circuit, *k, *sweep, *family, *out, caps);
    });
  }
  // err-profile
  {
    auto* cmd = app.add_subcommand("err-profile", "Err_i profile of a polynomial vs OR");
    auto poly = std::make_shared<std::string>();
    auto levels = std::make_shared<int>(4);
    auto mc = std::make_shared<long long>(4000);
    auto out = std::make_shared<std::string>("err-profile.csv");
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--poly", *poly, "polynomial JSON path");
    cmd->add_option("--levels", *levels, "levels i = 1..L");
    cmd->add_option("--mc-samples", *mc, "samples per level above the exact cap");
    cmd->add_option("--out", *out, "CSV output path");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, poly, levels, mc, out, st] {
      if (*st) { exit_code = selftest_err_profile(); return; }
      if (poly->empty()) throw CLI::ValidationError("err-profile", "--poly is required");
      exit_code = run_err_profile(*poly, *levels, seed, *mc, *out, caps);
    });
  }
  // restrict-id
  {
    auto* cmd = app.add_subcommand("restrict-id", "exact restriction averaging identity");
    auto poly = std::make_shared<std::string>();
    auto i = std::make_shared<int>(1);
    auto b = std::make_shared<int>(1);
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--poly", *poly, "polynomial JSON path");
    cmd->add_option("--i", *i, "level");
    cmd->add_option("--b", *b, "star exponent (p = 2^-b)");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, poly, i, b, st] {
      if (*st) { exit_code = selftest_restrict_id(); return; }
      if (poly->empty()) throw CLI::ValidationError("restrict-id", "--poly is required");
      exit_code = run_restrict_id(*poly, *i, *b, caps);
    });
  }
  // anticonc
  {
    auto* cmd = app.add_subcommand("anticonc", "anti-concentration probe");
    auto m = std::make_shared<int>(3);
    auto poly = std::make_shared<std::string>();
    auto trials = std::make_shared<long long>(100000);
    auto const_b = std::make_shared<double>(1.0);
    auto out = std::make_shared<std::string>("anticonc.csv");
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--m", *m, "built-in family: sum of m disjoint degree-2 terms");
    cmd->add_option("--poly", *poly, "probe this polynomial instead");
    cmd->add_option("--trials", *trials, "Monte Carlo trials");
    cmd->add_option("--const-b", *const_b, "B in the reference bound");
    cmd->add_option("--out", *out, "CSV output path");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, m, poly, trials, const_b, out, st] {
      exit_code = *st ? selftest_anticonc()
                      : run_anticonc(*m, *poly, *trials, seed, *const_b, *out);
    });
  }
  // lbd-sim
  {
    auto* cmd = app.add_subcommand("lbd-sim", "restriction-process simulation");
    auto n = std::make_shared<int>(16);
    auto preset = std::make_shared<std::string>("scaled");
    auto s_copies = std::make_shared<int>(0);
    auto retries = std::make_shared<int>(200);
    auto out = std::make_shared<std::string>("trace.json");
    auto out_csv = std::make_shared<std::string>();
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--n", *n, "|X0|");
    cmd->add_option("--preset", *preset, "paper | scaled")
        ->check(CLI::IsMember({"paper", "scaled"}));
    cmd->add_option("--s-copies", *s_copies, "product copies for q0 (0 = auto)");
    cmd->add_option("--retries", *retries, "restriction retry budget per round");
    cmd->add_option("--out", *out, "trace JSON path");
    cmd->add_option("--csv", *out_csv, "round summary CSV path");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, n, preset, s_copies, retries, out, out_csv, st] {
      exit_code = *st ? selftest_lbd_sim()
                      : run_lbd_sim(*n, seed, *preset, *s_copies, *retries, *out, *out_csv,
                                    caps);
    });
  }
  // design-check
  {
    auto* cmd = app.add_subcommand("design-check", "greedy design and the size bound");
    auto m = std::make_shared<int>(9);
    auto r = std::make_shared<int>(3);
    auto l = std::make_shared<int>(1);
    auto s = std::make_shared<int>(100);
    auto out = std::make_shared<std::string>();
    auto st = std::make_shared<bool>(false);
    cmd->add_option("--m", *m, "universe size");
    cmd->add_option("--r", *r, "set size");
    cmd->add_option("--l", *l, "pairwise intersection bound");
    cmd->add_option("--s", *s, "target number of sets");
    cmd->add_option("--out", *out, "design JSON path");
    cmd->add_flag("--selftest", *st, "run module invariants");
    cmd->callback([&, m, r, l, s, out, st] {
      exit_code = *st ? selftest_design_check() : run_design_check(*m, *r, *l, *s, *out);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1
  } catch (const cap_error& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
