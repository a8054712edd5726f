#pragma once

// Probabilistic polynomials with witness: paired (polynomial, circuit) draws
// where the circuit flags exactly the inputs on which the polynomial may
// err. Soundness is per fixing: E(a) = 0 implies P(a) = C(a), and it is a
// structural property of the constructions here, checked exhaustively by
// verify_witness_soundness.
//
// Base witnesses are isolation-failure detectors for the OR construction: a
// draw errs on input a only if no scale's linear form hits exactly 1 and a
// is nonzero, and "some chosen set contains exactly one live wire" is a
// small monotone-ish depth-2 circuit over the inputs. Amplification composes
// a pseudo-majority over the polynomials with an (l, 1/4, 2/5)-approximate
// majority over the witnesses: if the composite witness stays quiet, more
// than 3l/5 >= r inner draws are certified correct, which pins the
// pseudo-majority to the right value whatever the faulty draws evaluated to.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "probpoly/circuit.hpp"
#include "probpoly/prob_poly.hpp"
#include "probpoly/pseudo_majority.hpp"

namespace probpoly {

struct PPWSample {
  Polynomial poly;
  Circuit witness;
};

struct PPW {
  int n = 0;
  Rat eps_claim;
  int degree_bound = 0;
  std::optional<Rat> linf_bound;
  int witness_size_bound = 0;
  int witness_depth_bound = 0;
  int ell = 0;
  std::string kind;

  std::function<PPWSample(std::uint64_t)> sample;
  std::function<bool(std::uint64_t, std::uint64_t)> witness_fires;  // E(a) = 1
  std::function<Rat(std::uint64_t, std::uint64_t)> value_at;        // P(a)
};

struct SoundnessCheck {
  bool ok = true;
  std::uint64_t counterexample = 0;
};

// Exhaustive over Boolean inputs: whenever the witness is quiet the
// polynomial must equal the circuit, exactly.
inline SoundnessCheck verify_witness_soundness(const PPWSample& s, const Circuit& c,
                                               int cap = 12) {
  const int n = c.n_inputs();
  if (n > cap) throw cap_error("verify_witness_soundness: arity exceeds cap", n, cap);
  if (s.witness.n_inputs() != n)
    throw std::invalid_argument("verify_witness_soundness: witness arity mismatch");
  std::vector<Var> uni;
  for (int v = 0; v < n; ++v) uni.push_back(v);
  auto values = cube_values(Polynomial(uni, s.poly.terms(), s.poly.formal_degree()), cap);
  auto cw = output_words(c, cap);
  auto ww = output_words(s.witness, cap);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a) {
    const bool fires = ((ww[a >> 6] >> (a & 63)) & 1) != 0;
    if (fires) continue;
    const int bit = static_cast<int>((cw[a >> 6] >> (a & 63)) & 1);
    if (values[a] != bit) return {false, a};
  }
  return {true, 0};
}

namespace detail {

constexpr std::uint64_t kTagPpwAm = 0x7070776dULL;

// witness for t independent or_base draws: fires unless the input is zero or
// some scale set of some draw contains exactly one live variable
inline Circuit or_isolation_witness(const std::vector<std::vector<std::uint64_t>>& draws,
                                    int n) {
  CircuitBuilder b(n);
  std::vector<int> ins, neg;
  for (int v = 0; v < n; ++v) ins.push_back(b.input(v));
  for (int v = 0; v < n; ++v) neg.push_back(b.not_gate(ins[static_cast<std::size_t>(v)]));

  std::vector<int> success;  // any of these high => the draw surely agrees with OR
  success.push_back(b.and_gate(neg));  // the all-zeros detector
  for (const auto& sets : draws) {
    for (std::uint64_t set : sets) {
      const int k = __builtin_popcountll(set);
      if (k == 0) continue;
      for (int v = 0; v < n; ++v) {
        if (!((set >> v) & 1)) continue;
        if (k == 1) {
          success.push_back(ins[static_cast<std::size_t>(v)]);
        } else {
          std::vector<int> conj = {ins[static_cast<std::size_t>(v)]};
          for (int w = 0; w < n; ++w)
            if (w != v && ((set >> w) & 1)) conj.push_back(neg[static_cast<std::size_t>(w)]);
          success.push_back(b.and_gate(std::move(conj)));
        }
      }
    }
  }
  int fired = b.not_gate(b.or_gate(std::move(success)));
  return std::move(b).finish(fired);
}

}  // namespace detail

// Witnessed one-sided OR: the poly is amplify_onesided_or(or_base(n), t) and
// the witness is the explicit isolation-failure detector over the same
// drawn sets. eps_claim = 1/8 with the default t = 7 internal repeats,
// validated empirically by the drivers (per-input fire rates sit far below).
inline PPW ppw_base_or(int n, std::uint64_t salt = 0, int repeats = 7) {
  ProbPoly poly_pp = amplify_onesided_or(or_base(n, salt), repeats);
  const int scales = ceil_log2(n) + 1;

  PPW ppw;
  ppw.n = n;
  ppw.eps_claim = rat_of(1, 8);
  ppw.degree_bound = poly_pp.degree_bound;
  ppw.linf_bound = poly_pp.linf_bound;
  // Z + one exactly-one block per (repeat, scale, member) + OR + NOT
  ppw.witness_size_bound = 2 + repeats * scales * n;
  ppw.witness_depth_bound = 2;
  ppw.kind = "ppw-or-base";

  auto draw_sets = [salt, n, repeats](std::uint64_t seed) {
    std::vector<std::vector<std::uint64_t>> draws;
    draws.reserve(static_cast<std::size_t>(repeats));
    for (int c = 0; c < repeats; ++c)
      draws.push_back(detail::or_base_sets(salt, derive_seed(seed, {static_cast<std::uint64_t>(c)}), n));
    return draws;
  };

  ppw.sample = [poly_pp, draw_sets, n](std::uint64_t seed) {
    PPWSample s;
    s.poly = poly_pp.sample(seed);
    s.witness = detail::or_isolation_witness(draw_sets(seed), n);
    return s;
  };
  ppw.witness_fires = [draw_sets](std::uint64_t seed, std::uint64_t mask) {
    if (mask == 0) return false;
    for (const auto& sets : draw_sets(seed))
      for (std::uint64_t set : sets)
        if (__builtin_popcountll(set & mask) == 1) return false;
    return true;
  };
  ppw.value_at = poly_pp.value_at;
  return ppw;
}

// Witnessed gate-by-gate compilation of an AND/OR/NOT circuit. Each AND/OR
// gate gets repeated isolation draws (via the same streams as
// circuit_to_probpoly), and the witness fires if any gate's draws all missed
// given the true child values; the union bound certifies
// Pr[E = 1] <= size * (3/4)^t <= 1/8.
inline PPW ppw_base_circuit(const Circuit& c, std::uint64_t salt = 0) {
  const int n = c.n_inputs();
  const int s = c.size();
  const Rat budget = rat_of(1, 8);
  const int t = (s == 0) ? 0 : detail::gate_repetitions(s, budget);

  ProbPoly poly_pp = circuit_to_probpoly(c, budget, salt);

  PPW ppw;
  ppw.n = n;
  ppw.eps_claim = (s == 0) ? Rat(0) : budget;
  ppw.degree_bound = poly_pp.degree_bound;
  ppw.linf_bound = poly_pp.linf_bound;
  ppw.witness_depth_bound = c.depth() + 3;
  {
    int bound = 2;
    for (const Gate& g : c.gates())
      if (g.op == GateOp::And || g.op == GateOp::Or) {
        const int k = static_cast<int>(g.args.size());
        bound += 2 + t * (ceil_log2(k) + 1) * (k + 1);
      }
    ppw.witness_size_bound = bound + static_cast<int>(c.gates().size());
  }
  ppw.kind = "ppw-circuit-base";

  const Circuit circ = c;
  ppw.sample = [circ, poly_pp, salt, t, n](std::uint64_t seed) {
    PPWSample out;
    out.poly = poly_pp.sample(seed);

    // replicate the circuit's gates, then stack detectors on top
    CircuitBuilder b(n);
    std::vector<int> id(circ.gates().size());
    std::vector<int> neg(circ.gates().size(), -1);
    for (std::size_t g = 0; g < circ.gates().size(); ++g) {
      const Gate& gate = circ.gates()[g];
      std::vector<int> args;
      for (int a : gate.args) args.push_back(id[static_cast<std::size_t>(a)]);
      switch (gate.op) {
        case GateOp::In: id[g] = b.input(gate.args[0]); break;
        case GateOp::Not: id[g] = b.not_gate(args[0]); break;
        case GateOp::And: id[g] = b.and_gate(std::move(args)); break;
        case GateOp::Or: id[g] = b.or_gate(std::move(args)); break;
      }
    }
    auto negated = [&](int gate_id) {
      if (neg[static_cast<std::size_t>(gate_id)] < 0)
        neg[static_cast<std::size_t>(gate_id)] = b.not_gate(id[static_cast<std::size_t>(gate_id)]);
      return neg[static_cast<std::size_t>(gate_id)];
    };

    std::vector<int> gate_failures;
    for (std::size_t g = 0; g < circ.gates().size(); ++g) {
      const Gate& gate = circ.gates()[g];
      if (gate.op != GateOp::And && gate.op != GateOp::Or) continue;
      const bool is_and = gate.op == GateOp::And;
      const int k = static_cast<int>(gate.args.size());
      auto sets = detail::or_gate_sets(salt, seed, static_cast<int>(g), k, t);

      // live child for the isolation argument: child=1 for OR, child=0 for AND
      auto live = [&](int child) {
        int cg = gate.args[static_cast<std::size_t>(child)];
        return is_and ? negated(cg) : id[static_cast<std::size_t>(cg)];
      };
      auto dead = [&](int child) {
        int cg = gate.args[static_cast<std::size_t>(child)];
        return is_and ? id[static_cast<std::size_t>(cg)] : negated(cg);
      };

      std::vector<int> success;
      {  // all-dead detector: the gate output is forced and the draw is exact
        std::vector<int> conj;
        for (int a = 0; a < k; ++a) conj.push_back(dead(a));
        success.push_back(b.and_gate(std::move(conj)));
      }
      for (const auto& set : sets) {
        if (set.empty()) continue;
        for (int v : set) {
          std::vector<int> conj = {live(v)};
          for (int w : set)
            if (w != v) conj.push_back(dead(w));
          success.push_back(conj.size() == 1 ? conj[0] : b.and_gate(std::move(conj)));
        }
      }
      gate_failures.push_back(b.not_gate(b.or_gate(std::move(success))));
    }

    int fired;
    if (gate_failures.empty()) {
      // no AND/OR gates: the polynomial is exact and the witness is constant 0
      fired = b.not_gate(b.or_gate({negated(static_cast<int>(circ.gates().size()) - 1),
                                    id[circ.gates().size() - 1]}));
    } else {
      fired = b.or_gate(std::move(gate_failures));
    }
    out.witness = std::move(b).finish(fired);
    return out;
  };

  ppw.witness_fires = [circ, salt, t](std::uint64_t seed, std::uint64_t mask) {
    if (circ.size() == 0) return false;
    // true gate values
    std::vector<char> val(circ.gates().size());
    for (std::size_t g = 0; g < circ.gates().size(); ++g) {
      const Gate& gate = circ.gates()[g];
      switch (gate.op) {
        case GateOp::In: val[g] = static_cast<char>((mask >> gate.args[0]) & 1); break;
        case GateOp::Not: val[g] = !val[static_cast<std::size_t>(gate.args[0])]; break;
        case GateOp::And: {
          char v = 1;
          for (int a : gate.args) v = static_cast<char>(v && val[static_cast<std::size_t>(a)]);
          val[g] = v;
          break;
        }
        case GateOp::Or: {
          char v = 0;
          for (int a : gate.args) v = static_cast<char>(v || val[static_cast<std::size_t>(a)]);
          val[g] = v;
          break;
        }
      }
    }
    for (std::size_t g = 0; g < circ.gates().size(); ++g) {
      const Gate& gate = circ.gates()[g];
      if (gate.op != GateOp::And && gate.op != GateOp::Or) continue;
      const bool is_and = gate.op == GateOp::And;
      const int k = static_cast<int>(gate.args.size());
      int live_count = 0;
      for (int a : gate.args) {
        char v = val[static_cast<std::size_t>(a)];
        if (is_and ? !v : v) ++live_count;
      }
      if (live_count == 0) continue;  // forced gate, exact
      auto sets = detail::or_gate_sets(salt, seed, static_cast<int>(g), k, t);
      bool isolated = false;
      for (const auto& set : sets) {
        int hits = 0;
        for (int v : set) {
          char cv = val[static_cast<std::size_t>(gate.args[static_cast<std::size_t>(v)])];
          if (is_and ? !cv : cv) ++hits;
        }
        if (hits == 1) { isolated = true; break; }
      }
      if (!isolated) return true;
    }
    return false;
  };
  ppw.value_at = poly_pp.value_at;
  return ppw;
}

struct PpwAmplifyOptions {
  double const_a = 6.0;  // ell = ceil(A ln(1/eps)); calibratable
  int pseudo_majority_cap = 20;
  int cube_cap = 24;
  int approx_majority_cap = 20;
};

// P = Q(P_1,...,P_l), E = C1(E_1,...,E_l) with Q the l-pseudo-majority and
// C1 an (l, 1/4, 2/5)-approximate majority.
inline PPW ppw_amplify(const PPW& base, const Rat& eps, std::uint64_t salt = 0,
                       const PpwAmplifyOptions& opts = {}) {
  if (base.eps_claim > rat_of(1, 8))
    throw std::invalid_argument("ppw_amplify: base claim must be at most 1/8");
  if (eps <= 0) throw std::invalid_argument("ppw_amplify: need eps > 0");
  const int ell =
      std::max(1, static_cast<int>(std::ceil(opts.const_a * std::log(1.0 / rat_to_double(eps)))));
  if (ell > opts.pseudo_majority_cap)
    throw cap_error("ppw_amplify: required pseudo-majority arity exceeds cap", ell,
                    opts.pseudo_majority_cap);

  ApproxMajority am = approx_majority(ell, rat_of(1, 4), rat_of(2, 5),
                                      derive_seed(salt, {detail::kTagPpwAm}),
                                      opts.approx_majority_cap);
  const std::vector<int> levels = majority_levels(ell);

  PPW out;
  out.n = base.n;
  out.eps_claim = eps;
  out.degree_bound = ell * base.degree_bound;
  if (base.linf_bound) {
    Rat l = *base.linf_bound < 2 ? Rat(2) : *base.linf_bound;
    out.linf_bound = symmetric_weight(levels) * rat_pow(l, static_cast<unsigned long>(ell));
  }
  out.witness_size_bound = am.circuit.size() + ell * base.witness_size_bound;
  out.witness_depth_bound = am.circuit.depth() + base.witness_depth_bound;
  out.ell = ell;
  out.kind = "ppw-amplified";

  const PPW b = base;
  const Circuit c1 = am.circuit;
  const int cube_cap = opts.cube_cap;
  out.sample = [b, c1, levels, ell, cube_cap](std::uint64_t seed) {
    std::vector<Polynomial> polys;
    std::vector<Circuit> witnesses;
    polys.reserve(static_cast<std::size_t>(ell));
    witnesses.reserve(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) {
      PPWSample s = b.sample(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      polys.push_back(std::move(s.poly));
      witnesses.push_back(std::move(s.witness));
    }
    PPWSample out_sample;
    out_sample.poly = compose_symmetric(levels, polys, cube_cap);
    out_sample.witness = splice(c1, witnesses);
    return out_sample;
  };
  out.witness_fires = [b, c1, ell](std::uint64_t seed, std::uint64_t mask) {
    std::uint64_t fire_mask = 0;
    for (int i = 0; i < ell; ++i)
      if (b.witness_fires(derive_seed(seed, {static_cast<std::uint64_t>(i)}), mask))
        fire_mask |= std::uint64_t(1) << i;
    return c1.eval_mask(fire_mask);
  };
  out.value_at = [b, levels, ell](std::uint64_t seed, std::uint64_t mask) {
    std::vector<Rat> y(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i)
      y[static_cast<std::size_t>(i)] =
          b.value_at(derive_seed(seed, {static_cast<std::uint64_t>(i)}), mask);
    return symmetric_mle_eval(levels, y);
  };
  return out;
}

}  // namespace probpoly
