#pragma once

// Bounded-depth Boolean circuits as topologically ordered gate lists.
//
// Conventions (they feed the degree/size bookkeeping downstream, so they are
// fixed here once): size() counts AND/OR gates only; depth() counts AND/OR
// layers along the longest input-to-output path and NOT gates are free.
// Unbounded fan-in, each gate is its own layer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "probpoly/rat.hpp"
#include "probpoly/rng.hpp"
#include "probpoly/truth_table.hpp"

namespace probpoly {

enum class GateOp { In, Not, And, Or };

struct Gate {
  GateOp op;
  std::vector<int> args;  // gate ids; for In, args = {input index}
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(int n_inputs, std::vector<Gate> gates, int out)
      : n_inputs_(n_inputs), gates_(std::move(gates)), out_(out) {
    if (out_ < 0 || out_ >= static_cast<int>(gates_.size()))
      throw std::invalid_argument("Circuit: output id out of range");
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const Gate& gate = gates_[g];
      if (gate.op == GateOp::In) {
        if (gate.args.size() != 1 || gate.args[0] < 0 || gate.args[0] >= n_inputs_)
          throw std::invalid_argument("Circuit: bad input gate");
        continue;
      }
      if (gate.args.empty())
        throw std::invalid_argument("Circuit: gate without arguments");
      if (gate.op == GateOp::Not && gate.args.size() != 1)
        throw std::invalid_argument("Circuit: NOT takes one argument");
      for (int a : gate.args)
        if (a < 0 || a >= static_cast<int>(g))
          throw std::invalid_argument("Circuit: wire must reference an earlier gate");
    }
  }

  int n_inputs() const { return n_inputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  int output() const { return out_; }

  // AND/OR gates only
  int size() const {
    int s = 0;
    for (const Gate& g : gates_)
      if (g.op == GateOp::And || g.op == GateOp::Or) ++s;
    return s;
  }

  int depth() const {
    std::vector<int> d(gates_.size(), 0);
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const Gate& gate = gates_[g];
      switch (gate.op) {
        case GateOp::In: d[g] = 0; break;
        case GateOp::Not: d[g] = d[static_cast<std::size_t>(gate.args[0])]; break;
        default: {
          int m = 0;
          for (int a : gate.args) m = std::max(m, d[static_cast<std::size_t>(a)]);
          d[g] = m + 1;
        }
      }
    }
    return d[static_cast<std::size_t>(out_)];
  }

  bool eval_mask(std::uint64_t a) const {
    if (n_inputs_ > 64) throw cap_error("eval_mask: too many inputs", n_inputs_, 64);
    std::vector<char> val(gates_.size());
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const Gate& gate = gates_[g];
      switch (gate.op) {
        case GateOp::In:
          val[g] = static_cast<char>((a >> gate.args[0]) & 1);
          break;
        case GateOp::Not:
          val[g] = !val[static_cast<std::size_t>(gate.args[0])];
          break;
        case GateOp::And: {
          char v = 1;
          for (int x : gate.args) v = static_cast<char>(v && val[static_cast<std::size_t>(x)]);
          val[g] = v;
          break;
        }
        case GateOp::Or: {
          char v = 0;
          for (int x : gate.args) v = static_cast<char>(v || val[static_cast<std::size_t>(x)]);
          val[g] = v;
          break;
        }
      }
    }
    return val[static_cast<std::size_t>(out_)] != 0;
  }

  bool eval(const std::vector<bool>& a) const {
    if (static_cast<int>(a.size()) != n_inputs_)
      throw std::invalid_argument("eval: arity mismatch");
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i]) mask |= std::uint64_t(1) << i;
    return eval_mask(mask);
  }

 private:
  int n_inputs_ = 0;
  std::vector<Gate> gates_;
  int out_ = 0;
};

class CircuitBuilder {
 public:
  explicit CircuitBuilder(int n_inputs) : n_(n_inputs) {}

  int input(int i) {
    gates_.push_back({GateOp::In, {i}});
    return last();
  }
  int not_gate(int g) {
    gates_.push_back({GateOp::Not, {g}});
    return last();
  }
  int and_gate(std::vector<int> args) {
    gates_.push_back({GateOp::And, std::move(args)});
    return last();
  }
  int or_gate(std::vector<int> args) {
    gates_.push_back({GateOp::Or, std::move(args)});
    return last();
  }
  Circuit finish(int out) && { return Circuit(n_, std::move(gates_), out); }

 private:
  int last() const { return static_cast<int>(gates_.size()) - 1; }
  int n_ = 0;
  std::vector<Gate> gates_;
};

inline Circuit or_n(int n) {
  CircuitBuilder b(n);
  std::vector<int> ins;
  for (int i = 0; i < n; ++i) ins.push_back(b.input(i));
  int out = b.or_gate(ins);
  return std::move(b).finish(out);
}

inline Circuit and_n(int n) {
  CircuitBuilder b(n);
  std::vector<int> ins;
  for (int i = 0; i < n; ++i) ins.push_back(b.input(i));
  int out = b.and_gate(ins);
  return std::move(b).finish(out);
}

inline Circuit not_n1() {
  CircuitBuilder b(1);
  int x = b.input(0);
  int out = b.not_gate(x);
  return std::move(b).finish(out);
}

// fan-in-2 XOR tree, each XOR expanded as OR(AND(a, !b), AND(!a, b))
inline Circuit parity_n(int n) {
  if (n < 1) throw std::invalid_argument("parity_n: need n >= 1");
  CircuitBuilder b(n);
  std::vector<int> layer;
  for (int i = 0; i < n; ++i) layer.push_back(b.input(i));
  while (layer.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
      int x = layer[i], y = layer[i + 1];
      int nx = b.not_gate(x), ny = b.not_gate(y);
      int g = b.or_gate({b.and_gate({x, ny}), b.and_gate({nx, y})});
      next.push_back(g);
    }
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  return std::move(b).finish(layer[0]);
}

// Substitute circuits for the inputs of `outer`. All inner circuits must
// share one input arity; outer input i is rewired to inner[i]'s output.
inline Circuit splice(const Circuit& outer, const std::vector<Circuit>& inner) {
  if (static_cast<int>(inner.size()) != outer.n_inputs())
    throw std::invalid_argument("splice: arity mismatch");
  int n = inner.empty() ? 0 : inner[0].n_inputs();
  for (const Circuit& c : inner)
    if (c.n_inputs() != n) throw std::invalid_argument("splice: inner arity mismatch");

  std::vector<Gate> gates;
  std::vector<int> inner_out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    int offset = static_cast<int>(gates.size());
    for (const Gate& g : inner[i].gates()) {
      Gate h = g;
      if (h.op != GateOp::In)
        for (int& a : h.args) a += offset;
      gates.push_back(std::move(h));
    }
    inner_out[i] = offset + inner[i].output();
  }
  int offset = static_cast<int>(gates.size());
  int out = -1;
  std::vector<int> remap(outer.gates().size());
  for (std::size_t g = 0; g < outer.gates().size(); ++g) {
    const Gate& gate = outer.gates()[g];
    if (gate.op == GateOp::In) {
      remap[g] = inner_out[static_cast<std::size_t>(gate.args[0])];
      continue;
    }
    Gate h = gate;
    for (int& a : h.args) a = remap[static_cast<std::size_t>(a)];
    gates.push_back(std::move(h));
    remap[g] = static_cast<int>(gates.size()) - 1;
  }
  (void)offset;
  out = remap[static_cast<std::size_t>(outer.output())];
  return Circuit(n, std::move(gates), out);
}

// ---- full-cube evaluation, bit-packed ----

namespace detail {

inline void fill_var_words(std::vector<std::uint64_t>& w, int var, int n) {
  const std::size_t words = std::max<std::size_t>(1, (std::size_t(1) << n) / 64);
  w.assign(words, 0);
  if (var < 6) {
    static const std::uint64_t pat[6] = {
        0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
        0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL};
    std::uint64_t p = pat[var];
    if (n < 6) p &= (std::uint64_t(1) << (std::uint64_t(1) << n)) - 1;
    for (auto& x : w) x = p;
  } else {
    const std::size_t period = std::size_t(1) << (var - 6);
    for (std::size_t i = 0; i < w.size(); ++i)
      if ((i / period) & 1) w[i] = ~std::uint64_t(0);
  }
}

}  // namespace detail

// One bit per input mask, packed 64 per word (bit j of word w = input
// 64*w + j). Gates with a single consumer are folded and freed on the fly,
// so memory stays proportional to circuit depth, not size.
inline std::vector<std::uint64_t> output_words(const Circuit& c, int cap = 24) {
  const int n = c.n_inputs();
  if (n > cap) throw cap_error("output_words: too many inputs", n, cap);
  const std::size_t words = std::max<std::size_t>(1, (std::size_t(1) << n) / 64);
  const std::uint64_t tail_mask =
      (n >= 6) ? ~std::uint64_t(0) : ((std::uint64_t(1) << (std::uint64_t(1) << n)) - 1);

  std::vector<int> uses(c.gates().size(), 0);
  for (const Gate& g : c.gates())
    if (g.op != GateOp::In)
      for (int a : g.args) ++uses[static_cast<std::size_t>(a)];
  ++uses[static_cast<std::size_t>(c.output())];

  std::vector<std::optional<std::vector<std::uint64_t>>> memo(c.gates().size());

  std::function<std::vector<std::uint64_t>(int)> table = [&](int id) {
    auto& slot = memo[static_cast<std::size_t>(id)];
    int& remaining = uses[static_cast<std::size_t>(id)];
    if (slot) {
      --remaining;
      if (remaining == 0) {
        auto t = std::move(*slot);
        slot.reset();
        return t;
      }
      return *slot;
    }
    const Gate& g = c.gates()[static_cast<std::size_t>(id)];
    std::vector<std::uint64_t> t;
    switch (g.op) {
      case GateOp::In:
        detail::fill_var_words(t, g.args[0], n);
        break;
      case GateOp::Not:
        t = table(g.args[0]);
        for (auto& x : t) x = ~x;
        t.back() &= tail_mask;
        break;
      case GateOp::And: {
        t = table(g.args[0]);
        for (std::size_t i = 1; i < g.args.size(); ++i) {
          auto u = table(g.args[i]);
          for (std::size_t w = 0; w < words; ++w) t[w] &= u[w];
        }
        break;
      }
      case GateOp::Or: {
        t = table(g.args[0]);
        for (std::size_t i = 1; i < g.args.size(); ++i) {
          auto u = table(g.args[i]);
          for (std::size_t w = 0; w < words; ++w) t[w] |= u[w];
        }
        break;
      }
    }
    --remaining;
    if (remaining > 0) {
      slot = t;
      return t;
    }
    return t;
  };

  auto result = table(c.output());
  result.back() &= tail_mask;
  return result;
}

inline TruthTable circuit_table(const Circuit& c, int cap = 20) {
  auto w = output_words(c, cap);
  std::vector<bool> bits(std::size_t(1) << c.n_inputs());
  for (std::uint64_t a = 0; a < bits.size(); ++a)
    bits[a] = ((w[a >> 6] >> (a & 63)) & 1) != 0;
  return TruthTable(c.n_inputs(), std::move(bits));
}

// exact |{a : C(a) = 1}| / 2^n
inline Rat accept_prob_uniform(const Circuit& c, int cap = 24) {
  auto w = output_words(c, cap);
  Int count = 0;
  for (std::uint64_t word : w) count += __builtin_popcountll(word);
  Int den = Int(1) << c.n_inputs();
  Rat r(count, den);
  r.canonicalize();
  return r;
}

// ---- approximate majority ----

struct ApproxMajority {
  Circuit circuit;
  int ell = 0;
  Rat alpha, beta;
  int weight_zero_max = 0;  // must output 0 for Hamming weight <= this
  int weight_one_min = 0;   // must output 1 for Hamming weight >= this
  bool exhaustive_verified = false;
  int attempts = 0;
  std::string construction;  // "random-dnf-of-cnf" or "threshold-fallback"
};

// 0 below alpha*ell, 1 above beta*ell; returns a violating mask otherwise.
inline std::optional<std::uint64_t> approx_majority_violation(const Circuit& c,
                                                              const Rat& alpha,
                                                              const Rat& beta,
                                                              int cap = 20) {
  const int n = c.n_inputs();
  auto w = output_words(c, cap);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a) {
    const int wt = __builtin_popcountll(a);
    const bool bit = ((w[a >> 6] >> (a & 63)) & 1) != 0;
    if (Rat(wt) <= alpha * n && bit) return a;
    if (Rat(wt) >= beta * n && !bit) return a;
  }
  return std::nullopt;
}

namespace detail {

struct DnfParams {
  int k = 0;      // bottom OR fan-in (variable slots, with replacement)
  int m1 = 0;     // clauses per AND block
  int m2 = 0;     // AND blocks under the top OR
};

// Union-bound parameter search, in doubles (the sampled circuit is verified
// exactly afterwards, so this only affects construction cost). Monotonicity
// of the DNF-of-CNFs reduces verification to the two critical weight levels,
// so the union bound is over those levels only.
inline std::optional<DnfParams> tune_dnf_of_cnf(int ell, int w_lo, int w_hi) {
  auto binom = [](int n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  const double n_lo = (w_lo >= 1) ? binom(ell, w_lo) : 0.0;
  const double n_hi = binom(ell, w_hi);
  std::optional<DnfParams> best;
  double best_cost = 0;
  for (int k = 1; k <= 24; ++k) {
    const double f_lo = 1.0 - std::pow(double(ell - w_lo) / ell, k);
    const double f_hi = 1.0 - std::pow(double(ell - w_hi) / ell, k);
    if (f_hi <= 0) continue;
    for (int m1 = 1; m1 <= 4000; m1 = (m1 < 40 ? m1 + 1 : m1 + m1 / 8)) {
      const double q_hi = std::pow(f_hi, m1);
      if (q_hi < 1e-12) break;
      // per-high-input failure (1-q_hi)^m2 <= 1/(4 n_hi)
      const double need = std::log(4.0 * n_hi + 1.0) / -std::log1p(-q_hi);
      const int m2 = std::max(1, static_cast<int>(std::ceil(need)));
      const double q_lo = (w_lo >= 1) ? std::pow(f_lo, m1) : 0.0;
      if (n_lo * m2 * q_lo > 0.25) continue;
      const double cost = double(m2) * m1 * k;
      if (!best || cost < best_cost) {
        best = DnfParams{k, m1, m2};
        best_cost = cost;
      }
      break;  // larger m1 with same k only costs more
    }
  }
  return best;
}

}  // namespace detail

// Depth-3 (ell, alpha, beta)-approximate majority: a random monotone
// DNF-of-small-CNFs, resampled until exhaustive verification passes. Beyond
// the exhaustive cap, falls back to an exact weight-threshold DNF with the
// exhaustive_verified flag cleared.
inline ApproxMajority approx_majority(int ell, const Rat& alpha, const Rat& beta,
                                      std::uint64_t seed, int exhaustive_cap = 20,
                                      int max_attempts = 16) {
  if (!(alpha < beta) || alpha < 0 || beta > 1)
    throw std::invalid_argument("approx_majority: need 0 <= alpha < beta <= 1");
  ApproxMajority result;
  result.ell = ell;
  result.alpha = alpha;
  result.beta = beta;

  // w <= floor(alpha*ell) must give 0; w >= ceil(beta*ell) must give 1
  Int lo_num = alpha.get_num() * ell;
  Int hi_num = beta.get_num() * ell;
  Int w_lo_z, w_hi_z;
  mpz_fdiv_q(w_lo_z.get_mpz_t(), lo_num.get_mpz_t(), alpha.get_den().get_mpz_t());
  mpz_cdiv_q(w_hi_z.get_mpz_t(), hi_num.get_mpz_t(), beta.get_den().get_mpz_t());
  const int w_lo = static_cast<int>(w_lo_z.get_si());
  const int w_hi = std::max(1, static_cast<int>(w_hi_z.get_si()));
  if (w_lo >= w_hi)
    throw std::invalid_argument("approx_majority: thresholds collide at ell=" +
                                std::to_string(ell));
  result.weight_zero_max = w_lo;
  result.weight_one_min = w_hi;

  if (ell > exhaustive_cap) {
    // exact threshold at w_hi as a monotone DNF; correct by construction
    std::vector<int> comb(static_cast<std::size_t>(w_hi));
    CircuitBuilder b(ell);
    std::vector<int> ins;
    for (int i = 0; i < ell; ++i) ins.push_back(b.input(i));
    std::vector<int> ands;
    for (int i = 0; i < w_hi; ++i) comb[static_cast<std::size_t>(i)] = i;
    for (;;) {
      std::vector<int> lits;
      for (int v : comb) lits.push_back(ins[static_cast<std::size_t>(v)]);
      ands.push_back(b.and_gate(std::move(lits)));
      if (ands.size() > 5000000) throw cap_error("approx_majority: fallback too large", ell, exhaustive_cap);
      int i = w_hi - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == ell - w_hi + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < w_hi; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    int out = b.or_gate(std::move(ands));
    result.circuit = std::move(b).finish(out);
    result.exhaustive_verified = false;
    result.construction = "threshold-fallback";
    return result;
  }

  auto params = detail::tune_dnf_of_cnf(ell, w_lo, w_hi);
  if (!params)
    throw std::runtime_error("approx_majority: no feasible DNF-of-CNF parameters at ell=" +
                             std::to_string(ell));

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = rng_at(seed, {0x61706d6aULL, static_cast<std::uint64_t>(attempt)});
    CircuitBuilder b(ell);
    std::vector<int> ins;
    for (int i = 0; i < ell; ++i) ins.push_back(b.input(i));
    std::vector<int> blocks;
    for (int blk = 0; blk < params->m2; ++blk) {
      std::vector<int> clauses;
      for (int cl = 0; cl < params->m1; ++cl) {
        std::vector<int> lits;
        for (int s = 0; s < params->k; ++s)
          lits.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(ell))));
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (int& v : lits) v = ins[static_cast<std::size_t>(v)];
        clauses.push_back(b.or_gate(std::move(lits)));
      }
      blocks.push_back(b.and_gate(std::move(clauses)));
    }
    int out = b.or_gate(std::move(blocks));
    Circuit c = std::move(b).finish(out);
    if (!approx_majority_violation(c, alpha, beta, exhaustive_cap)) {
      result.circuit = std::move(c);
      result.exhaustive_verified = true;
      result.attempts = attempt + 1;
      result.construction = "random-dnf-of-cnf";
      return result;
    }
  }
  throw std::runtime_error("approx_majority: verification failed after " +
                           std::to_string(max_attempts) + " attempts (ell=" +
                           std::to_string(ell) + ")");
}

}  // namespace probpoly
