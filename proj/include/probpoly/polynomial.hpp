#pragma once

// Sparse exact-rational polynomials with set-valued monomials.
//
// The carrier is multilinear: products reduce x*x -> x eagerly, which is
// value-preserving on {0,1} assignments. The formal (pre-reduction) degree of
// compositions is tracked separately in formal_degree, because the degree
// bookkeeping of composed constructions counts formal degree while values and
// L-infinity norms live on the Boolean cube.
//
// Term order is graded-lexicographic (degree first, then lex on the sorted
// index lists) and is part of the contract: greedy term extraction downstream
// replays only because iteration order is fixed.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "probpoly/rat.hpp"

namespace probpoly {

using Var = int;

struct cap_error : std::runtime_error {
  long long required;
  long long allowed;
  cap_error(const std::string& what, long long required_, long long allowed_)
      : std::runtime_error(what + " (required " + std::to_string(required_) +
                           ", cap " + std::to_string(allowed_) + ")"),
        required(required_),
        allowed(allowed_) {}
};

struct Monomial {
  std::vector<Var> vars;  // strictly increasing

  Monomial() = default;
  explicit Monomial(std::vector<Var> v) : vars(std::move(v)) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  }

  static Monomial one() { return Monomial{}; }
  static Monomial single(Var v) { return Monomial(std::vector<Var>{v}); }

  int degree() const { return static_cast<int>(vars.size()); }
  bool is_one() const { return vars.empty(); }

  bool contains(Var v) const {
    return std::binary_search(vars.begin(), vars.end(), v);
  }

  bool disjoint_from(const Monomial& o) const {
    auto a = vars.begin();
    auto b = o.vars.begin();
    while (a != vars.end() && b != o.vars.end()) {
      if (*a == *b) return false;
      if (*a < *b) ++a; else ++b;
    }
    return true;
  }

  // set union; multilinear product of monomials
  Monomial merged_with(const Monomial& o) const {
    Monomial r;
    r.vars.reserve(vars.size() + o.vars.size());
    std::set_union(vars.begin(), vars.end(), o.vars.begin(), o.vars.end(),
                   std::back_inserter(r.vars));
    return r;
  }

  bool operator==(const Monomial& o) const { return vars == o.vars; }
};

struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.vars.size() != b.vars.size()) return a.vars.size() < b.vars.size();
    return std::lexicographical_compare(a.vars.begin(), a.vars.end(),
                                        b.vars.begin(), b.vars.end());
  }
};

using TermMap = std::map<Monomial, Rat, GradedLexLess>;
using Assignment = std::map<Var, Rat>;

namespace detail {
inline std::vector<Var> sorted_unique(std::vector<Var> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace detail

class Polynomial {
 public:
  Polynomial() = default;

  Polynomial(std::vector<Var> universe, TermMap terms, int formal_degree = -1)
      : universe_(detail::sorted_unique(std::move(universe))),
        terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second == 0) {
        it = terms_.erase(it);
      } else {
        for (Var v : it->first.vars) {
          if (!std::binary_search(universe_.begin(), universe_.end(), v))
            throw std::invalid_argument("Polynomial: monomial var " +
                                        std::to_string(v) + " outside universe");
        }
        ++it;
      }
    }
    formal_degree_ = std::max(formal_degree, degree());
  }

  static Polynomial zero(std::vector<Var> universe = {}) {
    return Polynomial(std::move(universe), TermMap{}, 0);
  }

  static Polynomial constant(const Rat& c, std::vector<Var> universe = {}) {
    TermMap t;
    if (c != 0) t[Monomial::one()] = c;
    return Polynomial(std::move(universe), std::move(t), 0);
  }

  static Polynomial variable(Var v, std::vector<Var> universe = {}) {
    if (universe.empty()) universe = {v};
    TermMap t;
    t[Monomial::single(v)] = 1;
    return Polynomial(std::move(universe), std::move(t), 1);
  }

  const std::vector<Var>& universe() const { return universe_; }
  const TermMap& terms() const { return terms_; }
  int formal_degree() const { return formal_degree_; }

  // max |vars| over stored terms; 0 for constants and the zero polynomial
  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }

  Rat constant_value() const {
    if (!is_constant()) throw std::logic_error("constant_value: not a constant polynomial");
    return terms_.empty() ? Rat(0) : terms_.begin()->second;
  }

  // formally the constant polynomial b: no terms (b=0) or the single empty
  // monomial with coefficient b
  bool is_formally_constant(const Rat& b) const {
    return is_constant() && constant_value() == b;
  }

  Rat coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  bool in_universe(Var v) const {
    return std::binary_search(universe_.begin(), universe_.end(), v);
  }

  // Exact evaluation at a total assignment of the universe. Arbitrary
  // rational values are allowed, not only 0/1; the multilinear form is
  // evaluated as written.
  Rat evaluate(const Assignment& a) const {
    for (Var v : universe_) {
      if (!a.count(v))
        throw std::invalid_argument("evaluate: variable x" + std::to_string(v) +
                                    " unassigned");
    }
    Rat total = 0;
    for (const auto& [m, c] : terms_) {
      Rat prod = c;
      for (Var v : m.vars) prod *= a.at(v);
      total += prod;
    }
    return total;
  }

  // Evaluation at a Boolean point given as a bitmask over the sorted
  // universe (bit i = value of universe()[i]).
  Rat evaluate_mask(std::uint64_t mask) const {
    if (universe_.size() > 64)
      throw cap_error("evaluate_mask: universe too large", (long long)universe_.size(), 64);
    Rat total = 0;
    for (const auto& [m, c] : terms_) {
      bool live = true;
      for (Var v : m.vars) {
        std::size_t pos = var_pos(v);
        if (!((mask >> pos) & 1)) { live = false; break; }
      }
      if (live) total += c;
    }
    return total;
  }

  // Formal substitution of a partial assignment, then collection of like
  // terms. Result universe = universe \ dom(sigma).
  Polynomial restricted(const Assignment& sigma) const {
    for (const auto& [v, val] : sigma) {
      (void)val;
      if (!in_universe(v))
        throw std::invalid_argument("restricted: variable x" + std::to_string(v) +
                                    " not in universe");
    }
    std::vector<Var> rest;
    for (Var v : universe_)
      if (!sigma.count(v)) rest.push_back(v);

    TermMap out;
    for (const auto& [m, c] : terms_) {
      Rat factor = c;
      Monomial kept;
      bool dead = false;
      for (Var v : m.vars) {
        auto it = sigma.find(v);
        if (it == sigma.end()) {
          kept.vars.push_back(v);
        } else {
          if (it->second == 0) { dead = true; break; }
          factor *= it->second;
        }
      }
      if (dead) continue;
      auto [pos, fresh] = out.try_emplace(kept, factor);
      if (!fresh) {
        pos->second += factor;
        if (pos->second == 0) out.erase(pos);
      }
    }
    return Polynomial(std::move(rest), std::move(out), formal_degree_);
  }

  Polynomial restricted_to_bit(const std::vector<Var>& vars, const Rat& b) const {
    Assignment sigma;
    for (Var v : vars) sigma[v] = b;
    return restricted(sigma);
  }

 private:
  std::size_t var_pos(Var v) const {
    auto it = std::lower_bound(universe_.begin(), universe_.end(), v);
    return static_cast<std::size_t>(it - universe_.begin());
  }

  std::vector<Var> universe_;
  TermMap terms_;
  int formal_degree_ = 0;
};

inline std::vector<Var> universe_union(const std::vector<Var>& a,
                                       const std::vector<Var>& b) {
  std::vector<Var> u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

inline Polynomial add(const Polynomial& p, const Polynomial& q) {
  TermMap out = p.terms();
  for (const auto& [m, c] : q.terms()) {
    auto [pos, fresh] = out.try_emplace(m, c);
    if (!fresh) {
      pos->second += c;
      if (pos->second == 0) out.erase(pos);
    }
  }
  return Polynomial(universe_union(p.universe(), q.universe()), std::move(out),
                    std::max(p.formal_degree(), q.formal_degree()));
}

inline Polynomial neg(const Polynomial& p) {
  TermMap out;
  for (const auto& [m, c] : p.terms()) out[m] = -c;
  return Polynomial(p.universe(), std::move(out), p.formal_degree());
}

inline Polynomial sub(const Polynomial& p, const Polynomial& q) { return add(p, neg(q)); }

inline Polynomial scale(const Polynomial& p, const Rat& c) {
  TermMap out;
  if (c != 0)
    for (const auto& [m, coef] : p.terms()) out[m] = coef * c;
  return Polynomial(p.universe(), std::move(out), p.formal_degree());
}

// Exact product with eager multilinear reduction of the stored terms.
// formal_degree adds, per the composed-degree accounting.
inline Polynomial multiply(const Polynomial& p, const Polynomial& q) {
  TermMap out;
  for (const auto& [mp, cp] : p.terms()) {
    for (const auto& [mq, cq] : q.terms()) {
      Monomial m = mp.merged_with(mq);
      Rat c = cp * cq;
      auto [pos, fresh] = out.try_emplace(std::move(m), c);
      if (!fresh) {
        pos->second += c;
        if (pos->second == 0) out.erase(pos);
      }
    }
  }
  return Polynomial(universe_union(p.universe(), q.universe()), std::move(out),
                    p.formal_degree() + q.formal_degree());
}

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
inline Polynomial operator-(const Polynomial& p, const Polynomial& q) { return sub(p, q); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }

// Substitutes inner[i] for input i of q (q's universe must be {0..l-1}),
// expanding exactly with multilinear reduction. The inner polynomials are
// taken over the union of their universes.
inline Polynomial compose(const Polynomial& q, const std::vector<Polynomial>& inner) {
  const std::size_t l = inner.size();
  for (std::size_t i = 0; i < q.universe().size(); ++i) {
    if (q.universe()[i] != static_cast<Var>(i))
      throw std::invalid_argument("compose: outer universe must be {0..l-1}");
  }
  if (q.universe().size() > l)
    throw std::invalid_argument("compose: arity mismatch (outer needs " +
                                std::to_string(q.universe().size()) + " inputs, got " +
                                std::to_string(l) + ")");

  std::vector<Var> uni;
  int max_inner_fd = 0;
  for (const auto& p : inner) {
    uni = universe_union(uni, p.universe());
    max_inner_fd = std::max(max_inner_fd, p.formal_degree());
  }

  Polynomial acc = Polynomial::zero(uni);
  for (const auto& [m, c] : q.terms()) {
    Polynomial prod = Polynomial::constant(c, uni);
    for (Var v : m.vars) prod = multiply(prod, inner[static_cast<std::size_t>(v)]);
    acc = add(acc, prod);
  }
  return Polynomial(acc.universe(), acc.terms(), q.formal_degree() * max_inner_fd);
}

// sum of absolute coefficient values
inline Rat weight(const Polynomial& p) {
  Rat w = 0;
  for (const auto& [m, c] : p.terms()) w += rat_abs(c);
  return w;
}

// Values on the full Boolean cube of the universe, indexed by mask (bit i =
// universe()[i]). Computed by the zeta transform over the subset lattice:
// start from coefficients, superpose each variable's contribution.
inline std::vector<Rat> cube_values(const Polynomial& p, int cap = 24) {
  const int n = static_cast<int>(p.universe().size());
  if (n > cap) throw cap_error("cube_values: universe exceeds enumeration cap", n, cap);
  std::vector<Rat> v(std::size_t(1) << n, Rat(0));
  for (const auto& [m, c] : p.terms()) {
    std::uint64_t idx = 0;
    for (Var var : m.vars) {
      auto it = std::lower_bound(p.universe().begin(), p.universe().end(), var);
      idx |= std::uint64_t(1) << (it - p.universe().begin());
    }
    v[idx] += c;
  }
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t(1) << i;
    for (std::uint64_t mask = 0; mask < v.size(); ++mask)
      if (mask & bit) v[mask] += v[mask ^ bit];
  }
  return v;
}

// Inverse of cube_values: the unique multilinear polynomial over `universe`
// with the given cube values (Moebius transform over the subset lattice).
inline Polynomial interpolate_cube(const std::vector<Var>& universe,
                                   std::vector<Rat> values,
                                   int formal_degree = -1) {
  const std::size_t n = universe.size();
  if (values.size() != (std::size_t(1) << n))
    throw std::invalid_argument("interpolate_cube: need 2^n values");
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t(1) << i;
    for (std::uint64_t mask = 0; mask < values.size(); ++mask)
      if (mask & bit) values[mask] -= values[mask ^ bit];
  }
  std::vector<Var> uni = detail::sorted_unique(universe);
  if (uni.size() != n) throw std::invalid_argument("interpolate_cube: duplicate vars");
  TermMap terms;
  for (std::uint64_t mask = 0; mask < values.size(); ++mask) {
    if (values[mask] == 0) continue;
    Monomial m;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) m.vars.push_back(uni[i]);
    terms.emplace(std::move(m), std::move(values[mask]));
  }
  return Polynomial(std::move(uni), std::move(terms), formal_degree);
}

// exact max of |p| over the Boolean cube
inline Rat linf_norm_exact(const Polynomial& p, int cap = 24) {
  const int n = static_cast<int>(p.universe().size());
  if (n > cap)
    throw cap_error("linf_norm_exact: universe exceeds enumeration cap", n, cap);
  Rat best = 0;
  for (Rat& v : cube_values(p, cap)) {
    Rat a = rat_abs(v);
    if (a > best) best = a;
  }
  return best;
}

inline bool operator==(const Polynomial& p, const Polynomial& q) {
  return p.universe() == q.universe() && p.terms() == q.terms() &&
         p.formal_degree() == q.formal_degree();
}

// identical stored terms, ignoring universe and formal-degree bookkeeping
inline bool same_terms(const Polynomial& p, const Polynomial& q) {
  return p.terms() == q.terms();
}

inline std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) s += " + ";
    first = false;
    s += c.get_str();
    for (Var v : m.vars) s += "*x" + std::to_string(v);
  }
  return s;
}

}  // namespace probpoly
