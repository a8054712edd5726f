#pragma once

// Exact rational scalars. All algebra in this library is over GMP rationals;
// no floating point touches any value that ends up in a polynomial, a
// probability, or an artifact file. Doubles appear only in clearly labeled
// report columns and in parameter sizing (e.g. choosing an integer ell from
// a log formula).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace probpoly {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_of(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat_of: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// 2^-b as an exact rational, b >= 0.
inline Rat rat_pow2_inv(int b) {
  if (b < 0) throw std::invalid_argument("rat_pow2_inv: negative exponent");
  Int den = 1;
  den <<= b;
  return Rat(Int(1), den);
}

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Rat rat_pow(const Rat& x, unsigned long e) {
  Rat acc = 1;
  Rat base = x;
  unsigned long k = e;
  while (k > 0) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

// Canonical "num/den" form, denominator always present and positive.
inline std::string rat_to_string(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// Accepts "num/den" or a bare integer string.
inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  Rat r;
  if (slash == std::string::npos) {
    r = Rat(s);
  } else {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty())
      throw std::invalid_argument("rat_from_string: malformed fraction '" + s + "'");
    r = Rat(Int(num), Int(den));
  }
  r.canonicalize();
  if (r.get_den() <= 0) throw std::invalid_argument("rat_from_string: nonpositive denominator");
  return r;
}

inline double rat_to_double(const Rat& x) { return x.get_d(); }

}  // namespace probpoly
