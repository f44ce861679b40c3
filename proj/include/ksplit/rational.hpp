#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ksplit {

// All quantities in this library are exact rationals.  mpq_class keeps
// values canonical (reduced, denominator > 0), which is what every
// comparison below relies on; there is no floating point anywhere.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "p", "-p", "p/q" with arbitrary-precision integers.
inline Rational parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("cannot parse rational: '" + text + "'");
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator in rational: '" + text + "'");
  q.canonicalize();
  return q;
}

// "p" when the denominator is 1, otherwise "p/q".
inline std::string format_rational(const Rational& q) {
  return q.get_str();
}

}  // namespace ksplit
