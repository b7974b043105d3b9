#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace soscert {

using Integer = mpz_class;
using Rational = mpq_class;

/// "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& q);

/// Parses "p", "-p", "p/q". Throws InputError on anything else or q == 0.
Rational parse_rational(std::string_view text);

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
Rational inverse(const Rational& q);

/// Positive rational c such that c * v has coprime integer entries.
Rational primitive_scale(const std::vector<Rational>& v);

}  // namespace soscert
