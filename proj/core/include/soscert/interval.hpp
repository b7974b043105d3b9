#pragma once

#include <optional>
#include <string>

#include "soscert/rational.hpp"

namespace soscert {

/// Closed interval [lo, hi] with exact rational endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(const Rational& point) : lo(point), hi(point) {}
  Interval(const Rational& l, const Rational& h);  // throws InputError if l > h

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

  /// +1 / -1 when the whole interval lies strictly on one side of zero.
  std::optional<int> strict_sign() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Rational& c, const Interval& a);
/// Tight power: even powers of intervals straddling zero start at 0.
Interval pow(const Interval& a, unsigned n);

std::string to_string(const Interval& iv);

}  // namespace soscert
