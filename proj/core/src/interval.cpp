#include "soscert/interval.hpp"

#include <algorithm>

#include "soscert/errors.hpp"

namespace soscert {

Interval::Interval(const Rational& l, const Rational& h) : lo(l), hi(h) {
  if (l > h) throw InputError("interval with lo > hi");
}

std::optional<int> Interval::strict_sign() const {
  if (sgn(lo) > 0) return 1;
  if (sgn(hi) < 0) return -1;
  return std::nullopt;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r;
  r.lo = a.lo + b.lo;
  r.hi = a.hi + b.hi;
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r;
  r.lo = a.lo - b.hi;
  r.hi = a.hi - b.lo;
  return r;
}

Interval operator-(const Interval& a) {
  Interval r;
  r.lo = -a.hi;
  r.hi = -a.lo;
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  if (sgn(a.lo) >= 0 && sgn(b.lo) >= 0) {
    Interval r;
    r.lo = a.lo * b.lo;
    r.hi = a.hi * b.hi;
    return r;
  }
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Interval r;
  r.lo = *std::min_element(p, p + 4);
  r.hi = *std::max_element(p, p + 4);
  return r;
}

Interval operator*(const Rational& c, const Interval& a) {
  Interval r;
  if (sgn(c) >= 0) {
    r.lo = c * a.lo;
    r.hi = c * a.hi;
  } else {
    r.lo = c * a.hi;
    r.hi = c * a.lo;
  }
  return r;
}

namespace {

Rational rpow(const Rational& x, unsigned n) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), n);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), n);
  return r;
}

}  // namespace

Interval pow(const Interval& a, unsigned n) {
  if (n == 0) return Interval(Rational(1));
  Rational l = rpow(a.lo, n);
  Rational h = rpow(a.hi, n);
  Interval r;
  if (n % 2 == 1 || sgn(a.lo) >= 0) {
    r.lo = l;
    r.hi = h;
  } else if (sgn(a.hi) <= 0) {
    r.lo = h;
    r.hi = l;
  } else {
    r.lo = 0;
    r.hi = std::max(l, h);
  }
  return r;
}

std::string to_string(const Interval& iv) {
  return "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]";
}

}  // namespace soscert
