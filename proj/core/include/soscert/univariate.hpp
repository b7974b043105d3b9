#pragma once

#include <string>
#include <vector>

#include "soscert/interval.hpp"
#include "soscert/rational.hpp"

namespace soscert {

/// Dense univariate polynomial over Q, coefficients stored low degree first.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int i) const;
  const Rational& leading() const { return coeffs_.back(); }

  Rational eval(const Rational& x) const;
  Interval eval(const Interval& x) const;
  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; throws DivisionByZero for a zero divisor.
  static void divmod(const UPoly& a, const UPoly& b, UPoly& quot, UPoly& rem);

  std::string to_string(const std::string& var = "X") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

UPoly pow(const UPoly& p, unsigned n);

/// Sturm chain p, p', -rem(p, p'), ... (signed remainders).
std::vector<UPoly> sturm_chain(const UPoly& p);

/// Number of distinct real roots of p in the half-open interval (a, b].
int count_real_roots(const std::vector<UPoly>& chain, const Rational& a, const Rational& b);

/// Positive bound B with every real root of p in (-B, B).
Rational cauchy_bound(const UPoly& p);

/// Disjoint isolating intervals (open at lo, closed at hi) for the distinct real roots
/// of a squarefree p, sorted by descending root.
std::vector<Interval> isolate_real_roots(const UPoly& p);

/// Halves an isolating interval of a squarefree p until its width is <= max_width.
Interval refine_root(const UPoly& p, Interval iv, const Rational& max_width);

}  // namespace soscert
