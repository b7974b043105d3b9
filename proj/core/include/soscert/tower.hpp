#pragma once

// Exact arithmetic in the real number-field tower K = Q(a)(b) with
// a^3 = 2 and b^2 + a^2*b + (1 - a^2) = 0.

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "soscert/interval.hpp"
#include "soscert/rational.hpp"
#include "soscert/univariate.hpp"

namespace soscert {

class AlgebraicNumber {
 public:
  static constexpr std::size_t kDegree = 6;
  /// Coordinates over the ordered basis (1, a, a^2, b, a*b, a^2*b).
  using Coords = std::array<Rational, kDegree>;

  AlgebraicNumber() = default;
  AlgebraicNumber(const Rational& q) { coords_[0] = q; }  // NOLINT: Q embeds into K
  AlgebraicNumber(long q) { coords_[0] = q; }              // NOLINT
  explicit AlgebraicNumber(Coords c) : coords_(std::move(c)) {}

  static AlgebraicNumber alpha();
  static AlgebraicNumber beta();
  static AlgebraicNumber basis(std::size_t i);

  const Coords& coords() const { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  bool is_zero() const;
  bool is_rational() const;

  AlgebraicNumber inverse() const;  // throws DivisionByZero

  AlgebraicNumber& operator+=(const AlgebraicNumber& o);
  AlgebraicNumber& operator-=(const AlgebraicNumber& o);
  AlgebraicNumber& operator*=(const AlgebraicNumber& o);
  AlgebraicNumber& operator/=(const AlgebraicNumber& o) { return *this *= o.inverse(); }

  friend AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) { return a += b; }
  friend AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b) { return a -= b; }
  friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
  friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a * b.inverse();
  }
  friend AlgebraicNumber operator-(const AlgebraicNumber& a);
  friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a.coords_ == b.coords_;
  }

  AlgebraicNumber scaled(const Rational& c) const;

 private:
  Coords coords_{};
};

inline bool is_zero(const AlgebraicNumber& a) { return a.is_zero(); }
inline AlgebraicNumber inverse(const AlgebraicNumber& a) { return a.inverse(); }
AlgebraicNumber pow(const AlgebraicNumber& a, unsigned n);

/// Textual form "c0 + c1*a + c2*a^2 + c3*b + c4*a*b + c5*a^2*b", zero terms omitted.
std::string to_string(const AlgebraicNumber& a);
/// Accepts any sum of products of rationals, a, b and parentheses; reduces exactly.
AlgebraicNumber parse_algebraic(std::string_view text);

/// Exact basis coordinates; a is rational iff entries 1..5 vanish.
AlgebraicNumber::Coords rational_coordinates(const AlgebraicNumber& a);

namespace detail {
struct RefinementCache;
}

/// Real embedding of the tower: isolating intervals for a and the selected real b.
class TowerDescriptor {
 public:
  /// 0 selects the larger real root of the b-quadratic (~0.3096), 1 the smaller (~-1.8970).
  int beta_index() const { return beta_index_; }
  const UPoly& alpha_minpoly() const { return alpha_minpoly_; }
  /// Minimal polynomial of b over Q (degree 6), used for interval refinement.
  const UPoly& beta_minpoly_q() const { return beta_minpoly_q_; }
  const Interval& alpha_interval() const { return alpha_interval_; }
  const Interval& beta_interval() const { return beta_interval_; }
  double beta_approx() const;
  double alpha_approx() const;

  /// Isolating intervals refined to width <= 2^-bits (memoized, thread-safe).
  std::pair<Interval, Interval> refined(unsigned bits) const;

  /// Textual description of the b-quadratic over Q(a).
  static std::string beta_minpoly_text() { return "X^2 + a^2*X + 1 - a^2"; }

 private:
  friend std::array<TowerDescriptor, 2> beta_roots();
  int beta_index_ = 0;
  UPoly alpha_minpoly_;
  UPoly beta_minpoly_q_;
  Interval alpha_interval_;
  Interval beta_interval_;
  std::shared_ptr<detail::RefinementCache> cache_;
};

/// Both real embeddings, ordered by descending b.
std::array<TowerDescriptor, 2> beta_roots();

/// Exact sign of the real embedding. 0 iff a is exactly zero.
int sign(const AlgebraicNumber& a, const TowerDescriptor& tower);

/// Enclosure of the real embedding of a using intervals refined to 2^-bits.
Interval enclose(const AlgebraicNumber& a, const TowerDescriptor& tower, unsigned bits);
double to_double(const AlgebraicNumber& a, const TowerDescriptor& tower);

/// Monic minimal polynomial over Q, from the first linear dependence among powers of a.
UPoly minpoly_over_q(const AlgebraicNumber& a);

/// Characteristic polynomial of multiplication by a on K (the norm form, degree 6).
UPoly charpoly_over_q(const AlgebraicNumber& a);

/// Exact evaluation of a univariate rational polynomial at a.
AlgebraicNumber evaluate(const UPoly& p, const AlgebraicNumber& a);

}  // namespace soscert
