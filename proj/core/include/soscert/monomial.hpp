#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace soscert {

inline constexpr std::size_t kMaxVars = 8;
inline constexpr unsigned kMaxExponent = 127;

/// Exponent vector over at most 8 variables, one byte per variable (variable i in byte i).
class Monomial {
 public:
  constexpr Monomial() = default;
  static Monomial from_exponents(std::span<const unsigned> exps);
  static Monomial variable(std::size_t i, unsigned e = 1);

  unsigned operator[](std::size_t i) const { return static_cast<unsigned>((bits_ >> (8 * i)) & 0xFFU); }
  unsigned degree() const { return degree_; }
  bool is_one() const { return bits_ == 0; }
  std::uint64_t packed() const { return bits_; }
  std::array<unsigned, kMaxVars> exponents() const;

  /// Throws InputError when an exponent would exceed kMaxExponent.
  Monomial operator*(const Monomial& o) const;
  /// Requires o.divides(*this).
  Monomial operator/(const Monomial& o) const;
  bool divides(const Monomial& o) const {
    constexpr std::uint64_t kHigh = 0x8080808080808080ULL;
    return (((o.bits_ | kHigh) - bits_) & kHigh) == kHigh;
  }
  Monomial lcm(const Monomial& o) const;
  Monomial gcd(const Monomial& o) const;
  /// Copy with variable i's exponent replaced by e.
  Monomial with_exponent(std::size_t i, unsigned e) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.bits_ != b.bits_; }

 private:
  std::uint64_t bits_ = 0;
  unsigned degree_ = 0;
};

enum class MonomialOrderKind { degrevlex, lex };

/// Strict total order on monomials, variable 0 highest precedence.
struct MonomialOrder {
  MonomialOrderKind kind = MonomialOrderKind::degrevlex;

  /// True when a is strictly greater than b.
  bool greater(const Monomial& a, const Monomial& b) const {
    if (kind == MonomialOrderKind::degrevlex) {
      if (a.degree() != b.degree()) return a.degree() > b.degree();
      // Variable 7 sits in the top byte, so the last differing variable decides first.
      return a.packed() < b.packed();
    }
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
  }
  bool operator()(const Monomial& a, const Monomial& b) const { return greater(a, b); }
};

inline constexpr MonomialOrder kDegRevLex{MonomialOrderKind::degrevlex};
inline constexpr MonomialOrder kLex{MonomialOrderKind::lex};

/// All degree-d monomials in n variables, sorted descending under `order`.
std::vector<Monomial> monomial_basis(std::size_t n, unsigned d, MonomialOrder order = kDegRevLex);

/// Binomial coefficient C(n + d - 1, d).
std::size_t count_monomials(std::size_t n, unsigned d);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    return std::hash<std::uint64_t>{}(m.packed() * 0x9E3779B97F4A7C15ULL);
  }
};

}  // namespace soscert
