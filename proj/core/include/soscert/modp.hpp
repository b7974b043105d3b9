#pragma once

#include <cstdint>
#include <string>

#include "soscert/errors.hpp"
#include "soscert/rational.hpp"

namespace soscert {

/// Prime field Z/P for word-sized P (P < 2^31).
template <std::uint32_t P>
class ModP {
 public:
  static constexpr std::uint32_t kModulus = P;

  constexpr ModP() = default;
  constexpr ModP(long v) : v_(reduce(v)) {}  // NOLINT
  explicit ModP(const Rational& q) {
    const ModP num(mpz_fdiv_ui(q.get_num_mpz_t(), P));
    const ModP den(mpz_fdiv_ui(q.get_den_mpz_t(), P));
    if (den.v_ == 0) throw DivisionByZero("denominator divisible by the field characteristic");
    // Floor division leaves a nonnegative residue, including for negative numerators.
    *this = num * den.inverse();
  }

  std::uint32_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  ModP inverse() const {
    if (v_ == 0) throw DivisionByZero("inverse of zero mod p");
    std::int64_t a = v_, m = P, x0 = 1, x1 = 0;
    while (m != 0) {
      const std::int64_t q = a / m;
      std::int64_t t = a - q * m;
      a = m;
      m = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
    }
    return ModP(static_cast<long>(x0));
  }

  friend ModP operator+(ModP a, ModP b) {
    std::uint32_t s = a.v_ + b.v_;
    if (s >= P) s -= P;
    return raw(s);
  }
  friend ModP operator-(ModP a, ModP b) { return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + P - b.v_); }
  friend ModP operator-(ModP a) { return raw(a.v_ == 0 ? 0 : P - a.v_); }
  friend ModP operator*(ModP a, ModP b) {
    return raw(static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v_) * b.v_ % P));
  }
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }
  ModP& operator+=(ModP o) { return *this = *this + o; }
  ModP& operator-=(ModP o) { return *this = *this - o; }
  ModP& operator*=(ModP o) { return *this = *this * o; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }

 private:
  static constexpr std::uint32_t reduce(long v) {
    long r = v % static_cast<long>(P);
    if (r < 0) r += P;
    return static_cast<std::uint32_t>(r);
  }
  static ModP raw(std::uint32_t v) {
    ModP m;
    m.v_ = v;
    return m;
  }
  std::uint32_t v_ = 0;
};

template <std::uint32_t P>
bool is_zero(ModP<P> a) {
  return a.is_zero();
}
template <std::uint32_t P>
ModP<P> inverse(ModP<P> a) {
  return a.inverse();
}
template <std::uint32_t P>
std::string to_string(ModP<P> a) {
  return std::to_string(a.value());
}

/// 2^31 - 1.
using Fp = ModP<2147483647U>;

}  // namespace soscert
