#include "soscert/monomial.hpp"

#include <algorithm>

#include "soscert/errors.hpp"

namespace soscert {

Monomial Monomial::from_exponents(std::span<const unsigned> exps) {
  if (exps.size() > kMaxVars) throw InputError("more than 8 variables");
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] > kMaxExponent) throw InputError("exponent exceeds 127");
    m.bits_ |= static_cast<std::uint64_t>(exps[i]) << (8 * i);
    m.degree_ += exps[i];
  }
  return m;
}

Monomial Monomial::variable(std::size_t i, unsigned e) {
  if (i >= kMaxVars) throw InputError("variable index out of range");
  if (e > kMaxExponent) throw InputError("exponent exceeds 127");
  Monomial m;
  m.bits_ = static_cast<std::uint64_t>(e) << (8 * i);
  m.degree_ = e;
  return m;
}

std::array<unsigned, kMaxVars> Monomial::exponents() const {
  std::array<unsigned, kMaxVars> e{};
  for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = (*this)[i];
  return e;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  m.bits_ = bits_ + o.bits_;
  m.degree_ = degree_ + o.degree_;
  // Byte-wise sums stay below 256 since both inputs are <= 127; flag any that pass 127.
  if ((m.bits_ & 0x8080808080808080ULL) != 0) throw InputError("exponent exceeds 127");
  return m;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial m;
  m.bits_ = bits_ - o.bits_;
  m.degree_ = degree_ - o.degree_;
  return m;
}

Monomial Monomial::lcm(const Monomial& o) const {
  std::array<unsigned, kMaxVars> e{};
  for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = std::max((*this)[i], o[i]);
  return from_exponents(e);
}

Monomial Monomial::gcd(const Monomial& o) const {
  std::array<unsigned, kMaxVars> e{};
  for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = std::min((*this)[i], o[i]);
  return from_exponents(e);
}

Monomial Monomial::with_exponent(std::size_t i, unsigned e) const {
  auto exps = exponents();
  exps.at(i) = e;
  return from_exponents(exps);
}

namespace {

void enumerate(std::size_t n, std::size_t i, unsigned left, std::array<unsigned, kMaxVars>& cur,
               std::vector<Monomial>& out) {
  if (i + 1 == n) {
    cur[i] = left;
    out.push_back(Monomial::from_exponents(std::span<const unsigned>(cur.data(), n)));
    return;
  }
  for (unsigned e = left + 1; e-- > 0;) {
    cur[i] = e;
    enumerate(n, i + 1, left - e, cur, out);
  }
}

}  // namespace

std::vector<Monomial> monomial_basis(std::size_t n, unsigned d, MonomialOrder order) {
  if (n == 0 || n > kMaxVars) throw InputError("monomial_basis: variable count must be in 1..8");
  std::vector<Monomial> out;
  std::array<unsigned, kMaxVars> cur{};
  enumerate(n, 0, d, cur, out);
  std::sort(out.begin(), out.end(), order);
  return out;
}

std::size_t count_monomials(std::size_t n, unsigned d) {
  // C(n + d - 1, d)
  std::size_t r = 1;
  for (std::size_t k = 1; k <= d; ++k) r = r * (n - 1 + k) / k;
  return r;
}

}  // namespace soscert
