#include "soscert/univariate.hpp"

#include <utility>

#include "soscert/errors.hpp"

namespace soscert {

UPoly::UPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Rational UPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return Rational(0);
  return coeffs_[static_cast<std::size_t>(i)];
}

Rational UPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Interval UPoly::eval(const Interval& x) const {
  Interval acc{Rational(0)};
  for (int i = degree(); i >= 0; --i) {
    acc = acc + coeffs_[static_cast<std::size_t>(i)] * pow(x, static_cast<unsigned>(i));
  }
  return acc;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[static_cast<std::size_t>(i)] * i);
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  std::vector<Rational> c = coeffs_;
  const Rational lead = c.back();
  for (auto& x : c) x /= lead;
  return UPoly(std::move(c));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UPoly(std::move(c));
}

void UPoly::divmod(const UPoly& a, const UPoly& b, UPoly& quot, UPoly& rem) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  std::vector<Rational> r = a.coeffs_;
  const int db = b.degree();
  std::vector<Rational> q(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0);
  for (int i = a.degree(); i >= db; --i) {
    const Rational c = r[static_cast<std::size_t>(i)] / b.leading();
    q[static_cast<std::size_t>(i - db)] = c;
    if (sgn(c) == 0) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs_[static_cast<std::size_t>(j)];
  }
  quot = UPoly(std::move(q));
  rem = UPoly(std::move(r));
}

std::string UPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (out.empty()) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    const bool unit = mag == 1 && i > 0;
    if (!unit) out += soscert::to_string(mag);
    if (i > 0) {
      if (!unit) out += "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

UPoly pow(const UPoly& p, unsigned n) {
  UPoly r(std::vector<Rational>{Rational(1)});
  for (unsigned i = 0; i < n; ++i) r = r * p;
  return r;
}

std::vector<UPoly> sturm_chain(const UPoly& p) {
  std::vector<UPoly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    UPoly q, r;
    UPoly::divmod(chain[chain.size() - 2], chain.back(), q, r);
    chain.push_back(UPoly() - r);
  }
  chain.pop_back();
  return chain;
}

namespace {

int sign_changes(const std::vector<UPoly>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sgn(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_real_roots(const std::vector<UPoly>& chain, const Rational& a, const Rational& b) {
  return sign_changes(chain, a) - sign_changes(chain, b);
}

Rational cauchy_bound(const UPoly& p) {
  if (p.degree() < 1) return Rational(1);
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(i) / p.leading())));
  return m + 1;
}

std::vector<Interval> isolate_real_roots(const UPoly& p) {
  const auto chain = sturm_chain(p);
  std::vector<Interval> out;
  const Rational bound = cauchy_bound(p);
  // Depth-first bisection, visiting the upper half first for descending order.
  std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    const int n = count_real_roots(chain, lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      out.emplace_back(lo, hi);
      continue;
    }
    const Rational mid = (lo + hi) / 2;
    stack.emplace_back(lo, mid);
    stack.emplace_back(mid, hi);
  }
  return out;
}

Interval refine_root(const UPoly& p, Interval iv, const Rational& max_width) {
  // A root at hi (half-open convention) is caught by the exact zero test.
  if (sgn(p.eval(iv.hi)) == 0) return Interval(iv.hi);
  int s_hi = sgn(p.eval(iv.hi));
  while (iv.width() > max_width) {
    const Rational mid = iv.midpoint();
    const int s_mid = sgn(p.eval(mid));
    if (s_mid == 0) return Interval(mid);
    if (s_mid == s_hi) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
  }
  return iv;
}

}  // namespace soscert
