#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "soscert/errors.hpp"
#include "soscert/interval.hpp"
#include "soscert/monomial.hpp"
#include "soscert/rational.hpp"
#include "soscert/tower.hpp"

namespace soscert {

/// Ordered list of variable names shared by all polynomials of one ring.
class Variables {
 public:
  Variables() : Variables(std::vector<std::string>{}) {}
  explicit Variables(std::vector<std::string> names);

  /// x0 x1 x2 x3 y0 y1 y2 y3
  static Variables standard();
  /// The first n names of the standard list.
  static Variables first(std::size_t n);

  std::size_t size() const { return names_->size(); }
  const std::string& name(std::size_t i) const { return names_->at(i); }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Variables& a, const Variables& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

namespace detail {

inline std::string coeff_text(const Rational& c) { return to_string(c); }
inline std::string coeff_text(const AlgebraicNumber& c) {
  return c.is_rational() ? to_string(c[0]) : "(" + to_string(c) + ")";
}
inline bool coeff_negative(const Rational& c) { return sgn(c) < 0; }
inline bool coeff_negative(const AlgebraicNumber& c) { return c.is_rational() && sgn(c[0]) < 0; }

template <class F>
F power(const F& x, unsigned e) {
  F r(1L);
  for (unsigned i = 0; i < e; ++i) r = r * x;
  return r;
}
inline Interval power(const Interval& x, unsigned e) { return pow(x, e); }

}  // namespace detail

/// Sparse multivariate polynomial over a field F (Rational or AlgebraicNumber), terms kept
/// sorted descending in degrevlex and free of zero coefficients.
template <class F>
class Polynomial {
 public:
  using Term = std::pair<Monomial, F>;

  Polynomial() = default;
  explicit Polynomial(Variables vars) : vars_(std::move(vars)) {}

  static Polynomial constant(Variables vars, const F& c) { return monomial(std::move(vars), Monomial(), c); }
  static Polynomial monomial(Variables vars, const Monomial& m, const F& c = F(1L)) {
    Polynomial p(std::move(vars));
    if (!soscert::is_zero(c)) p.terms_.emplace_back(m, c);
    return p;
  }
  static Polynomial variable(Variables vars, std::size_t i) {
    if (i >= vars.size()) throw InputError("variable index out of range");
    return monomial(std::move(vars), Monomial::variable(i));
  }
  /// Builds from arbitrary (monomial, coefficient) pairs, merging duplicates.
  static Polynomial from_terms(Variables vars, const std::vector<Term>& terms) {
    std::map<Monomial, F, MonomialOrder> acc(kDegRevLex);
    for (const auto& [m, c] : terms) accumulate(acc, m, c);
    return from_map(std::move(vars), acc);
  }

  const Variables& variables() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  F coefficient(const Monomial& m) const {
    for (const auto& [mm, c] : terms_) {
      if (mm == m) return c;
    }
    return F(0L);
  }

  /// -1 for the zero polynomial.
  int total_degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.front().first.degree()); }
  bool is_homogeneous() const {
    for (const auto& t : terms_) {
      if (t.first.degree() != terms_.front().first.degree()) return false;
    }
    return true;
  }
  const Term& leading_term() const { return terms_.at(0); }

  Polynomial scaled(const F& c) const {
    Polynomial r(vars_);
    if (soscert::is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [m, x] : terms_) r.terms_.emplace_back(m, x * c);
    return r;
  }
  Polynomial times_monomial(const Monomial& m) const {
    Polynomial r(vars_);
    r.terms_.reserve(terms_.size());
    for (const auto& [mm, c] : terms_) r.terms_.emplace_back(mm * m, c);
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }
  friend Polynomial operator-(const Polynomial& a) { return a.scaled(F(-1L)); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_compatible(a, b);
    std::map<Monomial, F, MonomialOrder> acc(kDegRevLex);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) accumulate(acc, ma * mb, ca * cb);
    }
    return from_map(a.vars_, acc);
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  template <class G, class Fn>
  Polynomial<G> map_coefficients(Fn&& fn) const {
    std::vector<typename Polynomial<G>::Term> out;
    out.reserve(terms_.size());
    for (const auto& [m, c] : terms_) out.emplace_back(m, fn(c));
    return Polynomial<G>::from_terms(vars_, out);
  }

 private:
  static void check_compatible(const Polynomial& a, const Polynomial& b) {
    if (!(a.vars_ == b.vars_)) throw InputError("polynomials over different variable lists");
  }

  static void accumulate(std::map<Monomial, F, MonomialOrder>& acc, const Monomial& m, const F& c) {
    auto [it, inserted] = acc.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  static Polynomial from_map(Variables vars, const std::map<Monomial, F, MonomialOrder>& acc) {
    Polynomial p(std::move(vars));
    p.terms_.reserve(acc.size());
    for (const auto& [m, c] : acc) {
      if (!soscert::is_zero(c)) p.terms_.emplace_back(m, c);
    }
    return p;
  }

  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    check_compatible(a, b);
    Polynomial r(a.vars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && kDegRevLex.greater(a.terms_[i].first, b.terms_[j].first))) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || kDegRevLex.greater(b.terms_[j].first, a.terms_[i].first)) {
        r.terms_.emplace_back(b.terms_[j].first, subtract ? F(-b.terms_[j].second) : b.terms_[j].second);
        ++j;
      } else {
        F c = subtract ? F(a.terms_[i].second - b.terms_[j].second) : F(a.terms_[i].second + b.terms_[j].second);
        if (!soscert::is_zero(c)) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  Variables vars_;
  std::vector<Term> terms_;
};

using QPoly = Polynomial<Rational>;
using KPoly = Polynomial<AlgebraicNumber>;

/// Evaluates p at a point whose coordinates live in a ring G containing F's values.
template <class F, class G>
G evaluate(const Polynomial<F>& p, std::span<const G> point) {
  if (point.size() != p.variables().size()) throw InputError("evaluation point has wrong length");
  G acc(Rational(0));
  for (const auto& [m, c] : p.terms()) {
    G t(c);
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (m[i] != 0) t = t * detail::power(point[i], m[i]);
    }
    acc = acc + t;
  }
  return acc;
}

inline Interval evaluate(const QPoly& p, std::span<const Interval> box) {
  if (box.size() != p.variables().size()) throw InputError("evaluation box has wrong length");
  Interval acc{Rational(0)};
  for (const auto& [m, c] : p.terms()) {
    Interval t{Rational(1)};
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (m[i] != 0) t = t * pow(box[i], m[i]);
    }
    acc = acc + c * t;
  }
  return acc;
}

template <class F>
Polynomial<F> partial_derivative(const Polynomial<F>& p, std::size_t var) {
  if (var >= p.variables().size()) throw InputError("derivative variable out of range");
  std::vector<typename Polynomial<F>::Term> out;
  for (const auto& [m, c] : p.terms()) {
    const unsigned e = m[var];
    if (e == 0) continue;
    out.emplace_back(m.with_exponent(var, e - 1), c * F(static_cast<long>(e)));
  }
  return Polynomial<F>::from_terms(p.variables(), out);
}

/// Replaces each assigned variable by its polynomial; unassigned variables stay.
template <class F>
Polynomial<F> substitute(const Polynomial<F>& p, const std::map<std::size_t, Polynomial<F>>& assignments) {
  Polynomial<F> result(p.variables());
  for (const auto& [m, c] : p.terms()) {
    auto exps = m.exponents();
    for (const auto& [var, _] : assignments) {
      if (var >= p.variables().size()) throw InputError("substitution variable out of range");
      exps[var] = 0;
    }
    Polynomial<F> t = Polynomial<F>::monomial(p.variables(), Monomial::from_exponents(exps), c);
    for (const auto& [var, q] : assignments) {
      for (unsigned k = 0; k < m[var]; ++k) t = t * q;
    }
    result += t;
  }
  return result;
}

inline KPoly to_tower(const QPoly& p) {
  return p.map_coefficients<AlgebraicNumber>([](const Rational& c) { return AlgebraicNumber(c); });
}

/// Demotes K coefficients to Q; nullopt if any coefficient has a non-rational coordinate.
std::optional<QPoly> to_rational(const KPoly& p);

template <class F>
std::string to_string(const Polynomial<F>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    const bool neg = detail::coeff_negative(c);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    out += detail::coeff_text(neg ? F(-c) : c);
    for (std::size_t i = 0; i < p.variables().size(); ++i) {
      if (m[i] == 0) continue;
      out += "*" + p.variables().name(i);
      if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
  }
  return out;
}

/// Parses `term (('+'|'-') term)*` over the given variables. Tower symbols a, b are only
/// accepted when F is AlgebraicNumber.
template <class F>
Polynomial<F> parse_polynomial(std::string_view text, const Variables& vars);

extern template QPoly parse_polynomial<Rational>(std::string_view, const Variables&);
extern template KPoly parse_polynomial<AlgebraicNumber>(std::string_view, const Variables&);

/// Multi-line polynomial document: `vars:` header, optional `field:` header, then one
/// polynomial per non-empty line.
struct PolynomialDocument {
  Variables vars = Variables::standard();
  bool tower_field = false;
  std::vector<std::string> lines;
};

inline constexpr std::string_view kTowerFieldHeader = "Q(a^3=2; b^2+a^2*b+1-a^2=0)";

PolynomialDocument parse_document(std::string_view text);
std::string format_document(const Variables& vars, bool tower_field, const std::vector<std::string>& polys);

}  // namespace soscert
