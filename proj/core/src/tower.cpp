#include "soscert/tower.hpp"

#include <map>
#include <mutex>
#include <optional>

#include "soscert/errors.hpp"
#include "soscert/expr_parser.hpp"

namespace soscert {

namespace {

using Qa = std::array<Rational, 3>;  // c0 + c1 a + c2 a^2

Qa qa_mul(const Qa& x, const Qa& y) {
  // a^3 = 2, a^4 = 2a
  return {x[0] * y[0] + 2 * (x[1] * y[2] + x[2] * y[1]),
          x[0] * y[1] + x[1] * y[0] + 2 * (x[2] * y[2]),
          x[0] * y[2] + x[1] * y[1] + x[2] * y[0]};
}

Qa qa_add(const Qa& x, const Qa& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }
Qa qa_sub(const Qa& x, const Qa& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }

bool qa_zero(const Qa& x) { return sgn(x[0]) == 0 && sgn(x[1]) == 0 && sgn(x[2]) == 0; }

// Multiplies by a^2: (c0 + c1 a + c2 a^2) a^2 = 2 c1 + 2 c2 a + c0 a^2.
Qa qa_times_a2(const Qa& x) { return {2 * x[1], 2 * x[2], x[0]}; }

Qa qa_inverse(const Qa& x) {
  // (p + q t + r t^2)^-1 in Q(t), t^3 = d, with d = 2.
  const Rational& p = x[0];
  const Rational& q = x[1];
  const Rational& r = x[2];
  const Rational norm = p * p * p + 2 * q * q * q + 4 * r * r * r - 6 * p * q * r;
  if (sgn(norm) == 0) throw DivisionByZero("inverse of zero in Q(a)");
  return {(p * p - 2 * q * r) / norm, (2 * r * r - p * q) / norm, (q * q - p * r) / norm};
}

Qa low(const AlgebraicNumber::Coords& c) { return {c[0], c[1], c[2]}; }
Qa high(const AlgebraicNumber::Coords& c) { return {c[3], c[4], c[5]}; }

AlgebraicNumber from_parts(const Qa& lo, const Qa& hi) {
  return AlgebraicNumber(AlgebraicNumber::Coords{lo[0], lo[1], lo[2], hi[0], hi[1], hi[2]});
}

}  // namespace

AlgebraicNumber AlgebraicNumber::alpha() { return basis(1); }
AlgebraicNumber AlgebraicNumber::beta() { return basis(3); }

AlgebraicNumber AlgebraicNumber::basis(std::size_t i) {
  AlgebraicNumber a;
  a.coords_.at(i) = 1;
  return a;
}

bool AlgebraicNumber::is_zero() const {
  for (const auto& c : coords_) {
    if (sgn(c) != 0) return false;
  }
  return true;
}

bool AlgebraicNumber::is_rational() const {
  for (std::size_t i = 1; i < kDegree; ++i) {
    if (sgn(coords_[i]) != 0) return false;
  }
  return true;
}

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
  for (std::size_t i = 0; i < kDegree; ++i) coords_[i] += o.coords_[i];
  return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) {
  for (std::size_t i = 0; i < kDegree; ++i) coords_[i] -= o.coords_[i];
  return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const AlgebraicNumber& o) {
  *this = *this * o;
  return *this;
}

AlgebraicNumber operator*(const AlgebraicNumber& x, const AlgebraicNumber& y) {
  if (x.is_rational()) return y.scaled(x.coords_[0]);
  if (y.is_rational()) return x.scaled(y.coords_[0]);
  const Qa x0 = low(x.coords_), x1 = high(x.coords_);
  const Qa y0 = low(y.coords_), y1 = high(y.coords_);
  // b^2 = (a^2 - 1) - a^2 b
  const Qa x0y0 = qa_mul(x0, y0);
  const Qa x1y1 = qa_mul(x1, y1);
  const Qa cross = qa_add(qa_mul(x0, y1), qa_mul(x1, y0));
  const Qa lo = qa_add(x0y0, qa_sub(qa_times_a2(x1y1), x1y1));
  const Qa hi = qa_sub(cross, qa_times_a2(x1y1));
  return from_parts(lo, hi);
}

AlgebraicNumber operator-(const AlgebraicNumber& a) {
  AlgebraicNumber r = a;
  for (auto& c : r.coords_) c = -c;
  return r;
}

AlgebraicNumber AlgebraicNumber::scaled(const Rational& c) const {
  AlgebraicNumber r = *this;
  for (auto& x : r.coords_) x *= c;
  return r;
}

AlgebraicNumber AlgebraicNumber::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero in K");
  if (is_rational()) return AlgebraicNumber(Rational(1) / coords_[0]);
  // x = x0 + x1 b; conjugate root b' = -a^2 - b, so x * (x0 - a^2 x1 - x1 b) = N in Q(a).
  const Qa x0 = low(coords_), x1 = high(coords_);
  const Qa conj_lo = qa_sub(x0, qa_times_a2(x1));
  const Qa conj_hi = {-x1[0], -x1[1], -x1[2]};
  // N = x0^2 - a^2 x0 x1 + (1 - a^2) x1^2
  const Qa x1sq = qa_mul(x1, x1);
  const Qa norm = qa_add(qa_sub(qa_mul(x0, x0), qa_times_a2(qa_mul(x0, x1))), qa_sub(x1sq, qa_times_a2(x1sq)));
  if (qa_zero(norm)) throw DivisionByZero("zero norm in K");
  const Qa inv = qa_inverse(norm);
  return from_parts(qa_mul(conj_lo, inv), qa_mul(conj_hi, inv));
}

AlgebraicNumber pow(const AlgebraicNumber& a, unsigned n) {
  AlgebraicNumber result(1L);
  AlgebraicNumber base = a;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

std::string to_string(const AlgebraicNumber& a) {
  static const char* const kNames[AlgebraicNumber::kDegree] = {"", "a", "a^2", "b", "a*b", "a^2*b"};
  std::string out;
  for (std::size_t i = 0; i < AlgebraicNumber::kDegree; ++i) {
    const Rational& c = a[i];
    if (sgn(c) == 0) continue;
    const Rational mag = abs(c);
    if (out.empty()) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    if (i == 0) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += kNames[i];
    } else {
      out += to_string(mag) + "*" + kNames[i];
    }
  }
  return out.empty() ? "0" : out;
}

AlgebraicNumber parse_algebraic(std::string_view text) {
  detail::ExprParser<AlgebraicNumber> parser(
      text, [](const Rational& q) { return AlgebraicNumber(q); },
      [&](std::string_view sym) -> AlgebraicNumber {
        if (sym == "a") return AlgebraicNumber::alpha();
        if (sym == "b") return AlgebraicNumber::beta();
        throw InputError("unknown symbol '" + std::string(sym) + "' in algebraic number");
      },
      [](const AlgebraicNumber& v, const Rational& c) { return v.scaled(c); },
      [](const AlgebraicNumber& v, unsigned n) { return pow(v, n); },
      [](const AlgebraicNumber& v, Rational& out) {
        if (!v.is_rational()) return false;
        out = v[0];
        return true;
      });
  return parser.parse();
}

AlgebraicNumber::Coords rational_coordinates(const AlgebraicNumber& a) { return a.coords(); }

AlgebraicNumber evaluate(const UPoly& p, const AlgebraicNumber& a) {
  AlgebraicNumber acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * a + AlgebraicNumber(p.coeff(i));
  return acc;
}

namespace {

using Vec6 = std::array<Rational, 6>;

// Coefficients c with sum c_i basis_i = target, or nullopt when target is outside the span.
std::optional<std::vector<Rational>> solve_in_span(const std::vector<Vec6>& basis, const Vec6& target) {
  const std::size_t k = basis.size();
  // Augmented 6 x (k+1) system, Gauss-Jordan.
  std::vector<std::vector<Rational>> m(6, std::vector<Rational>(k + 1));
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = basis[c][r];
    m[r][k] = target[r];
  }
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < k && row < 6; ++c) {
    std::size_t p = row;
    while (p < 6 && sgn(m[p][c]) == 0) ++p;
    if (p == 6) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < 6; ++r) {
      if (r == row || sgn(m[r][c]) == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t j = 0; j <= k; ++j) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < 6; ++r) {
    if (sgn(m[r][k]) != 0) return std::nullopt;
  }
  std::vector<Rational> coeffs(k);
  for (std::size_t i = 0; i < pivots.size(); ++i) coeffs[pivots[i]] = m[i][k];
  return coeffs;
}

}  // namespace

UPoly minpoly_over_q(const AlgebraicNumber& a) {
  std::vector<Vec6> powers{AlgebraicNumber(1L).coords()};
  AlgebraicNumber cur(1L);
  for (std::size_t k = 1; k <= AlgebraicNumber::kDegree; ++k) {
    cur *= a;
    if (auto c = solve_in_span(powers, cur.coords())) {
      std::vector<Rational> coeffs(k + 1);
      for (std::size_t i = 0; i < k; ++i) coeffs[i] = -(*c)[i];
      coeffs[k] = 1;
      return UPoly(std::move(coeffs));
    }
    powers.push_back(cur.coords());
  }
  throw std::logic_error("minpoly_over_q: no dependence within degree 6");
}

UPoly charpoly_over_q(const AlgebraicNumber& a) {
  constexpr std::size_t n = AlgebraicNumber::kDegree;
  // Column j of the multiplication matrix is a * basis_j.
  std::array<std::array<Rational, n>, n> mat{};
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = (a * AlgebraicNumber::basis(j)).coords();
    for (std::size_t i = 0; i < n; ++i) mat[i][j] = col[i];
  }
  // Faddeev-LeVerrier.
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  std::array<std::array<Rational, n>, n> mk{};
  for (std::size_t k = 1; k <= n; ++k) {
    std::array<std::array<Rational, n>, n> next{};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t l = 0; l < n; ++l) s += mat[i][l] * mk[l][j];
        next[i][j] = s;
      }
      next[i][i] += c[n - k + 1];
    }
    mk = next;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) tr += mat[i][l] * mk[l][i];
    }
    c[n - k] = -tr / static_cast<long>(k);
  }
  return UPoly(std::move(c));
}

namespace detail {

struct RefinementCache {
  std::mutex mu;
  std::map<unsigned, std::pair<Interval, Interval>> levels;
};

}  // namespace detail

std::array<TowerDescriptor, 2> beta_roots() {
  static const std::array<TowerDescriptor, 2> roots = [] {
    const UPoly alpha_poly(std::vector<Rational>{-2, 0, 0, 1});
    const auto alpha_ivs = isolate_real_roots(alpha_poly);
    if (alpha_ivs.size() != 1) throw std::logic_error("X^3 - 2 must have exactly one real root");
    const UPoly beta_poly = minpoly_over_q(AlgebraicNumber::beta());
    const auto beta_ivs = isolate_real_roots(beta_poly);
    if (beta_ivs.size() != 2) throw std::logic_error("b-minpoly must have exactly two real roots");
    std::array<TowerDescriptor, 2> out;
    for (int i = 0; i < 2; ++i) {
      TowerDescriptor& t = out[static_cast<std::size_t>(i)];
      t.beta_index_ = i;
      t.alpha_minpoly_ = alpha_poly;
      t.beta_minpoly_q_ = beta_poly;
      t.alpha_interval_ = alpha_ivs[0];
      t.beta_interval_ = beta_ivs[static_cast<std::size_t>(i)];
      t.cache_ = std::make_shared<detail::RefinementCache>();
    }
    return out;
  }();
  return roots;
}

std::pair<Interval, Interval> TowerDescriptor::refined(unsigned bits) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (auto it = cache_->levels.find(bits); it != cache_->levels.end()) return it->second;
  Interval a = alpha_interval_;
  Interval b = beta_interval_;
  // Start from the finest cached level below the requested one.
  if (auto it = cache_->levels.lower_bound(bits); it != cache_->levels.begin()) {
    --it;
    a = it->second.first;
    b = it->second.second;
  }
  Rational width(1);
  width /= Rational(Integer(1) << bits);
  a = refine_root(alpha_minpoly_, a, width);
  b = refine_root(beta_minpoly_q_, b, width);
  cache_->levels.emplace(bits, std::make_pair(a, b));
  return {a, b};
}

double TowerDescriptor::alpha_approx() const { return refined(64).first.midpoint().get_d(); }
double TowerDescriptor::beta_approx() const { return refined(64).second.midpoint().get_d(); }

Interval enclose(const AlgebraicNumber& x, const TowerDescriptor& tower, unsigned bits) {
  const auto [a, b] = tower.refined(bits);
  const Interval a2 = pow(a, 2);
  const auto& c = x.coords();
  const Interval lo = Interval(c[0]) + c[1] * a + c[2] * a2;
  const Interval hi = Interval(c[3]) + c[4] * a + c[5] * a2;
  return lo + hi * b;
}

int sign(const AlgebraicNumber& a, const TowerDescriptor& tower) {
  if (a.is_zero()) return 0;
  if (a.is_rational()) return sgn(a[0]);
  // Nonzero elements have nonzero embeddings, so some precision separates them from 0.
  for (unsigned bits = 64;; bits *= 2) {
    if (auto s = enclose(a, tower, bits).strict_sign()) return *s;
  }
}

double to_double(const AlgebraicNumber& a, const TowerDescriptor& tower) {
  return enclose(a, tower, 128).midpoint().get_d();
}

}  // namespace soscert
