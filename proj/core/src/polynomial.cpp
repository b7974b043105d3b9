#include "soscert/polynomial.hpp"

#include <sstream>

#include "soscert/expr_parser.hpp"

namespace soscert {

Variables::Variables(std::vector<std::string> names)
    : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {
  if (names_->size() > kMaxVars) throw InputError("at most 8 variables are supported");
  for (std::size_t i = 0; i < names_->size(); ++i) {
    const auto& n = (*names_)[i];
    if (n == "a" || n == "b") throw InputError("variable names 'a' and 'b' are reserved for the tower");
    for (std::size_t j = 0; j < i; ++j) {
      if ((*names_)[j] == n) throw InputError("duplicate variable name '" + n + "'");
    }
  }
}

Variables Variables::standard() {
  static const Variables vars(std::vector<std::string>{"x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"});
  return vars;
}

Variables Variables::first(std::size_t n) {
  const auto& all = standard().names();
  if (n > all.size()) throw InputError("at most 8 variables are supported");
  return Variables(std::vector<std::string>(all.begin(), all.begin() + static_cast<long>(n)));
}

std::optional<std::size_t> Variables::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i) {
    if ((*names_)[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<QPoly> to_rational(const KPoly& p) {
  std::vector<QPoly::Term> terms;
  for (const auto& [m, c] : p.terms()) {
    if (!c.is_rational()) return std::nullopt;
    terms.emplace_back(m, c[0]);
  }
  return QPoly::from_terms(p.variables(), terms);
}

namespace {

template <class F>
F tower_symbol(std::string_view sym);

template <>
Rational tower_symbol<Rational>(std::string_view sym) {
  throw InputError("symbol '" + std::string(sym) + "' requires the tower field header");
}

template <>
AlgebraicNumber tower_symbol<AlgebraicNumber>(std::string_view sym) {
  return sym == "a" ? AlgebraicNumber::alpha() : AlgebraicNumber::beta();
}

template <class F>
bool constant_value(const Polynomial<F>& p, Rational& out);

template <>
bool constant_value<Rational>(const QPoly& p, Rational& out) {
  if (p.is_zero()) {
    out = 0;
    return true;
  }
  if (p.size() != 1 || !p.leading_term().first.is_one()) return false;
  out = p.leading_term().second;
  return true;
}

template <>
bool constant_value<AlgebraicNumber>(const KPoly& p, Rational& out) {
  if (p.is_zero()) {
    out = 0;
    return true;
  }
  if (p.size() != 1 || !p.leading_term().first.is_one() || !p.leading_term().second.is_rational()) return false;
  out = p.leading_term().second[0];
  return true;
}

}  // namespace

template <class F>
Polynomial<F> parse_polynomial(std::string_view text, const Variables& vars) {
  using V = Polynomial<F>;
  detail::ExprParser<V> parser(
      text, [&](const Rational& q) { return V::constant(vars, F(q)); },
      [&](std::string_view sym) -> V {
        if (auto i = vars.index_of(sym)) return V::variable(vars, *i);
        if (sym == "a" || sym == "b") return V::constant(vars, tower_symbol<F>(sym));
        throw InputError("unknown variable '" + std::string(sym) + "'");
      },
      [](const V& v, const Rational& c) { return v.scaled(F(c)); },
      [&](const V& v, unsigned n) {
        V r = V::constant(vars, F(1L));
        for (unsigned i = 0; i < n; ++i) r = r * v;
        return r;
      },
      [](const V& v, Rational& out) { return constant_value<F>(v, out); });
  return parser.parse();
}

template QPoly parse_polynomial<Rational>(std::string_view, const Variables&);
template KPoly parse_polynomial<AlgebraicNumber>(std::string_view, const Variables&);

PolynomialDocument parse_document(std::string_view text) {
  PolynomialDocument doc;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.rfind("vars:", 0) == 0) {
      std::istringstream names(line.substr(5));
      std::vector<std::string> v;
      std::string n;
      while (names >> n) v.push_back(n);
      doc.vars = Variables(std::move(v));
    } else if (line.rfind("field:", 0) == 0) {
      std::string f = line.substr(6);
      f.erase(0, f.find_first_not_of(' '));
      if (f == "Q") {
        doc.tower_field = false;
      } else if (f == kTowerFieldHeader) {
        doc.tower_field = true;
      } else {
        throw InputError("unsupported field header '" + f + "'");
      }
    } else {
      doc.lines.push_back(line);
    }
  }
  return doc;
}

std::string format_document(const Variables& vars, bool tower_field, const std::vector<std::string>& polys) {
  std::string out = "vars:";
  for (const auto& n : vars.names()) out += " " + n;
  out += "\n";
  if (tower_field) out += "field: " + std::string(kTowerFieldHeader) + "\n";
  for (const auto& p : polys) out += p + "\n";
  return out;
}

}  // namespace soscert
