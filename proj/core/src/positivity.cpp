#include "soscert/positivity.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "soscert/construction.hpp"
#include "soscert/numopt.hpp"

namespace soscert {

std::string to_string(PositivityKind k) {
  switch (k) {
    case PositivityKind::sign_enumeration: return "sign-enumeration";
    case PositivityKind::interior_gram: return "interior-gram";
    case PositivityKind::interval_bnb: return "interval-bnb";
    case PositivityKind::composite: return "composite";
  }
  return "?";
}

std::string to_string(BnbStatus s) {
  switch (s) {
    case BnbStatus::certified: return "certified";
    case BnbStatus::counterbox: return "counterbox";
    case BnbStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

std::vector<std::size_t> support_variables(const QPoly& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.variables().size(); ++i)
    if (std::any_of(p.terms().begin(), p.terms().end(), [&](const auto& t) { return t.first[i] != 0; }))
      out.push_back(i);
  return out;
}

void require_support(const QPoly& p, const std::vector<std::size_t>& variables) {
  for (std::size_t v : support_variables(p))
    if (std::find(variables.begin(), variables.end(), v) == variables.end())
      throw InputError("polynomial involves variable " + p.variables().name(v) + " outside the box variables");
}

std::vector<Box> unit_faces(std::size_t n) {
  std::vector<Box> faces;
  for (std::size_t i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      Box b(n, Interval(Rational(-1), Rational(1)));
      b[i] = Interval(Rational(s));
      faces.push_back(std::move(b));
    }
  return faces;
}

std::optional<std::size_t> widest(const Box& b) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (sgn(b[i].width()) > 0 && (!best || b[i].width() > b[*best].width())) best = i;
  return best;
}

std::pair<Box, Box> split(const Box& b, std::size_t i) {
  Box lo = b, hi = b;
  const Rational mid = b[i].midpoint();
  lo[i] = Interval(b[i].lo, mid);
  hi[i] = Interval(mid, b[i].hi);
  return {std::move(lo), std::move(hi)};
}

std::string box_key(const Box& b) {
  std::string k;
  for (const auto& iv : b) k += to_string(iv.lo) + ":" + to_string(iv.hi) + ";";
  return k;
}

bool box_less(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].lo != b[i].lo) return a[i].lo < b[i].lo;
    if (a[i].hi != b[i].hi) return a[i].hi < b[i].hi;
  }
  return false;
}

}  // namespace

Interval evaluate_on_box(const QPoly& p, const std::vector<std::size_t>& variables, const Box& box) {
  if (box.size() != variables.size()) throw InputError("box dimension does not match the variable list");
  require_support(p, variables);
  std::vector<Interval> full(p.variables().size(), Interval(Rational(0)));
  for (std::size_t k = 0; k < variables.size(); ++k) full.at(variables[k]) = box[k];
  return evaluate(p, std::span<const Interval>(full));
}

SignEnumeration enumerate_g_signs(const std::vector<QPoly>& q) {
  if (q.size() != 4) throw InputError("expected q1..q4");
  const Variables& vars = q[0].variables();
  auto y = [&](std::size_t i, unsigned e) { return QPoly::monomial(vars, Monomial::variable(4 + i, e)); };
  SignEnumeration out;
  out.squares_forced = true;
  for (std::size_t i = 0; i < 3; ++i) out.squares_forced = out.squares_forced && q[i] + y(3, 2) == y(i, 2);
  std::map<std::size_t, QPoly> flip;
  for (std::size_t i = 0; i < 4; ++i) flip.emplace(4 + i, y(i, 1).scaled(Rational(-1)));
  out.q4_even = substitute(q[3], flip) == q[3];
  for (int mask = 0; mask < 8; ++mask) {
    SignCase c;
    c.signs = {mask & 4 ? -1 : 1, mask & 2 ? -1 : 1, mask & 1 ? -1 : 1, 1};
    std::vector<Rational> point(vars.size(), Rational(0));
    for (std::size_t i = 0; i < 4; ++i) point[4 + i] = c.signs[i];
    c.q4_value = evaluate<Rational, Rational>(q[3], std::span<const Rational>(point));
    out.cases.push_back(c);
  }
  return out;
}

bool check_sign_enumeration(const SignEnumeration& s, const std::vector<QPoly>& q) {
  const SignEnumeration fresh = enumerate_g_signs(q);
  if (!fresh.squares_forced || !fresh.q4_even || s.cases.size() != 8) return false;
  for (std::size_t k = 0; k < 8; ++k) {
    if (s.cases[k].signs != fresh.cases[k].signs || s.cases[k].q4_value != fresh.cases[k].q4_value) return false;
    if (is_zero(s.cases[k].q4_value)) return false;
  }
  return true;
}

PositivityCertificate g_zero_locus() {
  namespace cx = construction;
  PositivityCertificate c;
  c.kind = PositivityKind::sign_enumeration;
  c.signs = enumerate_g_signs({cx::q1(), cx::q2(), cx::q3(), cx::q4()});
  const bool all_nonzero =
      std::none_of(c.signs->cases.begin(), c.signs->cases.end(), [](const SignCase& s) { return is_zero(s.q4_value); });
  c.checks = {{"q1 = q2 = q3 = 0 forces equal squares", c.signs->squares_forced},
              {"q4 is even", c.signs->q4_even},
              {"q4 nonzero on all 8 sign patterns", all_nonzero}};
  c.statement = "g(y) = 0 implies y = 0";
  return c;
}

bool check_interior_gram(const InteriorGram& g, const QPoly& p) {
  if (g.gram.rows() != g.basis.size() || !g.gram.is_symmetric()) return false;
  if (!(gram_expand(p.variables(), g.basis, g.gram) == p)) return false;
  if (!check_certificate(g.gram, g.certificate, SignOracle<Rational>(rational_sign))) return false;
  return g.certificate.rank() == g.basis.size();
}

std::optional<PositivityCertificate> interior_gram_certificate(const QPoly& p, const InteriorGramOptions& options) {
  if (p.is_zero() || !p.is_homogeneous() || p.total_degree() % 2 != 0)
    throw InputError("interior Gram certificate needs a nonzero form of even degree");
  const auto basis = monomials_in(support_variables(p), static_cast<unsigned>(p.total_degree() / 2));
  const InteriorResult ir = interior_gram(basis, p, options.barrier);
  if (!ir.strictly_feasible) return std::nullopt;
  for (long den : options.denominators) {
    const QMatrix a = round_gram_to_exact(ir.gram, basis, p, den);
    const auto out = psd_decide(a);
    const auto* cert = std::get_if<PsdCertificate<Rational>>(&out);
    if (!cert || cert->rank() != basis.size()) continue;
    PositivityCertificate c;
    c.kind = PositivityKind::interior_gram;
    c.gram = InteriorGram{basis, a, *cert, den, ir.min_eigenvalue};
    c.statement = "positive definite rational Gram matrix";
    return c;
  }
  return std::nullopt;
}

BnbResult interval_bnb(const QPoly& p, const std::vector<std::size_t>& variables, std::size_t max_boxes) {
  if (p.is_zero() || !p.is_homogeneous()) throw InputError("interval branch-and-bound needs a nonzero form");
  if (variables.empty()) throw InputError("no box variables");
  require_support(p, variables);
  BnbResult out;
  BoxCover cover;
  cover.variables = variables;
  std::deque<Box> queue;
  for (auto& f : unit_faces(variables.size())) queue.push_back(std::move(f));
  while (!queue.empty()) {
    if (out.boxes_examined >= max_boxes) {
      out.status = BnbStatus::inconclusive;
      return out;
    }
    Box b = std::move(queue.front());
    queue.pop_front();
    ++out.boxes_examined;
    const Interval v = evaluate_on_box(p, variables, b);
    if (sgn(v.lo) > 0) {
      cover.leaves.push_back({std::move(b), v.lo});
      continue;
    }
    const auto axis = widest(b);
    if (sgn(v.hi) < 0 || (!axis && sgn(v.hi) <= 0)) {
      out.status = BnbStatus::counterbox;
      out.counterbox = std::move(b);
      return out;
    }
    auto [lo, hi] = split(b, *axis);
    queue.push_back(std::move(lo));
    queue.push_back(std::move(hi));
  }
  std::sort(cover.leaves.begin(), cover.leaves.end(), [](const BoxRecord& a, const BoxRecord& b) { return box_less(a.box, b.box); });
  cover.boxes_examined = out.boxes_examined;
  out.status = BnbStatus::certified;
  PositivityCertificate c;
  c.kind = PositivityKind::interval_bnb;
  c.cover = std::move(cover);
  c.statement = "positive on every face of the unit box";
  out.certificate = std::move(c);
  return out;
}

bool check_box_cover(const BoxCover& c, const QPoly& p) {
  if (c.variables.empty()) return false;
  std::map<std::string, const BoxRecord*> leaves;
  for (const auto& r : c.leaves) {
    if (r.box.size() != c.variables.size()) return false;
    if (!leaves.emplace(box_key(r.box), &r).second) return false;
  }
  std::size_t used = 0, visits = 0;
  const std::size_t limit = 2 * c.leaves.size() + 4 * c.variables.size();
  try {
    for (auto& face : unit_faces(c.variables.size())) {
      std::vector<Box> stack{std::move(face)};
      while (!stack.empty()) {
        if (++visits > limit) return false;
        Box b = std::move(stack.back());
        stack.pop_back();
        auto it = leaves.find(box_key(b));
        if (it != leaves.end()) {
          const Interval v = evaluate_on_box(p, c.variables, b);
          if (sgn(v.lo) <= 0 || v.lo != it->second->lower_bound) return false;
          ++used;
          continue;
        }
        const auto axis = widest(b);
        if (!axis) return false;
        auto [lo, hi] = split(b, *axis);
        stack.push_back(std::move(hi));
        stack.push_back(std::move(lo));
      }
    }
  } catch (const InputError&) {
    return false;
  }
  return used == c.leaves.size();
}

PositivityCertificate strict_positivity_h() {
  namespace cx = construction;
  const Variables& vars = cx::vars();
  PositivityCertificate c;
  c.kind = PositivityKind::composite;
  c.statement = "h(v) > 0 for every nonzero real v";

  const KPoly fk = cx::p1() * cx::p1() + cx::p2() * cx::p2() + cx::p3() * cx::p3();
  const QPoly g = cx::q1() * cx::q1() + cx::q2() * cx::q2() + cx::q3() * cx::q3() + cx::q4() * cx::q4();
  std::map<std::size_t, QPoly> y_zero, x2_zero{{2, QPoly(vars)}};
  for (std::size_t i = 4; i < 8; ++i) y_zero.emplace(i, QPoly(vars));
  const QPoly f0 = substitute(cx::f(), x2_zero);
  const auto f0_vars = support_variables(f0);

  c.checks.emplace_back("h = f + g + r^2", cx::h() == cx::f() + cx::g() + cx::r() * cx::r());
  c.checks.emplace_back("f = p1^2 + p2^2 + p3^2 with real coefficients", fk == to_tower(cx::f()));
  c.checks.emplace_back("g = q1^2 + q2^2 + q3^2 + q4^2", g == cx::g());
  c.checks.emplace_back("r(x, 0) = x2^2", substitute(cx::r(), y_zero) == QPoly::monomial(vars, Monomial::variable(2, 2)));
  c.checks.emplace_back("f(x0, x1, 0, x3) involves only x0, x1, x3", f0_vars == std::vector<std::size_t>{0, 1, 3});

  PositivityCertificate gz = g_zero_locus();
  c.checks.emplace_back("g = 0 forces y = 0", std::all_of(gz.checks.begin(), gz.checks.end(), [](const auto& k) { return k.second; }));
  c.parts.push_back(std::move(gz));

  BnbResult bnb = interval_bnb(f0, {0, 1, 3});
  c.checks.emplace_back("f(x0, x1, 0, x3) > 0 by interval branch-and-bound", bnb.status == BnbStatus::certified);
  if (bnb.certificate) c.parts.push_back(std::move(*bnb.certificate));

  auto gram = interior_gram_certificate(f0);
  c.checks.emplace_back("f(x0, x1, 0, x3) has a positive definite rational Gram matrix", gram.has_value());
  if (gram) c.parts.push_back(std::move(*gram));
  return c;
}

bool check_positivity(const PositivityCertificate& c, const QPoly& target) {
  namespace cx = construction;
  switch (c.kind) {
    case PositivityKind::sign_enumeration:
      return c.signs && target == cx::g() && check_sign_enumeration(*c.signs, {cx::q1(), cx::q2(), cx::q3(), cx::q4()});
    case PositivityKind::interior_gram:
      return c.gram && check_interior_gram(*c.gram, target);
    case PositivityKind::interval_bnb:
      return c.cover && check_box_cover(*c.cover, target);
    case PositivityKind::composite: {
      if (!(target == cx::h())) return false;
      if (!(cx::h() == cx::f() + cx::g() + cx::r() * cx::r())) return false;
      if (!(cx::g() == cx::q1() * cx::q1() + cx::q2() * cx::q2() + cx::q3() * cx::q3() + cx::q4() * cx::q4())) return false;
      const KPoly fk = cx::p1() * cx::p1() + cx::p2() * cx::p2() + cx::p3() * cx::p3();
      if (!(fk == to_tower(cx::f()))) return false;
      const QPoly f0 = substitute(cx::f(), std::map<std::size_t, QPoly>{{2, QPoly(cx::vars())}});
      bool signs = false, cover = false;
      for (const auto& part : c.parts) {
        if (part.kind == PositivityKind::sign_enumeration) signs = check_positivity(part, cx::g());
        if (part.kind == PositivityKind::interval_bnb) cover = check_positivity(part, f0);
        if (part.kind == PositivityKind::interior_gram && !check_positivity(part, f0)) return false;
      }
      std::map<std::size_t, QPoly> y_zero;
      for (std::size_t i = 4; i < 8; ++i) y_zero.emplace(i, QPoly(cx::vars()));
      return signs && cover && substitute(cx::r(), y_zero) == QPoly::monomial(cx::vars(), Monomial::variable(2, 2));
    }
  }
  return false;
}

}  // namespace soscert
