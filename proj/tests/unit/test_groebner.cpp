#include <random>

#include "doctest.h"
#include "soscert/construction.hpp"
#include "soscert/groebner.hpp"
#include "support/random.hpp"

using namespace soscert;

namespace {

const Variables& V() {
  static const Variables v = Variables::standard();
  return v;
}

QPoly P(const char* s) { return parse_polynomial<Rational>(s, V()); }

QPoly fermat() {
  QPoly f(V());
  for (std::size_t i = 0; i < 8; ++i) f += QPoly::monomial(V(), Monomial::variable(i, 4));
  return f;
}

GroebnerBasis<Rational> gb(std::vector<QPoly> gens, MonomialOrder order = kDegRevLex, GroebnerOptions opts = {}) {
  const auto g = buchberger(Ideal<Rational>{std::move(gens), order}, opts);
  if (g.elements.size() <= 60) CHECK(satisfies_buchberger_criterion(g));
  return g;
}

}  // namespace

TEST_CASE("buchberger examples") {
  CHECK(gb({P("x0"), P("y0")}).elements == std::vector<QPoly>{P("x0"), P("y0")});
  // Hand elimination: sum and difference give 2 x0^2 and 2 x1^2.
  CHECK(gb({P("x0^2 - x1^2"), P("x0^2 + x1^2")}).elements == std::vector<QPoly>{P("x0^2"), P("x1^2")});
  const auto fj = gb(jacobian_generators(fermat()));
  REQUIRE(fj.elements.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(fj.elements[i] == QPoly::monomial(V(), Monomial::variable(i, 3)));
  // Lex: x0 = x1^2 from x0 * (x0 x1) = x0^2 x1 = x1^2, then x1^3 = 1.
  CHECK(gb({P("x0^2 - x1"), P("x0*x1 - 1")}, kLex).elements == std::vector<QPoly>{P("x0 - x1^2"), P("x1^3 - 1")});
  CHECK(gb({P("x0 - 1"), P("x0")}).elements == std::vector<QPoly>{P("1")});
  CHECK_THROWS_AS(buchberger(Ideal<Rational>{}), InputError);
  CHECK_THROWS_AS(buchberger(Ideal<Rational>{{P("x0 + 1")}}, {3, 0}), InputError);
}

TEST_CASE("normal forms") {
  CHECK(normal_form(P("x0^2"), gb({P("x0")})).is_zero());
  CHECK(normal_form(P("x0 + 1"), gb({P("x0^2")})) == P("x0 + 1"));
  const QPoly h = construction::h();
  const auto jh = gb(jacobian_generators(h), kDegRevLex, {4, 0});
  CHECK(jh.status == GroebnerStatus::truncated);
  // Euler: 4 h = sum v_i dh/dv_i.
  QPoly euler(V());
  const auto parts = jacobian_generators(h);
  for (std::size_t i = 0; i < 8; ++i) euler += QPoly::variable(V(), i) * parts[i];
  CHECK(euler == h.scaled(Rational(4)));
  CHECK(normal_form(h, jh).is_zero());
}

TEST_CASE("variable powers") {
  auto m = variable_power_membership(gb({P("x0^3")}), 0, 8);
  REQUIRE(m);
  CHECK(m->exponent == 3);
  const auto fj = gb(jacobian_generators(fermat()));
  for (std::size_t v = 0; v < 8; ++v) CHECK(variable_power_membership(fj, v, 8)->exponent == 3);
  CHECK_FALSE(variable_power_membership(gb({P("x0*x1")}), 0, 8));
  CHECK_THROWS_AS(variable_power_membership(gb({P("x0^2"), P("x0*x1 + x1^2")}, kDegRevLex, {2, 0}), 0, 4), InputError);
}

TEST_CASE("projective smoothness") {
  const auto fr = projective_smoothness(fermat());
  CHECK(fr.status == SmoothnessStatus::nonsingular);
  for (const auto& e : fr.exponents) CHECK(e == 3u);
  CHECK(projective_smoothness(P("x0^2*x1^2")).status == SmoothnessStatus::not_certified);
  // The real zero (0,0,1,0) of f is a singular point.
  CHECK(projective_smoothness(construction::f()).status == SmoothnessStatus::not_certified);
  CHECK_THROWS_AS(projective_smoothness(P("x0^2 + x1")), InputError);
}

TEST_CASE("h: the Jacobian ideal contains every form of degree 17, none of x_i^16 mod p") {
  const QPoly h = construction::h();
  const auto ms = modular_smoothness(h, 17);
  CHECK(ms.status == SmoothnessStatus::nonsingular);
  CHECK(ms.vanishing_degree == 17u);
  REQUIRE(ms.exponents.size() == 8);
  for (const auto& e : ms.exponents) CHECK(e == 17u);
  const auto low = modular_smoothness(h, 8);
  CHECK(low.status == SmoothnessStatus::not_certified);
}

TEST_CASE("timeout is reported, never a verdict") {
  const auto r = projective_smoothness(construction::h(), 17, 0.05);
  CHECK(r.status == SmoothnessStatus::inconclusive);
  CHECK(r.basis.status == GroebnerStatus::timed_out);
}

TEST_CASE("property: membership, idempotence, cofactors, agreement mod p") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-3, 3);
  const Variables v4 = Variables::first(4);
  auto random_poly = [&](unsigned deg) {
    QPoly p(v4);
    for (const auto& m : monomial_basis(4, deg))
      if (rng() % 3 == 0) p += QPoly::monomial(v4, m, Rational(coef(rng)));
    return p;
  };
  for (int t = 0; t < 12; ++t) {
    std::vector<QPoly> gens;
    for (int k = 0; k < 3; ++k) {
      QPoly g = random_poly(2 + (t + k) % 2);
      if (t % 2) g += random_poly(1);
      if (!g.is_zero()) gens.push_back(g);
    }
    if (gens.empty()) continue;
    const auto g = buchberger(Ideal<Rational>{gens});
    REQUIRE(g.status == GroebnerStatus::complete);
    if (g.elements.size() <= 60) CHECK(satisfies_buchberger_criterion(g));
    // Every combination of the generators reduces to zero.
    QPoly comb(v4);
    for (const auto& x : gens) comb += x * random_poly(1);
    CHECK(normal_form(comb, g).is_zero());
    const QPoly p = random_poly(4) + random_poly(3);
    const auto d = divide(p, g);
    CHECK(normal_form(d.remainder, g) == d.remainder);
    CHECK(verify_cofactors(p - d.remainder, g.elements, d.quotients));
    // Leading monomials agree with the computation mod p.
    std::vector<Polynomial<Fp>> gp;
    for (const auto& x : gens) gp.push_back(reduce_mod_p(x));
    const auto g2 = buchberger(Ideal<Fp>{gp});
    REQUIRE(g2.elements.size() == g.elements.size());
    for (std::size_t i = 0; i < g.elements.size(); ++i)
      CHECK(g2.elements[i].leading_term().first == g.elements[i].leading_term().first);
  }
}

TEST_CASE("property: power memberships carry verified cofactors") {
  const auto fj = gb(jacobian_generators(fermat()));
  for (std::size_t v = 0; v < 8; ++v) {
    const auto m = variable_power_membership(fj, v, 8);
    REQUIRE(m);
    CHECK(verify_cofactors(QPoly::monomial(V(), Monomial::variable(v, m->exponent)), fj.elements, m->transcript.quotients));
  }
  const QPoly c = P("x0^3 - x1*x2*x3 + y0^2*y1");
  const auto g = gb({c, partial_derivative(c, 0), partial_derivative(c, 4)});
  for (std::size_t v = 0; v < 8; ++v) {
    const auto m = variable_power_membership(g, v, 6);
    if (m) CHECK(verify_cofactors(QPoly::monomial(V(), Monomial::variable(v, m->exponent)), g.elements, m->transcript.quotients));
  }
}
