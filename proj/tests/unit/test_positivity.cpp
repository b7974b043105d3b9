#include <random>

#include "doctest.h"
#include "soscert/construction.hpp"
#include "soscert/positivity.hpp"
#include "support/random.hpp"

using namespace soscert;
namespace cx = soscert::construction;

namespace {

QPoly P(const char* s) { return parse_polynomial<Rational>(s, cx::vars()); }

Rational eval_at(const QPoly& p, const std::vector<long>& v) {
  std::vector<Rational> pt(v.begin(), v.end());
  return evaluate<Rational, Rational>(p, std::span<const Rational>(pt));
}

const QPoly& f0() {
  static const QPoly p = substitute(cx::f(), std::map<std::size_t, QPoly>{{2, QPoly(cx::vars())}});
  return p;
}

}  // namespace

TEST_CASE("g zero locus") {
  const auto c = g_zero_locus();
  REQUIRE(c.signs);
  REQUIRE(c.signs->cases.size() == 8);
  // Direct evaluation of q4 = -y0^2 - y0y1 - y0y2 + y0y3 - y1y2 + y1y3 + y2y3.
  auto q4 = [](int a, int b, int c, int d) { return -a * a - a * b - a * c + a * d - b * c + b * d + c * d; };
  for (const auto& s : c.signs->cases) {
    CHECK(s.signs[3] == 1);
    CHECK(s.q4_value == q4(s.signs[0], s.signs[1], s.signs[2], s.signs[3]));
    CHECK_FALSE(is_zero(s.q4_value));
  }
  CHECK(c.signs->cases.front().q4_value == -1);  // (1, 1, 1, 1)
  CHECK(c.signs->cases.back().q4_value == -7);   // (-1, -1, -1, 1)
  CHECK(eval_at(cx::g(), {0, 0, 0, 0, 0, 0, 0, 0}) == 0);
  CHECK(eval_at(cx::g(), {0, 0, 0, 0, 1, 1, 1, 1}) == 1);
  CHECK(check_positivity(c, cx::g()));
  auto bad = c;
  bad.signs->cases[2].q4_value += 1;
  CHECK_FALSE(check_positivity(bad, cx::g()));
}

TEST_CASE("property: sign enumeration covers the real solutions of q1 = q2 = q3 = 0") {
  // Every real solution is c * (e0, e1, e2, e3) with e in {-1, 1}^4; q4 is quadratic, so
  // q4(c e) = c^2 q4(e) = c^2 q4(-e). Exhaust all 16 patterns against the 8 cases.
  const auto c = g_zero_locus();
  std::mt19937_64 rng(1);
  for (int mask = 0; mask < 16; ++mask) {
    std::array<int, 4> e{mask & 8 ? -1 : 1, mask & 4 ? -1 : 1, mask & 2 ? -1 : 1, mask & 1 ? -1 : 1};
    const Rational scale = testing::random_rational(rng) + Rational(11);
    std::vector<Rational> pt(8, Rational(0));
    for (int i = 0; i < 4; ++i) pt[4 + i] = scale * e[i];
    for (const auto& q : {cx::q1(), cx::q2(), cx::q3()}) CHECK(evaluate<Rational, Rational>(q, std::span<const Rational>(pt)) == 0);
    const int s = e[3];
    const auto it = std::find_if(c.signs->cases.begin(), c.signs->cases.end(), [&](const SignCase& k) {
      return k.signs[0] == s * e[0] && k.signs[1] == s * e[1] && k.signs[2] == s * e[2];
    });
    REQUIRE(it != c.signs->cases.end());
    CHECK(evaluate<Rational, Rational>(cx::q4(), std::span<const Rational>(pt)) == scale * scale * it->q4_value);
  }
}

TEST_CASE("interior Gram certificates") {
  const auto c = interior_gram_certificate(f0());
  REQUIRE(c);
  CHECK(c->gram->basis.size() == 6);
  CHECK(c->gram->certificate.rank() == 6);
  CHECK(check_positivity(*c, f0()));
  const auto sq = interior_gram_certificate(P("x0^4 + 2*x0^2*x1^2 + x1^4"));
  REQUIRE(sq);
  CHECK(sq->gram->certificate.rank() == 3);
  CHECK_FALSE(interior_gram_certificate(P("x0^2*x1^2")));
  CHECK_THROWS_AS(interior_gram_certificate(P("x0^3")), InputError);
  auto tampered = *c;
  tampered.gram->gram(0, 0) += 1;
  CHECK_FALSE(check_positivity(tampered, f0()));
}

TEST_CASE("interval branch-and-bound") {
  const auto a = interval_bnb(P("x0^2 + x1^2"), {0, 1});
  CHECK(a.status == BnbStatus::certified);
  CHECK(a.boxes_examined == 4);
  CHECK(check_positivity(*a.certificate, P("x0^2 + x1^2")));

  const auto b = interval_bnb(f0(), {0, 1, 3});
  REQUIRE(b.status == BnbStatus::certified);
  CHECK(check_positivity(*b.certificate, f0()));
  CHECK(b.boxes_examined <= 100000);

  const auto c = interval_bnb(P("x0^2 - x1^2"), {0, 1});
  REQUIRE(c.status == BnbStatus::counterbox);
  const Box& box = *c.counterbox;
  CHECK(box[0].contains(Rational(0)));
  CHECK((box[1].contains(Rational(1)) || box[1].contains(Rational(-1))));
  CHECK(sgn(evaluate_on_box(P("x0^2 - x1^2"), {0, 1}, box).hi) < 0);

  CHECK(interval_bnb(f0(), {0, 1, 3}, 10).status == BnbStatus::inconclusive);
  CHECK_THROWS_AS(interval_bnb(f0(), {0, 1}), InputError);
  // The faces alone do not cover the box once a leaf is removed.
  auto cert = *b.certificate;
  cert.cover->leaves.pop_back();
  CHECK_FALSE(check_positivity(cert, f0()));
}

TEST_CASE("strict positivity of h") {
  const auto c = strict_positivity_h();
  for (const auto& [name, ok] : c.checks) {
    INFO(name);
    CHECK(ok);
  }
  CHECK(check_positivity(c, cx::h()));
  CHECK(eval_at(cx::h(), {0, 0, 0, 0, 0, 0, 0, 0}) == 0);
  // f alone vanishes at (0, 0, 1, 0); g contributes q3^2 = 1 there and r = 0.
  CHECK(eval_at(cx::f(), {0, 0, 1, 0, 0, 0, 0, 0}) == 0);
  CHECK(eval_at(cx::h(), {0, 0, 1, 0, 0, 0, 1, 0}) == 1);
  CHECK_FALSE(check_positivity(c, cx::f()));
}

TEST_CASE("property: interval evaluation encloses exact values") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 999);
  const std::vector<std::size_t> vars{0, 1, 3};
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    Box box;
    std::vector<Rational> pt(8, Rational(0));
    for (std::size_t k = 0; k < 3; ++k) {
      Rational a = testing::random_rational(rng), b = testing::random_rational(rng);
      if (a > b) std::swap(a, b);
      box.emplace_back(a, b);
      pt[vars[k]] = a + (b - a) * Rational(pick(rng), 999);
    }
    const QPoly& p = t % 2 ? f0() : cx::q4() * cx::q4() - cx::q1();
    const auto used = t % 2 ? vars : std::vector<std::size_t>{4, 5, 6, 7};
    if (t % 2 == 0) {
      box.emplace_back(Interval(Rational(-1), Rational(2)));
      pt = std::vector<Rational>(8, Rational(0));
      for (std::size_t k = 0; k < 4; ++k) pt[4 + k] = box[k].lo + box[k].width() * Rational(pick(rng), 999);
    }
    const Interval v = evaluate_on_box(p, used, box);
    CHECK(v.contains(evaluate<Rational, Rational>(p, std::span<const Rational>(pt))));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("property: Gram and branch-and-bound agree on random quartics") {
  std::mt19937_64 rng(17);
  const Variables v = cx::vars();
  int positive = 0, indefinite = 0;
  for (int t = 0; t < 20; ++t) {
    QPoly p(v);
    if (t % 2 == 0) {
      // Visibly positive: a generic sum of squares plus a multiple of (x0^2 + x1^2 + x3^2)^2.
      for (int k = 0; k < 6; ++k) {
        QPoly s(v);
        for (const auto& m : monomials_in({0, 1, 3}, 2)) s += QPoly::monomial(v, m, testing::random_rational(rng, 3, 2));
        p += s * s;
      }
      p += P("x0^2 + x1^2 + x3^2") * P("x0^2 + x1^2 + x3^2");
    } else {
      // Visibly indefinite: negative at (1, 0, 0).
      for (const auto& m : monomials_in({0, 1, 3}, 4)) p += QPoly::monomial(v, m, testing::random_rational(rng, 3, 2));
      p += QPoly::monomial(v, Monomial::variable(0, 4), Rational(-1) - p.coefficient(Monomial::variable(0, 4)));
    }
    const bool gram = interior_gram_certificate(p).has_value();
    const auto bnb = interval_bnb(p, {0, 1, 3});
    INFO(to_string(p));
    if (t % 2 == 0) {
      CHECK(gram);
      CHECK(bnb.status == BnbStatus::certified);
      ++positive;
    } else {
      CHECK_FALSE(gram);
      CHECK(bnb.status == BnbStatus::counterbox);
      ++indefinite;
    }
  }
  CHECK(positive == 10);
  CHECK(indefinite == 10);
}
