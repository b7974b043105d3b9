#include <random>

#include "doctest.h"
#include "soscert/construction.hpp"
#include "soscert/gram.hpp"
#include "support/random.hpp"

using namespace soscert;
namespace cx = soscert::construction;

namespace {

const TowerDescriptor& tower() {
  static const auto roots = beta_roots();
  return roots[0];
}
const SignOracle<AlgebraicNumber> kSign = [](const AlgebraicNumber& a) { return sign(a, tower()); };
const std::function<double(const AlgebraicNumber&)> kFloat = [](const AlgebraicNumber& a) {
  return to_double(a, tower());
};
const SignOracle<Rational> kQSign = rational_sign;

template <class F>
Vector<F> coefficients(const Polynomial<F>& p, const std::vector<Monomial>& basis) {
  Vector<F> v;
  for (const auto& m : basis) v.push_back(p.coefficient(m));
  return v;
}

KMatrix outer_sum(const std::vector<Vector<AlgebraicNumber>>& vs) {
  KMatrix m(vs.front().size(), vs.front().size());
  for (const auto& v : vs)
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) += v[i] * v[j];
  return m;
}

ConstraintSpace<AlgebraicNumber> block_f_space() {
  return annihilator_space<AlgebraicNumber>({cx::p1(), cx::p2(), cx::p3()}, {0, 1, 2, 3}, 4);
}

// PSD functional of rank 4 on the x-block annihilating the corrected kernel vectors.
const PsdPointResult<AlgebraicNumber>& block_f_point() {
  static const auto result = [] {
    const auto ek = kernel_constrained_space(block_f_space(), cx::basis_x(), cx::kernel_us());
    const auto en = restrict_values(*ek, {{Monomial::variable(2, 4), AlgebraicNumber(cx::x2_quartic_moment())}});
    PsdPointOptions opt;
    opt.target_rank = 4;
    return find_psd_point(*en, cx::basis_x(), kSign, kFloat, opt);
  }();
  return result;
}

std::vector<Vector<AlgebraicNumber>> combined_kernel_vectors() {
  const auto basis = cx::basis_xy();
  std::vector<Vector<AlgebraicNumber>> out;
  for (const auto& u : cx::kernel_us()) {
    Vector<AlgebraicNumber> v(basis.size(), AlgebraicNumber(0));
    std::copy(u.begin(), u.end(), v.begin());
    out.push_back(std::move(v));
  }
  for (const auto& q : {cx::q1(), cx::q2(), cx::q3(), cx::q4(), cx::r(), cx::s1(), cx::s2(), cx::s3()})
    out.push_back(coefficients(to_tower(q), basis));
  return out;
}

}  // namespace

TEST_CASE("gram_expand") {
  const auto& vars = cx::vars();
  const auto bx = cx::basis_x();
  QPoly squares(vars);
  for (const auto& m : bx) squares += QPoly::monomial(vars, m * m);
  CHECK(gram_expand(vars, bx, QMatrix::identity(10)) == squares);
  CHECK(gram_expand(vars, bx, QMatrix(10, 10)).is_zero());

  std::vector<Vector<AlgebraicNumber>> ps;
  for (const auto& p : {cx::p1(), cx::p2(), cx::p3()}) ps.push_back(coefficients(p, bx));
  CHECK(gram_expand(vars, bx, outer_sum(ps)) == to_tower(cx::f()));
  CHECK_THROWS_AS(gram_expand(vars, bx, QMatrix::identity(3)), InputError);
}

TEST_CASE("sos_verify") {
  CHECK(sos_verify<AlgebraicNumber>({{1, cx::p1()}, {1, cx::p2()}, {1, cx::p3()}}, to_tower(cx::f()), kSign));
  CHECK(sos_verify<Rational>({{1, cx::q1()}, {1, cx::q2()}, {1, cx::q3()}, {1, cx::q4()}}, cx::g(), kQSign));
  const QPoly x0sq = parse_polynomial<Rational>("x0^2", cx::vars());
  CHECK_FALSE(sos_verify<Rational>({{1, x0sq}}, parse_polynomial<Rational>("x0^4 + x1^4", cx::vars()), kQSign));
  CHECK_FALSE(sos_verify<Rational>({{-1, x0sq}}, -(x0sq * x0sq), kQSign));
}

TEST_CASE("weighted_sos_from_certificate") {
  const auto& vars = cx::vars();
  const std::vector<Monomial> b2{Monomial::variable(0, 2), Monomial::variable(0) * Monomial::variable(1)};
  const QMatrix d = QMatrix::from_rows({{4, 0}, {0, 9}});
  const auto parts = weighted_sos_from_certificate(vars, b2, d, std::get<PsdCertificate<Rational>>(psd_decide(d)));
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].first == 4);
  CHECK(parts[0].second == QPoly::monomial(vars, b2[0]));
  CHECK(parts[1].first == 9);
  CHECK(parts[1].second == QPoly::monomial(vars, b2[1]));

  const QMatrix qy = cx::q_y();
  const auto cert = std::get<PsdCertificate<Rational>>(psd_decide(qy));
  const auto sos = weighted_sos_from_certificate(vars, cx::basis_y(), qy, cert);
  CHECK(sos.size() == 6);
  CHECK(sos_verify(sos, gram_expand(vars, cx::basis_y(), qy), kQSign));

  const QMatrix vvt = QMatrix::from_rows({{1, 2}, {2, 4}});
  const auto one = weighted_sos_from_certificate(vars, b2, vvt, std::get<PsdCertificate<Rational>>(psd_decide(vvt)));
  CHECK(one.size() == 1);
  CHECK_THROWS_AS(weighted_sos_from_certificate(vars, b2, d, std::get<PsdCertificate<Rational>>(psd_decide(vvt))),
                  InputError);
}

TEST_CASE("moment functionals and matrices") {
  auto cols = std::make_shared<const MonomialList>(monomials_in({0, 1}, 2));
  MomentFunctional<Rational> l{cols, {1, 0, 1}};  // x0^2, x0x1, x1^2
  const std::vector<Monomial> lin{Monomial::variable(0), Monomial::variable(1)};
  CHECK(moment_matrix(l, lin) == QMatrix::identity(2));
  CHECK(l.apply(parse_polynomial<Rational>("3*x0^2 - x1^2 + 5*x0*x1", cx::vars())) == 2);
  CHECK_THROWS_AS(l(Monomial::variable(2, 2)), InputError);
  CHECK_THROWS_AS(MonomialList({Monomial::variable(0), Monomial::variable(0)}), InputError);
}

TEST_CASE("annihilator spaces") {
  const auto e = block_f_space();
  CHECK(e.ambient_dimension() == 35);
  CHECK(e.dimension() == 8);
  CHECK(e.codimension() == 27);
  CHECK(annihilator_space<Rational>({}, {0, 1, 2, 3}, 4).dimension() == 35);
  const auto g_space = annihilator_space<Rational>({cx::q1(), cx::q2(), cx::q3(), cx::q4()}, {4, 5, 6, 7}, 4);
  // The y-block functional lies in the annihilator of q1..q4.
  const auto qy = cx::q_y();
  const auto by = cx::basis_y();
  std::vector<std::pair<Monomial, Rational>> values;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i; j < 10; ++j) values.emplace_back(by[i] * by[j], qy(i, j));
  CHECK(restrict_values(g_space, values).has_value());
  CHECK_THROWS_AS(annihilator_space<Rational>({cx::q1()}, {0, 1, 2, 3}, 4), InputError);
}

TEST_CASE("block f: kernel-constrained PSD functional of rank 4") {
  const auto e = block_f_space();
  const auto ek = kernel_constrained_space(e, cx::basis_x(), cx::kernel_us());
  REQUIRE(ek);
  CHECK(ek->dimension() == 4);
  CHECK(kernel_constrained_space(e, cx::basis_x(), {Vector<AlgebraicNumber>(10, AlgebraicNumber(0))})->dimension() ==
        8);

  const auto& res = block_f_point();
  REQUIRE(res.found);
  CHECK(res.certificate.rank() == 4);
  CHECK(res.certificate.kernel.size() == 6);
  CHECK(res.functional.apply(to_tower(cx::f())) == AlgebraicNumber(0));
  CHECK(check_certificate(res.moment, res.certificate, kSign));
  const auto ker = nullspace(res.moment);
  for (const auto& u : cx::kernel_us()) CHECK(in_span(ker, u));
  // Every square in the K-decomposition of f lies in the kernel.
  for (const auto& p : {cx::p1(), cx::p2(), cx::p3()}) CHECK(is_zero_vector(res.moment * coefficients(p, cx::basis_x())));
  // The functional is in the kernel-constrained space before normalization.
  auto with_point = ek->directions;
  with_point.push_back(res.functional.values);
  CHECK(span_rank(with_point, 35) == 4);
}

TEST_CASE("combined block: 70, 62 and a PSD point with 14-dimensional kernel") {
  std::vector<KPoly> polys{cx::p1(), cx::p2(), cx::p3()};
  for (const auto& q : {cx::q1(), cx::q2(), cx::q3(), cx::q4(), cx::r()}) polys.push_back(to_tower(q));
  const auto s = annihilator_space(polys, {0, 1, 2, 3, 4, 5, 6, 7}, 4);
  CHECK(s.dimension() == 70);
  const KMatrix qx = block_f_point().moment;
  const auto s62 = restrict_blocks<AlgebraicNumber>(s, {{cx::basis_x(), qx}, {cx::basis_y(), to_tower(cx::q_y())}});
  REQUIRE(s62);
  CHECK(s62->dimension() == 62);
  CHECK(s62->affine);

  // Restricting by a block the space already satisfies changes nothing.
  const auto again = restrict_blocks<AlgebraicNumber>(*s62, {{cx::basis_x(), qx}});
  REQUIRE(again);
  CHECK(again->dimension() == 62);

  // A perturbed x-block violates the annihilator conditions.
  KMatrix bad = qx;
  bad(0, 0) += AlgebraicNumber(1);
  CHECK_FALSE(restrict_blocks<AlgebraicNumber>(s, {{cx::basis_x(), bad}}).has_value());
  // A non-Hankel block is reported as inconsistent.
  KMatrix skew = qx;
  skew(0, 4) += AlgebraicNumber(1);
  skew(4, 0) += AlgebraicNumber(1);
  CHECK_FALSE(restrict_blocks<AlgebraicNumber>(s, {{cx::basis_x(), skew}}).has_value());

  PsdPointOptions exact_only;
  exact_only.numeric_fallback = false;
  const auto basis = cx::basis_xy();
  const auto res = find_psd_point(*s62, basis, kSign, kFloat, exact_only);
  REQUIRE(res.found);
  CHECK(res.route == "canonical");
  CHECK(res.certificate.kernel.size() == 14);
  const auto ker = nullspace(res.moment);
  for (const auto& v : combined_kernel_vectors()) CHECK(in_span(ker, v));

  const auto s13 = kernel_constrained_space(*s62, basis, combined_kernel_vectors());
  REQUIRE(s13);
  CHECK(s13->dimension() == 13);
  CHECK(find_psd_point(*s13, basis, kSign, kFloat, exact_only).found);
}

TEST_CASE("find_psd_point returns a PSD single point immediately") {
  auto cols = std::make_shared<const MonomialList>(monomials_in({0, 1}, 2));
  ConstraintSpace<Rational> s{cols, {1, 0, 1}, {}, true};
  const std::vector<Monomial> lin{Monomial::variable(0), Monomial::variable(1)};
  const std::function<double(const Rational&)> tf = [](const Rational& q) { return q.get_d(); };
  const auto res = find_psd_point(s, lin, kQSign, tf);
  REQUIRE(res.found);
  CHECK(res.candidates_tried == 1);
  CHECK(res.moment == QMatrix::identity(2));

  // [[t, 1], [1, t]] with t free: canonical t = 0 fails, t = 1 (direction) succeeds.
  ConstraintSpace<Rational> line{cols, {0, 1, 0}, {{1, 0, 1}}, true};
  const auto r2 = find_psd_point(line, lin, kQSign, tf);
  REQUIRE(r2.found);
  CHECK(r2.route == "direction");
  // Demanding rank 2 forces the numeric route.
  PsdPointOptions opt;
  opt.target_rank = 2;
  const auto r3 = find_psd_point(line, lin, kQSign, tf, opt);
  REQUIRE(r3.found);
  CHECK(r3.route == "numeric");
  CHECK(r3.functional.values[0] > 1);
  // No PSD point at all: [[-1, t], [t, -1]].
  ConstraintSpace<Rational> none{cols, {-1, 0, -1}, {{0, 1, 0}}, true};
  CHECK_FALSE(find_psd_point(none, lin, kQSign, tf).found);
}

TEST_CASE("canonical form") {
  const auto e = block_f_space();
  const auto cf = canonical_form(e);
  CHECK(cf.free_coordinates.size() == 8);
  for (std::size_t k = 0; k < cf.directions.size(); ++k)
    for (std::size_t j = 0; j < cf.free_coordinates.size(); ++j)
      CHECK(cf.directions[k][cf.free_coordinates[j]] == AlgebraicNumber(j == k ? 1 : 0));
  for (auto i : cf.free_coordinates) CHECK(cf.point.values[i] == AlgebraicNumber(0));
  // Free coordinates are taken from the end of the monomial order.
  CHECK(cf.free_coordinates.front() == 34);
}

TEST_CASE("constraint space text round-trip") {
  const auto e = block_f_space();
  const auto text = format_constraint_space(e, cx::vars());
  const auto back = parse_constraint_space(text, cx::vars());
  CHECK(back.monomials->monomials() == e.monomials->monomials());
  CHECK(back.directions == e.directions);
  CHECK_FALSE(back.affine);
  CHECK(parse_monomials("x0^2 x0*x1 y3^2", cx::vars()).size() == 3);
  CHECK_THROWS_AS(parse_monomials("2*x0^2", cx::vars()), InputError);
  CHECK_THROWS_AS(parse_constraint_space("rows 1\ncols 1\n1\n", cx::vars()), InputError);
}

TEST_CASE("property: Hankel consistency, annihilation and SOS round trips") {
  std::mt19937_64 rng(23);
  const auto& vars = cx::vars();
  for (int t = 0; t < 10; ++t) {
    // Random functional on quartics in x0..x3.
    auto cols = std::make_shared<const MonomialList>(monomials_in({0, 1, 2, 3}, 4));
    MomentFunctional<Rational> l{cols, {}};
    for (std::size_t i = 0; i < cols->size(); ++i) l.values.push_back(testing::random_rational(rng));
    const auto bx = cx::basis_x();
    const QMatrix m = moment_matrix(l, bx);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j)
        for (std::size_t k = 0; k < 10; ++k)
          for (std::size_t h = 0; h < 10; ++h)
            if (bx[i] * bx[j] == bx[k] * bx[h]) REQUIRE(m(i, j) == m(k, h));

    // Annihilator basis elements kill p * q for every complementary monomial q.
    std::vector<QPoly> polys;
    for (int k = 0; k < 1 + t % 3; ++k) polys.push_back(testing::random_form(rng, 4, 2, 0.6));
    const auto s = annihilator_space<Rational>(polys, {0, 1, 2, 3}, 4);
    for (const auto& d : s.directions) {
      const MomentFunctional<Rational> ld{s.monomials, d};
      for (const auto& p : polys) {
        const QPoly p8 = p.map_coefficients<Rational>([](const Rational& c) { return c; });
        for (const auto& q : monomials_in({0, 1, 2, 3}, 2)) {
          const QPoly prod = QPoly::from_terms(vars, {}) + QPoly::from_terms(vars, [&] {
                               std::vector<QPoly::Term> ts;
                               for (const auto& [mm, c] : p8.terms()) ts.emplace_back(mm * q, c);
                               return ts;
                             }());
          REQUIRE(ld.apply(prod) == 0);
        }
      }
    }

    // PSD Gram BᵀB: certificate -> weighted squares -> expands back.
    QMatrix b(1 + t % 4, 10);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < 10; ++j) b(i, j) = testing::random_rational(rng, 3, 2);
    const QMatrix gram = b.transpose() * b;
    const auto cert = std::get<PsdCertificate<Rational>>(psd_decide(gram));
    REQUIRE(sos_verify(weighted_sos_from_certificate(vars, bx, gram, cert), gram_expand(vars, bx, gram), kQSign));
  }
}
