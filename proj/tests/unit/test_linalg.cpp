#include <random>

#include "doctest.h"
#include "soscert/construction.hpp"
#include "soscert/linalg.hpp"
#include "support/random.hpp"

using namespace soscert;
namespace cx = soscert::construction;

namespace {

const TowerDescriptor& first_root() {
  static const auto roots = beta_roots();
  return roots[0];
}

// Leibniz-free determinant by plain elimination; independent of rref.
Rational det(QMatrix m) {
  const std::size_t n = m.rows();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(p, k), m(c, k));
      d = -d;
    }
    d *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(i, k) -= f * m(c, k);
    }
  }
  return d;
}

// PSD iff every principal minor is nonnegative.
bool psd_by_minors(const QMatrix& m) {
  const std::size_t n = m.rows();
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1U << i)) idx.push_back(i);
    QMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = m(idx[i], idx[j]);
    if (det(sub) < 0) return false;
  }
  return true;
}

template <class F>
Vector<F> coefficients(const Polynomial<F>& p, const std::vector<Monomial>& basis) {
  Vector<F> v;
  for (const auto& m : basis) v.push_back(p.coefficient(m));
  return v;
}

QMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = make_rational(d(rng), 1 + std::abs(d(rng)));
  return m;
}

}  // namespace

TEST_CASE("rref and rank") {
  const auto id = rref(QMatrix::identity(4));
  CHECK(id.reduced == QMatrix::identity(4));
  CHECK(id.pivots == std::vector<std::size_t>{0, 1, 2, 3});

  const auto a = AlgebraicNumber::alpha();
  KMatrix m = KMatrix::from_rows({{a, 1}, {a * a, a}});
  const auto e = rref(m);
  CHECK(e.rank() == 1);
  CHECK(e.reduced(0, 1) == a.inverse());

  QMatrix q = QMatrix::from_rows({{0, 2, 4}, {0, 1, 2}, {1, 0, 1}});
  const auto eq = rref(q);
  CHECK(eq.pivots == std::vector<std::size_t>{0, 1});
  CHECK(eq.reduced(1, 2) == 2);
}

TEST_CASE("nullspace") {
  CHECK(nullspace(QMatrix(3, 3)).size() == 3);
  CHECK(nullspace(QMatrix::identity(3)).empty());

  const QMatrix qy = cx::q_y();
  const auto ker = nullspace(qy);
  CHECK(ker.size() == 4);
  std::vector<Vector<Rational>> qs;
  for (const auto& p : {cx::q1(), cx::q2(), cx::q3(), cx::q4()}) qs.push_back(coefficients(p, cx::basis_y()));
  CHECK(span_rank(qs, 10) == 4);
  for (const auto& v : qs) CHECK(in_span(ker, v));
  for (const auto& v : ker) CHECK(is_zero_vector(qy * v));
}

TEST_CASE("psd_decide on printed and trivial matrices") {
  const auto out = psd_decide(cx::q_y());
  REQUIRE(std::holds_alternative<PsdCertificate<Rational>>(out));
  const auto& cert = std::get<PsdCertificate<Rational>>(out);
  CHECK(cert.rank() == 6);
  CHECK(cert.kernel.size() == 4);
  CHECK(check_certificate<Rational>(cx::q_y(), cert, rational_sign));

  const QMatrix d = QMatrix::from_rows({{1, 0}, {0, -1}});
  const auto ref = psd_decide(d);
  REQUIRE(std::holds_alternative<PsdRefutation<Rational>>(ref));
  CHECK(std::get<PsdRefutation<Rational>>(ref).witness == Vector<Rational>{0, 1});
  CHECK(check_refutation<Rational>(d, std::get<PsdRefutation<Rational>>(ref), rational_sign));

  const QMatrix z = QMatrix::from_rows({{0, 1}, {1, 0}});
  const auto rz = psd_decide(z);
  REQUIRE(std::holds_alternative<PsdRefutation<Rational>>(rz));
  CHECK(std::get<PsdRefutation<Rational>>(rz).value == -1);

  // Refutation after elimination: [[1,1],[1,0]] has Schur complement -1.
  const QMatrix s = QMatrix::from_rows({{1, 1}, {1, 0}});
  const auto rs = std::get<PsdRefutation<Rational>>(psd_decide(s));
  CHECK(quadratic_form(s, rs.witness) < 0);

  CHECK_THROWS_AS(psd_decide(QMatrix::from_rows({{1, 2}, {3, 4}})), InputError);
}

TEST_CASE("psd_decide over the tower depends on the embedding") {
  const auto b = AlgebraicNumber::beta();
  const KMatrix m = KMatrix::from_rows({{b}});
  const auto roots = beta_roots();
  CHECK(std::holds_alternative<PsdCertificate<AlgebraicNumber>>(psd_decide(m, roots[0])));
  CHECK(std::holds_alternative<PsdRefutation<AlgebraicNumber>>(psd_decide(m, roots[1])));
}

TEST_CASE("rational_intersection") {
  const auto a = AlgebraicNumber::alpha();
  CHECK(rational_intersection({cx::printed_u(1), cx::printed_u(2), cx::printed_u(3), cx::printed_u(4),
                               cx::printed_u(5), cx::printed_u(6)},
                              10)
            .empty());
  CHECK(rational_intersection(cx::kernel_us(), 10).empty());
  const auto aa = rational_intersection({{a, a}}, 2);
  REQUIRE(aa.size() == 1);
  CHECK(aa[0] == Vector<Rational>{1, 1});
  CHECK(rational_intersection({{1, a}}, 2).empty());
  // Two K-vectors whose span contains (1, 0) and (0, 1).
  const auto full = rational_intersection({{a, 1}, {1, a}}, 2);
  CHECK(full.size() == 2);
  CHECK(rational_intersection({}, 3).empty());
}

TEST_CASE("solve") {
  const QMatrix a = QMatrix::from_rows({{1, 2}, {2, 4}});
  const auto x = solve(a, Vector<Rational>{3, 6});
  REQUIRE(x);
  CHECK(a * *x == Vector<Rational>{3, 6});
  CHECK_FALSE(solve(a, Vector<Rational>{3, 7}));
}

TEST_CASE("matrix text format") {
  const QMatrix qy = cx::q_y();
  const auto doc = parse_matrix_document(format_matrix(qy, {{"basis", "y0^2 y0*y1"}}));
  CHECK_FALSE(doc.tower_field);
  CHECK(to_rational(doc.matrix) == qy);
  REQUIRE(doc.headers.size() == 1);
  CHECK(doc.headers[0].first == "basis");

  const auto a = AlgebraicNumber::alpha(), b = AlgebraicNumber::beta();
  const KMatrix k = KMatrix::from_rows({{a, b * a - 1}, {make_rational(-1, 3), b}});
  const auto text = format_matrix(k);
  CHECK(text.rfind("rows 2\ncols 2\nfield Q(a^3=2; b^2+a^2*b+1-a^2=0)\n", 0) == 0);
  const auto kd = parse_matrix_document(text);
  CHECK(kd.tower_field);
  CHECK(kd.matrix == k);

  CHECK(parse_matrix_document("# c\nrows 1\ncols 1\nfield Q(a^3=2; b^2+a^2*b+1-a^2=0)\nb\n").matrix(0, 0) == b);
  CHECK_THROWS_AS(parse_matrix_document("rows 2\ncols 2\n1, 2\n"), InputError);
  CHECK_THROWS_AS(parse_matrix_document("rows 1\ncols 2\n1\n"), InputError);
  CHECK_THROWS_AS(parse_matrix_document("rows 1\ncols 1\nx\n"), InputError);
  CHECK_THROWS_AS(parse_matrix_document("1, 2\n"), InputError);
  CHECK_THROWS_AS(parse_matrix_document("rows 1\ncols 1\nfield R\n1\n"), InputError);
  CHECK_THROWS_AS(parse_matrix_document("rows 1\ncols 1\na\n"), InputError);
}

TEST_CASE("property: rank-nullity and nullspace correctness") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + t % 6, c = 1 + (t / 6) % 7;
    QMatrix m = random_matrix(rng, r, c, 3);
    if (t % 3 == 0 && r > 1) {
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2 - m(r / 2, j);
    }
    const auto ker = nullspace(m);
    REQUIRE(rank(m) + ker.size() == c);
    for (const auto& v : ker) REQUIRE(is_zero_vector(m * v));
    REQUIRE(span_rank(ker, c) == ker.size());
  }
  for (int t = 0; t < 15; ++t) {
    KMatrix m(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = testing::random_algebraic(rng, 2);
    for (std::size_t j = 0; j < 4; ++j) m(2, j) = m(0, j) * AlgebraicNumber::beta() + m(1, j);
    const auto ker = nullspace(m);
    REQUIRE(ker.size() == 2);
    for (const auto& v : ker) REQUIRE(is_zero_vector(m * v));
  }
}

TEST_CASE("property: psd_decide agrees with the principal-minor oracle") {
  std::mt19937_64 rng(11);
  int psd_count = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 5;
    QMatrix m(n, n);
    if (t % 2 == 0) {
      // BᵀB of rank <= k, occasionally shifted slightly negative
      const std::size_t k = 1 + t % n;
      const QMatrix b = random_matrix(rng, k, n, 2);
      m = b.transpose() * b;
      if (t % 8 == 0) m(n - 1, n - 1) -= make_rational(1, 50);
    } else {
      m = random_matrix(rng, n, n, 3);
      m = m + m.transpose();
    }
    const auto out = psd_decide(m);
    const bool oracle = psd_by_minors(m);
    REQUIRE(std::holds_alternative<PsdCertificate<Rational>>(out) == oracle);
    if (oracle) {
      const auto& cert = std::get<PsdCertificate<Rational>>(out);
      REQUIRE(check_certificate<Rational>(m, cert, rational_sign));
      REQUIRE(cert.rank() == rank(m));
      ++psd_count;
    } else {
      REQUIRE(check_refutation<Rational>(m, std::get<PsdRefutation<Rational>>(out), rational_sign));
    }
  }
  CHECK(psd_count > 50);
}

TEST_CASE("property: Gram matrices over the tower are PSD under both embeddings") {
  std::mt19937_64 rng(13);
  const auto roots = beta_roots();
  const SignOracle<AlgebraicNumber> s0 = [&](const AlgebraicNumber& x) { return sign(x, roots[0]); };
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 2 + t % 3, k = 1 + t % 2;
    KMatrix b(k, n);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = testing::random_algebraic(rng, 2);
    const KMatrix m = b.transpose() * b;
    for (const auto& tower : roots) {
      const auto out = psd_decide(m, tower);
      REQUIRE(std::holds_alternative<PsdCertificate<AlgebraicNumber>>(out));
      const auto& cert = std::get<PsdCertificate<AlgebraicNumber>>(out);
      REQUIRE(cert.rank() == rank(b));
      REQUIRE(cert.reassemble() == m);
    }
    const KMatrix neg = KMatrix(n, n) - m;
    const auto out = psd_decide(neg, roots[0]);
    REQUIRE(std::holds_alternative<PsdRefutation<AlgebraicNumber>>(out));
    REQUIRE(check_refutation(neg, std::get<PsdRefutation<AlgebraicNumber>>(out), s0));
  }
}

TEST_CASE("property: rational_intersection outputs are rational members of the K-span") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + t % 3;
    // One hidden rational direction scaled by an irrational, plus an irrational vector.
    Vector<Rational> hidden(n);
    for (auto& x : hidden) x = d(rng);
    hidden[0] = 1;
    const AlgebraicNumber gamma = testing::random_algebraic(rng, 2) + AlgebraicNumber::beta();
    std::vector<Vector<AlgebraicNumber>> basis(2, Vector<AlgebraicNumber>(n));
    for (std::size_t i = 0; i < n; ++i) {
      basis[0][i] = gamma * AlgebraicNumber(hidden[i]);
      basis[1][i] = testing::random_algebraic(rng, 2) * AlgebraicNumber::alpha() + AlgebraicNumber(d(rng));
    }
    basis[1][0] = AlgebraicNumber::alpha();
    basis[1][1] = AlgebraicNumber(1);
    const auto out = rational_intersection(basis, n);
    REQUIRE(out.size() >= 1);
    for (const auto& v : out) REQUIRE(in_span(basis, to_tower(v)));
    REQUIRE(in_span(std::vector<Vector<Rational>>(out), hidden));
  }
}
