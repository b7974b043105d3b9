#include "soscert/construction.hpp"

namespace soscert::construction {

namespace {

QPoly Q(std::string_view s) { return parse_polynomial<Rational>(s, vars()); }
KPoly K(std::string_view s) { return parse_polynomial<AlgebraicNumber>(s, vars()); }

std::vector<Monomial> quadratic_block(std::size_t offset) {
  std::vector<Monomial> out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) out.push_back(Monomial::variable(offset + i) * Monomial::variable(offset + j));
  return out;
}

}  // namespace

const Variables& vars() {
  static const Variables v = Variables::standard();
  return v;
}

std::vector<Monomial> basis_x() { return quadratic_block(0); }
std::vector<Monomial> basis_y() { return quadratic_block(4); }
std::vector<Monomial> basis_xy() {
  auto b = basis_x();
  for (const auto& m : basis_y()) b.push_back(m);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) b.push_back(Monomial::variable(i) * Monomial::variable(4 + j));
  return b;
}

KPoly p1() { return K("(-4*a^2 + 4*a - 2)*x0^2 + x1^2 - 2*x1*x2 + 2*x2*x3 - 2*x3^2"); }
KPoly p2() { return K("(-4*a^2 - 4*a + 6)*x0^2 + x1^2 + 2*x1*x2 + 2*x2*x3 + 2*x3^2"); }
KPoly p3() { return K("4*a*x0*x1 + 4*x0*x2 + 4*a^2*x0*x3"); }

QPoly f() {
  return Q("40*x0^4 + 8*x0^2*x1^2 + 32*x0^2*x1*x2 + 64*x0^2*x1*x3 + 16*x0^2*x2^2 + 16*x0^2*x2*x3"
           " + 32*x0^2*x3^2 + 2*x1^4 + 8*x1^2*x2^2 + 8*x1^2*x2*x3 + 16*x1*x2*x3^2 + 8*x2^2*x3^2 + 8*x3^4");
}

QPoly q1() { return Q("y0^2 - y3^2"); }
QPoly q2() { return Q("y1^2 - y3^2"); }
QPoly q3() { return Q("y2^2 - y3^2"); }
QPoly q4() { return Q("-y0^2 - y0*y1 - y0*y2 + y0*y3 - y1*y2 + y1*y3 + y2*y3"); }
QPoly g() { return q1() * q1() + q2() * q2() + q3() * q3() + q4() * q4(); }

QPoly r() { return Q("x2^2 - y2^2"); }
QPoly h_with(const QPoly& coupling) { return f() + g() + coupling * coupling; }
QPoly h() { return h_with(r()); }

QPoly s1() { return Q("x0*y0 + x0*y1"); }
QPoly s2() { return Q("x1*y0 + x1*y1"); }
QPoly s3() { return Q("x3*y0 + x3*y1"); }

QMatrix q_y() {
  static const long kEntries[10][10] = {
      {6, -1, -1, 1, 6, -1, 1, 6, 1, 6},      {-1, 6, -1, 1, -1, -1, 1, -1, 1, -1},
      {-1, -1, 6, 1, -1, -1, 1, -1, 1, -1},   {1, 1, 1, 6, 1, 1, -1, 1, -1, 1},
      {6, -1, -1, 1, 6, -1, 1, 6, 1, 6},      {-1, -1, -1, 1, -1, 6, 1, -1, 1, -1},
      {1, 1, 1, -1, 1, 1, 6, 1, -1, 1},       {6, -1, -1, 1, 6, -1, 1, 6, 1, 6},
      {1, 1, 1, -1, 1, 1, -1, 1, 6, 1},       {6, -1, -1, 1, 6, -1, 1, 6, 1, 6}};
  QMatrix m(10, 10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) m(i, j) = kEntries[i][j];
  return m;
}

namespace {

Vector<AlgebraicNumber> u_vector(int i, bool corrected) {
  const AlgebraicNumber a = AlgebraicNumber::alpha(), b = AlgebraicNumber::beta();
  const AlgebraicNumber den = AlgebraicNumber(4) * a * a - AlgebraicNumber(2);
  Vector<AlgebraicNumber> u(10, AlgebraicNumber(0));
  switch (i) {
    case 1:
      u[2] = 1;
      u[3] = -(a * b);
      break;
    case 2:
      u[1] = 1;
      u[3] = a + b;
      break;
    case 3:
      u[0] = AlgebraicNumber(2) - a;
      u[4] = (a - AlgebraicNumber(4)) / den;
      u[9] = 1;
      break;
    case 4:
      u[0] = AlgebraicNumber(1) - AlgebraicNumber(2) * a * a;
      u[4] = make_rational(1, 2);
      u[8] = 1;
      break;
    case 5:
      u[0] = a * a + AlgebraicNumber(2) * a + AlgebraicNumber(2) * b + (corrected ? AlgebraicNumber(0) : AlgebraicNumber(2));
      u[4] = (a * a - AlgebraicNumber(4) * a) / den;
      u[6] = 1;
      break;
    case 6:
      u[0] = corrected ? -a : AlgebraicNumber(2) - a;
      u[4] = (AlgebraicNumber(4) - a) / den;
      u[5] = 1;
      break;
    default:
      throw InputError("kernel generator index must be 1..6");
  }
  return u;
}

}  // namespace

Vector<AlgebraicNumber> printed_u(int i) { return u_vector(i, false); }
Vector<AlgebraicNumber> kernel_u(int i) { return u_vector(i, true); }
std::vector<Vector<AlgebraicNumber>> kernel_us() {
  std::vector<Vector<AlgebraicNumber>> out;
  for (int i = 1; i <= 6; ++i) out.push_back(kernel_u(i));
  return out;
}

}  // namespace soscert::construction
