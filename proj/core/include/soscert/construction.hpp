#pragma once

// The polynomials, bases and matrices of the non-rational SOS construction.

#include <vector>

#include "soscert/linalg.hpp"
#include "soscert/polynomial.hpp"

namespace soscert::construction {

/// x0..x3 y0..y3
const Variables& vars();

/// Quadratic monomials in x0..x3: x0^2, x0x1, x0x2, x0x3, x1^2, ..., x3^2.
std::vector<Monomial> basis_x();
/// Same pattern in y0..y3.
std::vector<Monomial> basis_y();
/// basis_x, basis_y, then x_i*y_j in row-major order (36 monomials).
std::vector<Monomial> basis_xy();

KPoly p1();
KPoly p2();
KPoly p3();
QPoly f();

QPoly q1();
QPoly q2();
QPoly q3();
QPoly q4();
QPoly g();

QPoly r();
/// f + g + r^2 for an arbitrary coupling term.
QPoly h_with(const QPoly& coupling);
QPoly h();

QPoly s1();
QPoly s2();
QPoly s3();

/// Moment matrix of the y-block over basis_y.
QMatrix q_y();

/// Kernel generators of the x-block as printed, coordinates over basis_x (index 1..6).
Vector<AlgebraicNumber> printed_u(int i);
/// Kernel generators with the first coordinates of u5 and u6 corrected to
/// a^2 + 2a + 2b and -a; u1..u4 are unchanged.
Vector<AlgebraicNumber> kernel_u(int i);
std::vector<Vector<AlgebraicNumber>> kernel_us();

/// Value of the x-block functional at x2^4, matching the y-block entry at y2^4.
inline Rational x2_quartic_moment() { return Rational(6); }

}  // namespace soscert::construction
