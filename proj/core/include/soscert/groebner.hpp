#pragma once

// Buchberger's algorithm, normal forms with division transcripts, and the projective
// nonsingularity test through powers of the variables in the Jacobian ideal.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soscert/modp.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

template <class F>
struct Ideal {
  std::vector<Polynomial<F>> generators;
  MonomialOrder order = kDegRevLex;
};

struct GroebnerOptions {
  /// For homogeneous ideals: skip S-pairs whose lcm has larger degree. The result then
  /// decides membership of homogeneous polynomials up to this degree.
  std::optional<unsigned> degree_bound;
  /// Wall-clock budget; zero or negative means unlimited.
  double timeout_seconds = 0;
};

enum class GroebnerStatus { complete, truncated, timed_out };

std::string to_string(GroebnerStatus s);

template <class F>
struct GroebnerBasis {
  Variables vars;
  MonomialOrder order = kDegRevLex;
  /// Monic, interreduced, sorted by leading monomial descending.
  std::vector<Polynomial<F>> elements;
  GroebnerStatus status = GroebnerStatus::complete;
  std::optional<unsigned> degree_bound;
  std::size_t pairs_reduced = 0;
  std::size_t pairs_skipped = 0;
  double seconds = 0;

  /// True when normal forms modulo this basis decide membership for homogeneous
  /// polynomials of the given degree.
  bool decides_degree(unsigned d) const {
    return status == GroebnerStatus::complete || (status == GroebnerStatus::truncated && d <= *degree_bound);
  }
};

/// Leading monomial under `order`. Requires p nonzero.
template <class F>
Monomial leading_monomial(const Polynomial<F>& p, MonomialOrder order);

/// Reduced Groebner basis by the normal selection strategy with the product and chain
/// criteria. Throws InputError for an empty generator list or a degree bound on a
/// non-homogeneous ideal. A timeout yields status timed_out with the partial basis.
template <class F>
GroebnerBasis<F> buchberger(const Ideal<F>& ideal, const GroebnerOptions& options = {});

/// p = sum quotients[i] * g.elements[i] + remainder, with no term of the remainder
/// divisible by a leading monomial of g.
template <class F>
struct Division {
  std::vector<Polynomial<F>> quotients;
  Polynomial<F> remainder;
};

template <class F>
Division<F> divide(const Polynomial<F>& p, const GroebnerBasis<F>& g);

template <class F>
Polynomial<F> normal_form(const Polynomial<F>& p, const GroebnerBasis<F>& g);

/// Every S-polynomial of a pair of basis elements (with lcm degree within the bound, for a
/// truncated basis) reduces to zero.
template <class F>
bool satisfies_buchberger_criterion(const GroebnerBasis<F>& g);

template <class F>
struct PowerMembership {
  unsigned exponent = 0;
  Division<F> transcript;
};

/// Smallest N <= max_n with var^N in the ideal, together with its division transcript.
/// Throws InputError if the basis cannot decide degree max_n.
template <class F>
std::optional<PowerMembership<F>> variable_power_membership(const GroebnerBasis<F>& g, std::size_t var,
                                                            unsigned max_n);

/// The partial derivatives of h.
template <class F>
std::vector<Polynomial<F>> jacobian_generators(const Polynomial<F>& h);

enum class SmoothnessStatus { nonsingular, not_certified, inconclusive };

std::string to_string(SmoothnessStatus s);

template <class F>
struct SmoothnessResult {
  SmoothnessStatus status = SmoothnessStatus::inconclusive;
  /// Per variable: smallest power in the Jacobian ideal, if at most max_n.
  std::vector<std::optional<unsigned>> exponents;
  GroebnerBasis<F> basis;
  std::vector<Division<F>> transcripts;
  std::string diagnostics;
};

/// Nonsingular iff every variable has a power <= max_n in the ideal of the partials of h.
/// h itself is omitted from the generators by the Euler identity.
template <class F>
SmoothnessResult<F> projective_smoothness(const Polynomial<F>& h, unsigned max_n = 8, double timeout_seconds = 0);

struct ModularSmoothness {
  SmoothnessStatus status = SmoothnessStatus::inconclusive;
  std::uint32_t prime = Fp::kModulus;
  /// Smallest d with every form of degree d in the Jacobian ideal mod p.
  std::optional<unsigned> vanishing_degree;
  /// Per variable: smallest power in the Jacobian ideal mod p.
  std::vector<std::optional<unsigned>> exponents;
  std::size_t basis_size = 0;
  GroebnerStatus basis_status = GroebnerStatus::complete;
  double seconds = 0;
  std::string diagnostics;
};

/// Nonsingularity over the algebraic closure of Q from a computation mod p. The partials are
/// scaled to primitive integer forms and reduced mod p. If every degree-d monomial lies in
/// the reduced ideal, the integer matrix of (c_0..c_n) -> sum c_i dh/dv_i in degree d has full
/// row rank mod p, hence over Q, so the ideal over Q contains every form of degree d and its
/// zero set is the origin. Only degrees up to max_degree are computed.
ModularSmoothness modular_smoothness(const QPoly& h, unsigned max_degree, double timeout_seconds = 0);

/// Checks sum quotients[i] * gens[i] == target exactly.
template <class F>
bool verify_cofactors(const Polynomial<F>& target, const std::vector<Polynomial<F>>& gens,
                      const std::vector<Polynomial<F>>& quotients);

/// Reduces coefficients mod 2^31 - 1. Throws DivisionByZero for a denominator divisible by it.
Polynomial<Fp> reduce_mod_p(const QPoly& p);

}  // namespace soscert
