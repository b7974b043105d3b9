#pragma once

// Strict positivity certificates: sign enumeration on the zero set of the y-block,
// positive definite rational Gram matrices, and exact interval branch-and-bound.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "soscert/gram.hpp"
#include "soscert/interval.hpp"
#include "soscert/linalg.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

using Box = std::vector<Interval>;

/// Interval evaluation of p over box, one interval per listed variable; other variables are 0.
Interval evaluate_on_box(const QPoly& p, const std::vector<std::size_t>& variables, const Box& box);

struct SignCase {
  std::array<int, 4> signs;  // y0..y3, y3 = +1
  Rational q4_value;
};

/// q1 = q2 = q3 = 0 forces y0^2 = y1^2 = y2^2 = y3^2; q4 is even, so y3 = 1 after scaling and
/// a global sign change, leaving 8 sign patterns.
struct SignEnumeration {
  bool squares_forced = false;
  bool q4_even = false;
  std::vector<SignCase> cases;
};

struct InteriorGram {
  std::vector<Monomial> basis;
  QMatrix gram;
  PsdCertificate<Rational> certificate;
  long max_denominator = 0;
  double min_eigenvalue = 0;
};

struct BoxRecord {
  Box box;
  Rational lower_bound;
};

/// Leaves of the subdivision of the faces v_i = +-1 of [-1, 1]^n, each with a positive
/// interval lower bound.
struct BoxCover {
  std::vector<std::size_t> variables;
  std::vector<BoxRecord> leaves;
  std::size_t boxes_examined = 0;
};

enum class PositivityKind { sign_enumeration, interior_gram, interval_bnb, composite };

std::string to_string(PositivityKind k);

struct PositivityCertificate {
  PositivityKind kind = PositivityKind::composite;
  std::string statement;
  std::optional<SignEnumeration> signs;
  std::optional<InteriorGram> gram;
  std::optional<BoxCover> cover;
  std::vector<PositivityCertificate> parts;
  /// Named exact identities established along the way (composite certificates).
  std::vector<std::pair<std::string, bool>> checks;
};

SignEnumeration enumerate_g_signs(const std::vector<QPoly>& q);
PositivityCertificate g_zero_locus();

struct InteriorGramOptions {
  std::vector<long> denominators{10, 100, 1000, 10000, 100000, 1000000, 10000000};
  BarrierOptions barrier;
};

/// PD rational Gram matrix of p over the degree-d monomials in its variables. nullopt when
/// the barrier finds no interior point or no rounding is positive definite.
std::optional<PositivityCertificate> interior_gram_certificate(const QPoly& p, const InteriorGramOptions& options = {});

enum class BnbStatus { certified, counterbox, inconclusive };

std::string to_string(BnbStatus s);

struct BnbResult {
  BnbStatus status = BnbStatus::inconclusive;
  std::optional<PositivityCertificate> certificate;
  std::optional<Box> counterbox;
  std::size_t boxes_examined = 0;
};

/// Certifies p > 0 on {max |v_i| = 1} over the listed variables, hence on all nonzero points
/// of that coordinate subspace. Boxes are split at the midpoint of their widest edge.
BnbResult interval_bnb(const QPoly& p, const std::vector<std::size_t>& variables, std::size_t max_boxes = 100000);

/// h > 0 away from the origin: g = 0 forces y = 0, then r = x2^2 forces x2 = 0, then
/// f(x0, x1, 0, x3) > 0. Sub-failures leave the corresponding check false.
PositivityCertificate strict_positivity_h();

/// Independent re-verification of a certificate against its target polynomial.
bool check_sign_enumeration(const SignEnumeration& s, const std::vector<QPoly>& q);
bool check_interior_gram(const InteriorGram& g, const QPoly& p);
bool check_box_cover(const BoxCover& c, const QPoly& p);
bool check_positivity(const PositivityCertificate& c, const QPoly& target);

}  // namespace soscert
