#pragma once

// Gram matrices, moment functionals and spaces of functionals cut out by linear conditions.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "soscert/linalg.hpp"
#include "soscert/numopt.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

/// Ordered monomial list with index lookup.
class MonomialList {
 public:
  MonomialList() = default;
  explicit MonomialList(std::vector<Monomial> monomials);

  std::size_t size() const { return monomials_.size(); }
  const Monomial& operator[](std::size_t i) const { return monomials_[i]; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  std::optional<std::size_t> index_of(const Monomial& m) const;

 private:
  std::vector<Monomial> monomials_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

using MonomialListPtr = std::shared_ptr<const MonomialList>;

/// Monomials of the given degree in the listed variables, descending in the given order.
std::vector<Monomial> monomials_in(const std::vector<std::size_t>& variables, unsigned degree,
                                   MonomialOrder order = kLex);

template <class F>
using WeightedSquares = std::vector<std::pair<F, Polynomial<F>>>;

/// mᵀ A m
template <class F>
Polynomial<F> gram_expand(const Variables& vars, const std::vector<Monomial>& basis, const Matrix<F>& a);

/// True iff every weight is positive and sum w_i p_i^2 == f.
template <class F>
bool sos_verify(const WeightedSquares<F>& parts, const Polynomial<F>& f, const SignOracle<F>& sign);

/// Pairs (d_k, c_kᵀ m) from an LDLᵀ certificate of A. Throws InputError if the certificate
/// does not reassemble A.
template <class F>
WeightedSquares<F> weighted_sos_from_certificate(const Variables& vars, const std::vector<Monomial>& basis,
                                                 const Matrix<F>& a, const PsdCertificate<F>& cert);

/// Linear functional on the span of a monomial list, given by its values.
template <class F>
struct MomentFunctional {
  MonomialListPtr monomials;
  Vector<F> values;

  F operator()(const Monomial& m) const;
  F apply(const Polynomial<F>& p) const;
};

/// entry(i, j) = l(basis_i * basis_j)
template <class F>
Matrix<F> moment_matrix(const MomentFunctional<F>& l, const std::vector<Monomial>& basis);

/// {offset + sum_k t_k directions[k]} inside the functionals on `monomials`.
template <class F>
struct ConstraintSpace {
  MonomialListPtr monomials;
  Vector<F> offset;
  std::vector<Vector<F>> directions;
  bool affine = false;

  std::size_t dimension() const { return directions.size(); }
  std::size_t ambient_dimension() const { return monomials->size(); }
  /// Number of independent linear conditions imposed on the ambient space.
  std::size_t codimension() const { return ambient_dimension() - dimension(); }
  MomentFunctional<F> point(const Vector<F>& t) const;
};

/// Functionals l on the degree-`degree` monomials in `variables` with l(p * q) = 0 for every
/// p in `polys` and every monomial q of complementary degree.
template <class F>
ConstraintSpace<F> annihilator_space(const std::vector<Polynomial<F>>& polys, const std::vector<std::size_t>& variables,
                                     unsigned degree, MonomialOrder order = kLex);

/// Points of s taking the prescribed values. nullopt when no point does.
template <class F>
std::optional<ConstraintSpace<F>> restrict_values(const ConstraintSpace<F>& s,
                                                  const std::vector<std::pair<Monomial, F>>& values);

/// Points of s whose moment matrix over each block basis equals the block matrix.
/// nullopt when the prescription is inconsistent (including non-Hankel blocks).
template <class F>
std::optional<ConstraintSpace<F>> restrict_blocks(const ConstraintSpace<F>& s,
                                                  const std::vector<std::pair<std::vector<Monomial>, Matrix<F>>>& blocks);

/// Points of s whose moment matrix over `basis` annihilates every vector in `kernel`.
/// nullopt only for an affine s with no such point.
template <class F>
std::optional<ConstraintSpace<F>> kernel_constrained_space(const ConstraintSpace<F>& s,
                                                           const std::vector<Monomial>& basis,
                                                           const std::vector<Vector<F>>& kernel);

/// Reduced description: the unique point with all free coordinates zero, and directions with
/// a 1 in their own free coordinate and 0 in the others. Free coordinates are chosen as late
/// as possible in the monomial order, i.e. they are the non-pivot columns of the RREF of the
/// defining equations.
template <class F>
struct CanonicalForm {
  MomentFunctional<F> point;
  std::vector<Vector<F>> directions;
  std::vector<std::size_t> free_coordinates;
};

template <class F>
CanonicalForm<F> canonical_form(const ConstraintSpace<F>& s);

struct PsdPointOptions {
  /// Accept only candidates of exactly this rank.
  std::optional<std::size_t> target_rank;
  bool numeric_fallback = true;
  std::vector<long> denominators{10, 100, 1000, 10000, 100000, 1000000, 10000000};
  ProjectionOptions projection;
};

template <class F>
struct PsdPointResult {
  bool found = false;
  std::string route;  // "canonical", "direction", "numeric"
  MomentFunctional<F> functional;
  Matrix<F> moment;
  PsdCertificate<F> certificate;
  std::size_t candidates_tried = 0;
  std::optional<ProjectionResult> numeric;
};

/// Deterministic search for a PSD moment matrix in s: the canonical point, then the canonical
/// point plus or minus each canonical direction, then rounded alternating-projection points.
template <class F>
PsdPointResult<F> find_psd_point(const ConstraintSpace<F>& s, const std::vector<Monomial>& basis,
                                 const SignOracle<F>& sign, const std::function<double(const F&)>& to_float,
                                 const PsdPointOptions& options = {});

/// Serialization in the matrix text format: one row per direction, offset first when affine.
template <class F>
std::string format_constraint_space(const ConstraintSpace<F>& s, const Variables& vars);
ConstraintSpace<AlgebraicNumber> parse_constraint_space(std::string_view text, const Variables& vars);

std::string format_monomials(const std::vector<Monomial>& monomials, const Variables& vars);
std::vector<Monomial> parse_monomials(std::string_view text, const Variables& vars);

}  // namespace soscert
