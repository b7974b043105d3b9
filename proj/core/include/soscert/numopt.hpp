#pragma once

// Floating-point discovery: eigendecomposition, projections onto PSD affine families,
// barrier interior points, and rounding back to exact values.

#include <optional>
#include <stdexcept>
#include <vector>

#include "soscert/linalg.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

using FloatMatrix = Matrix<double>;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (M + Mᵀ) / 2
FloatMatrix symmetrize(const FloatMatrix& m);
FloatMatrix to_float(const QMatrix& m);
FloatMatrix to_float(const KMatrix& m, const TowerDescriptor& tower);
double frobenius_norm(const FloatMatrix& m);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  FloatMatrix vectors;         // column k belongs to values[k]
};

/// Symmetric eigendecomposition. Throws NumericalError if the solver fails or the input
/// contains non-finite entries.
EigenDecomposition symmetric_eigen(const FloatMatrix& m);

/// Count of eigenvalues above relative_threshold * largest eigenvalue.
std::size_t estimate_rank(const std::vector<double>& eigenvalues, double relative_threshold = 1e-6);

/// Nearest PSD matrix in Frobenius norm.
FloatMatrix psd_clip(const FloatMatrix& m);

/// Symmetric matrices offset + sum_k t_k directions[k].
struct AffineFamily {
  FloatMatrix offset;
  std::vector<FloatMatrix> directions;
  FloatMatrix at(const std::vector<double>& t) const;
  /// Least-squares parameters of the family member closest to x.
  std::vector<double> nearest_parameters(const FloatMatrix& x) const;
};

struct ProjectionOptions {
  int max_iterations = 5000;
  double tolerance = 1e-10;
  double rank_threshold = 1e-6;
};

struct ProjectionResult {
  std::vector<double> parameters;
  FloatMatrix matrix;
  std::size_t rank = 0;
  double min_eigenvalue = 0;
  double residual = 0;  // distance between the last PSD clip and the family
  int iterations = 0;
  bool converged = false;
};

/// Alternating projections between the PSD cone and the family, from the given start.
ProjectionResult project_affine_psd(const AffineFamily& family, std::vector<double> start,
                                    const ProjectionOptions& options = {});

/// Averages alternating-projection runs from the origin and from ±scale and ±10 scale along
/// each direction. The average of PSD members is PSD and has at least the maximum rank seen.
ProjectionResult max_rank_point(const AffineFamily& family, double scale = 1.0,
                                const ProjectionOptions& options = {});

/// Best continued-fraction convergent of x with denominator <= max_denominator.
Rational rationalize(double x, long max_denominator);

struct TowerRounding {
  long height = 2;           // numerator bound per coordinate
  long max_denominator = 2;  // common denominator bound
  double tolerance = 1e-9;
};

/// Low-height tower element c0 + c1 a + ... + c5 a^2 b whose embedding is within tolerance
/// of x; the smallest height and denominator is returned first.
std::optional<AlgebraicNumber> recognize_tower(double x, const TowerDescriptor& tower,
                                               const TowerRounding& cfg = {});

/// Rounds g entrywise, then projects exactly onto {A : mᵀ A m = f}, distributing each
/// monomial's residual equally over the ordered index pairs producing it.
QMatrix round_gram_to_exact(const FloatMatrix& g, const std::vector<Monomial>& basis, const QPoly& f,
                            long max_denominator);

struct BarrierOptions {
  int max_outer = 12;
  int max_newton = 60;
  double initial_weight = 1.0;
  double weight_growth = 4.0;
  /// Stop once the central-path gap bound n / tau is below this fraction of the smallest
  /// eigenvalue.
  double relative_gap = 0.05;
};

struct InteriorResult {
  FloatMatrix gram;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  int outer_iterations = 0;
  bool strictly_feasible = false;
};

/// Maximizes the smallest eigenvalue over the Gram matrices of f by a barrier method on
/// tau*s - logdet(A + sI), increasing tau each outer round.
InteriorResult interior_gram(const std::vector<Monomial>& basis, const QPoly& f, const BarrierOptions& options = {});

}  // namespace soscert
