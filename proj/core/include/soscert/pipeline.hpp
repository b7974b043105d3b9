#pragma once

// End-to-end verification of the construction: both blocks, the combined form h, strict
// positivity, nonsingularity and the coupling-term variants, with a JSON report that can be
// re-checked from its certificates alone.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "soscert/linalg.hpp"
#include "soscert/polynomial.hpp"

namespace soscert {

using Json = nlohmann::ordered_json;

struct PaperConstants {
  Variables vars;
  KPoly p1, p2, p3;
  QPoly q1, q2, q3, q4, r, f, g, h;
  QPoly s1, s2, s3;
  std::vector<Vector<AlgebraicNumber>> u;  // over basis_x
  QMatrix q_y;
  std::vector<Monomial> basis_x, basis_y, basis_xy;
};

/// Invariant violations (f = sum p_i^2, g = sum q_i^2, h = f + g + r^2, Q_y symmetric with
/// entries in {6, -1, 1}); empty when consistent.
std::vector<std::string> constant_violations(const PaperConstants& c);

/// The embedded constants. Throws std::logic_error if they violate an invariant.
const PaperConstants& paper_constants();

enum class StageStatus { pass, fail, inconclusive, skipped };
std::string to_string(StageStatus s);
StageStatus parse_stage_status(std::string_view s);

enum class BetaRoot { first, second, automatic };
BetaRoot parse_beta_root(std::string_view s);

struct PipelineOptions {
  bool skip_groebner = false;
  bool skip_variants = false;
  /// automatic tries the first root, then the second.
  BetaRoot beta_root = BetaRoot::automatic;
  /// Width 2^-bits of the reported enclosures of alpha and beta.
  unsigned precision_bits = 64;
  /// Largest denominator tried when rounding floating-point Gram matrices.
  long max_denominator = 10000000;
  /// Budget for the Groebner computation over Q.
  double timeout_seconds = 3600;
  /// Largest variable power searched for over Q.
  unsigned smoothness_max_n = 8;
  /// Degree bound of the computation mod p.
  unsigned modular_max_degree = 17;
};

struct StageRecord {
  std::string name;
  StageStatus status = StageStatus::inconclusive;
  Json numbers = Json::object();
  Json checks = Json::object();
  Json certificate = Json::object();
  std::string detail;
  double seconds = 0;
};

struct VerificationReport {
  std::string version;
  std::string beta_root;
  std::vector<StageRecord> stages;

  /// "verified" when every non-skipped stage passes, "refuted" when one fails,
  /// otherwise "inconclusive".
  std::string verdict() const;
  int exit_code() const;
  Json to_json() const;
};

inline constexpr const char* kReportVersion = "1";

/// Results of earlier stages consumed by later ones.
struct PipelineState {
  std::size_t tower_index = 0;
  std::optional<KMatrix> q_x;
};

StageRecord stage_block1(const PaperConstants& c, const PipelineOptions& o, PipelineState& state);
StageRecord stage_block2(const PaperConstants& c);
StageRecord stage_combined(const PaperConstants& c, const PipelineOptions& o, const PipelineState& state);
StageRecord stage_positivity(const PaperConstants& c);
StageRecord stage_smoothness(const PaperConstants& c, const PipelineOptions& o);
StageRecord stage_variants(const PaperConstants& c, const PipelineOptions& o, const PipelineState& state);

VerificationReport full_report(const PipelineOptions& options, const PaperConstants& constants = paper_constants());

struct RecheckResult {
  bool ok = true;
  /// One line per stage: name, status claimed, re-verification outcome.
  std::vector<std::string> lines;
};

/// Re-verifies every passing stage from its serialized certificate with exact arithmetic.
RecheckResult recheck_report(const Json& report);

/// Exact value serialization.
Json to_json(const AlgebraicNumber& a);
Json to_json(const KMatrix& m);
Json to_json(const QMatrix& m);
Json to_json(const Vector<AlgebraicNumber>& v);
AlgebraicNumber algebraic_from_json(const Json& j);
KMatrix kmatrix_from_json(const Json& j);
Vector<AlgebraicNumber> kvector_from_json(const Json& j);

}  // namespace soscert
