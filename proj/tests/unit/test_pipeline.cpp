#include "doctest.h"
#include "soscert/construction.hpp"
#include "soscert/pipeline.hpp"

using namespace soscert;
namespace cx = soscert::construction;

namespace {

PipelineOptions fast() {
  PipelineOptions o;
  o.skip_groebner = true;
  o.skip_variants = true;
  return o;
}

Json strip_seconds(Json j) {
  for (auto& s : j.at("stages")) s.erase("seconds");
  return j;
}

const Json& fast_report() {
  static const Json j = full_report(fast()).to_json();
  return j;
}

Json& stage(Json& report, const std::string& name) {
  for (auto& s : report.at("stages"))
    if (s.at("name") == name) return s;
  throw std::runtime_error("missing stage " + name);
}

}  // namespace

TEST_CASE("embedded constants") {
  const auto& c = paper_constants();
  CHECK(constant_violations(c).empty());
  CHECK(c.f.size() == 13);
  CHECK(c.f.coefficient(Monomial::variable(0, 4)) == 40);
  CHECK(c.h.coefficient(Monomial::variable(0, 4)) == 40);
  CHECK(c.basis_xy.size() == 36);

  PaperConstants bad = c;
  bad.g = bad.g + QPoly::monomial(bad.vars, Monomial::variable(4, 4), Rational(1));
  CHECK(constant_violations(bad).size() == 2);  // g and h
}

TEST_CASE("stage numbers") {
  const auto& c = paper_constants();
  PipelineState state;
  const auto b1 = stage_block1(c, fast(), state);
  CHECK(b1.status == StageStatus::pass);
  CHECK(b1.numbers["dim_E"] == 8);
  CHECK(b1.numbers["rank_Q_x"] == 4);
  CHECK(b1.numbers["kernel_dim_Q_x"] == 6);
  CHECK(b1.numbers["rational_intersection_dim"] == 0);
  REQUIRE(state.q_x);

  const auto b2 = stage_block2(c);
  CHECK(b2.status == StageStatus::pass);
  CHECK(b2.numbers["rank_Q_y"] == 6);
  CHECK(b2.numbers["g(1,1,1,1)"] == "1");

  const auto comb = stage_combined(c, fast(), state);
  CHECK(comb.status == StageStatus::pass);
  CHECK(comb.numbers["dim_annihilator"] == 70);
  CHECK(comb.numbers["dim_block_restricted"] == 62);
  CHECK(comb.numbers["kernel_dim"] == 14);

  const auto pos = stage_positivity(c);
  CHECK(pos.status == StageStatus::pass);
  CHECK(pos.numbers["h(0)"] == "0");
  CHECK(pos.numbers["f(0,0,1,0)"] == "0");
}

TEST_CASE("combined stage requires the first block") {
  const auto r = stage_combined(paper_constants(), fast(), PipelineState{});
  CHECK(r.status == StageStatus::inconclusive);
}

TEST_CASE("skipped stages do not affect the verdict") {
  const Json& j = fast_report();
  CHECK(j["verdict"] == "verified");
  CHECK(j["version"] == kReportVersion);
  CHECK(j["beta_root"] == "first");
  CHECK(stage(const_cast<Json&>(j), "smoothness")["status"] == "skipped");
  CHECK(stage(const_cast<Json&>(j), "variants")["status"] == "skipped");
}

TEST_CASE("corrupted constant refutes the first block") {
  PaperConstants bad = paper_constants();
  bad.f = bad.f + QPoly::monomial(bad.vars, Monomial::variable(0, 4), Rational(1));
  const auto r = full_report(fast(), bad);
  REQUIRE(r.stages.front().name == "block_f");
  CHECK(r.stages.front().status == StageStatus::fail);
  CHECK(r.stages.front().checks["f = p1^2 + p2^2 + p3^2"] == false);
  CHECK(r.verdict() == "refuted");
  CHECK(r.exit_code() == 1);
}

TEST_CASE("report is deterministic") {
  const Json again = full_report(fast()).to_json();
  CHECK(strip_seconds(again).dump() == strip_seconds(fast_report()).dump());
}

TEST_CASE("report round-trips through text and re-verifies") {
  const Json j = Json::parse(fast_report().dump());
  const auto r = recheck_report(j);
  CHECK(r.ok);
  REQUIRE(r.lines.size() == 6);
  CHECK(r.lines[0] == "block_f: pass, certificate re-verified");
  CHECK(r.lines[4] == "smoothness: skipped (nothing to re-verify)");
}

TEST_CASE("recheck rejects tampered certificates") {
  SUBCASE("functional value") {
    Json j = fast_report();
    auto& v = stage(j, "combined")["certificate"]["functional"]["values"];
    v[5] = to_string(parse_algebraic(v[5].get<std::string>()) + AlgebraicNumber(1));
    CHECK_FALSE(recheck_report(j).ok);
  }
  SUBCASE("PSD pivot") {
    Json j = fast_report();
    stage(j, "block_g")["certificate"]["psd"]["pivots"][0]["value"] = "5";
    CHECK_FALSE(recheck_report(j).ok);
  }
  SUBCASE("moment matrix of the first block") {
    Json j = fast_report();
    stage(j, "block_f")["certificate"]["moment_matrix"][0][0] = "7";
    const auto r = recheck_report(j);
    CHECK_FALSE(r.ok);
  }
  SUBCASE("box cover leaf") {
    Json j = fast_report();
    for (auto& part : stage(j, "positivity")["certificate"]["parts"])
      if (part.contains("leaves")) part["leaves"].erase(0);
    CHECK_FALSE(recheck_report(j).ok);
  }
  SUBCASE("malformed entry") {
    Json j = fast_report();
    stage(j, "block_g")["certificate"]["moment_matrix"][0][0] = "six";
    const auto r = recheck_report(j);
    CHECK_FALSE(r.ok);
    CHECK(r.lines[1].find("malformed") != std::string::npos);
  }
  SUBCASE("unsupported version") {
    Json j = fast_report();
    j["version"] = "0";
    CHECK_THROWS_AS(recheck_report(j), InputError);
  }
}

TEST_CASE("status and option parsing") {
  for (auto s : {StageStatus::pass, StageStatus::fail, StageStatus::inconclusive, StageStatus::skipped})
    CHECK(parse_stage_status(to_string(s)) == s);
  CHECK(parse_beta_root("auto") == BetaRoot::automatic);
  CHECK_THROWS_AS(parse_beta_root("third"), InputError);
}

TEST_CASE("second root") {
  PipelineOptions o = fast();
  o.beta_root = BetaRoot::second;
  PipelineState state;
  const auto b1 = stage_block1(paper_constants(), o, state);
  CHECK(state.tower_index == 1);
  CHECK(b1.status == StageStatus::inconclusive);
  CHECK(b1.numbers["beta_root"] == "second");
  o.beta_root = BetaRoot::automatic;
  PipelineState automatic;
  CHECK(stage_block1(paper_constants(), o, automatic).status == StageStatus::pass);
  CHECK(automatic.tower_index == 0);
}
