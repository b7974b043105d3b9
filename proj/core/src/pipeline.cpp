#include "soscert/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "soscert/construction.hpp"
#include "soscert/gram.hpp"
#include "soscert/groebner.hpp"
#include "soscert/numopt.hpp"
#include "soscert/positivity.hpp"

namespace soscert {

namespace cx = construction;

std::string to_string(StageStatus s) {
  switch (s) {
    case StageStatus::pass: return "pass";
    case StageStatus::fail: return "fail";
    case StageStatus::inconclusive: return "inconclusive";
    case StageStatus::skipped: return "skipped";
  }
  return "?";
}

StageStatus parse_stage_status(std::string_view s) {
  if (s == "pass") return StageStatus::pass;
  if (s == "fail") return StageStatus::fail;
  if (s == "inconclusive") return StageStatus::inconclusive;
  if (s == "skipped") return StageStatus::skipped;
  throw InputError("unknown stage status '" + std::string(s) + "'");
}

BetaRoot parse_beta_root(std::string_view s) {
  if (s == "first") return BetaRoot::first;
  if (s == "second") return BetaRoot::second;
  if (s == "auto") return BetaRoot::automatic;
  throw InputError("beta root must be first, second or auto");
}

// ---------------------------------------------------------------------------------------------
// Constants

namespace {

template <class F>
Vector<F> coefficients(const Polynomial<F>& p, const std::vector<Monomial>& basis) {
  Vector<F> v;
  v.reserve(basis.size());
  for (const auto& m : basis) v.push_back(p.coefficient(m));
  return v;
}

bool hankel(const QMatrix& m, const std::vector<Monomial>& basis) {
  std::map<std::uint64_t, Rational> seen;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      auto [it, inserted] = seen.try_emplace((basis[i] * basis[j]).packed(), m(i, j));
      if (!inserted && it->second != m(i, j)) return false;
    }
  return true;
}

}  // namespace

std::vector<std::string> constant_violations(const PaperConstants& c) {
  std::vector<std::string> out;
  if (!(to_tower(c.f) == c.p1 * c.p1 + c.p2 * c.p2 + c.p3 * c.p3)) out.push_back("f != p1^2 + p2^2 + p3^2");
  if (!(c.g == c.q1 * c.q1 + c.q2 * c.q2 + c.q3 * c.q3 + c.q4 * c.q4)) out.push_back("g != q1^2 + ... + q4^2");
  if (!(c.h == c.f + c.g + c.r * c.r)) out.push_back("h != f + g + r^2");
  bool entries = c.q_y.rows() == 10 && c.q_y.is_symmetric();
  for (std::size_t i = 0; entries && i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      const Rational& x = c.q_y(i, j);
      if (x != 6 && x != 1 && x != -1) entries = false;
    }
  if (!entries) out.push_back("Q_y is not a symmetric 10x10 matrix with entries in {6, -1, 1}");
  return out;
}

const PaperConstants& paper_constants() {
  static const PaperConstants c = [] {
    PaperConstants k;
    k.vars = cx::vars();
    k.p1 = cx::p1();
    k.p2 = cx::p2();
    k.p3 = cx::p3();
    k.q1 = cx::q1();
    k.q2 = cx::q2();
    k.q3 = cx::q3();
    k.q4 = cx::q4();
    k.r = cx::r();
    k.f = cx::f();
    k.g = cx::g();
    k.h = cx::h();
    k.s1 = cx::s1();
    k.s2 = cx::s2();
    k.s3 = cx::s3();
    k.u = cx::kernel_us();
    k.q_y = cx::q_y();
    k.basis_x = cx::basis_x();
    k.basis_y = cx::basis_y();
    k.basis_xy = cx::basis_xy();
    const auto bad = constant_violations(k);
    if (!bad.empty()) throw std::logic_error("embedded constants inconsistent: " + bad.front());
    return k;
  }();
  return c;
}

// ---------------------------------------------------------------------------------------------
// Serialization

Json to_json(const AlgebraicNumber& a) { return to_string(a); }

Json to_json(const Vector<AlgebraicNumber>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_string(x));
  return j;
}

Json to_json(const KMatrix& m) {
  Json j = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) j.push_back(to_json(m.row(i)));
  return j;
}

Json to_json(const QMatrix& m) { return to_json(to_tower(m)); }

AlgebraicNumber algebraic_from_json(const Json& j) {
  if (!j.is_string()) throw InputError("expected an exact number as a string");
  return parse_algebraic(j.get<std::string>());
}

Vector<AlgebraicNumber> kvector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of numbers");
  Vector<AlgebraicNumber> v;
  for (const auto& x : j) v.push_back(algebraic_from_json(x));
  return v;
}

KMatrix kmatrix_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a matrix");
  std::vector<std::vector<AlgebraicNumber>> rows;
  for (const auto& r : j) rows.push_back(kvector_from_json(r));
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw InputError("ragged matrix");
  return KMatrix::from_rows(rows, cols);
}

namespace {

QMatrix qmatrix_from_json(const Json& j) {
  auto q = to_rational(kmatrix_from_json(j));
  if (!q) throw InputError("expected a rational matrix");
  return *q;
}

Json vectors_json(const std::vector<Vector<AlgebraicNumber>>& vs) {
  Json j = Json::array();
  for (const auto& v : vs) j.push_back(to_json(v));
  return j;
}

std::vector<Vector<AlgebraicNumber>> vectors_from_json(const Json& j) {
  std::vector<Vector<AlgebraicNumber>> out;
  for (const auto& v : j) out.push_back(kvector_from_json(v));
  return out;
}

template <class F>
Json psd_json(const PsdCertificate<F>& c) {
  Json pivots = Json::array();
  for (const auto& p : c.pivots) {
    Json col = Json::array();
    for (const auto& x : p.column) col.push_back(to_string(x));
    pivots.push_back({{"index", p.index}, {"value", to_string(p.value)}, {"column", col}});
  }
  Json kernel = Json::array();
  for (const auto& v : c.kernel) {
    Json col = Json::array();
    for (const auto& x : v) col.push_back(to_string(x));
    kernel.push_back(col);
  }
  return {{"size", c.size}, {"pivots", pivots}, {"kernel", kernel}};
}

PsdCertificate<AlgebraicNumber> kpsd_from_json(const Json& j) {
  PsdCertificate<AlgebraicNumber> c;
  c.size = j.at("size").get<std::size_t>();
  for (const auto& p : j.at("pivots"))
    c.pivots.push_back({p.at("index").get<std::size_t>(), algebraic_from_json(p.at("value")), kvector_from_json(p.at("column"))});
  c.kernel = vectors_from_json(j.at("kernel"));
  return c;
}

PsdCertificate<Rational> qpsd_from_json(const Json& j) {
  const auto k = kpsd_from_json(j);
  PsdCertificate<Rational> c;
  c.size = k.size;
  auto q = [](const Vector<AlgebraicNumber>& v) {
    auto r = to_rational(v);
    if (!r) throw InputError("expected rational certificate entries");
    return *r;
  };
  for (const auto& p : k.pivots) {
    if (!p.value.is_rational()) throw InputError("expected rational pivots");
    c.pivots.push_back({p.index, p.value[0], q(p.column)});
  }
  for (const auto& v : k.kernel) c.kernel.push_back(q(v));
  return c;
}

Json interval_json(const Interval& iv) { return Json::array({to_string(iv.lo), to_string(iv.hi)}); }

Interval interval_from_json(const Json& j) {
  return Interval(parse_rational(j.at(0).get<std::string>()), parse_rational(j.at(1).get<std::string>()));
}

Json checks_json(const std::vector<std::pair<std::string, bool>>& checks) {
  Json j = Json::object();
  for (const auto& [k, v] : checks) j[k] = v;
  return j;
}

Json positivity_json(const PositivityCertificate& c, const Variables& vars) {
  Json j{{"kind", to_string(c.kind)}, {"statement", c.statement}};
  if (!c.checks.empty()) j["checks"] = checks_json(c.checks);
  if (c.signs) {
    Json cases = Json::array();
    for (const auto& s : c.signs->cases) cases.push_back({{"signs", s.signs}, {"q4", to_string(s.q4_value)}});
    j["squares_forced"] = c.signs->squares_forced;
    j["q4_even"] = c.signs->q4_even;
    j["cases"] = cases;
  }
  if (c.gram) {
    j["basis"] = format_monomials(c.gram->basis, vars);
    j["gram"] = to_json(c.gram->gram);
    j["psd"] = psd_json(c.gram->certificate);
    j["max_denominator"] = c.gram->max_denominator;
    j["min_eigenvalue"] = c.gram->min_eigenvalue;
  }
  if (c.cover) {
    Json leaves = Json::array();
    for (const auto& l : c.cover->leaves) {
      Json box = Json::array();
      for (const auto& iv : l.box) box.push_back(interval_json(iv));
      leaves.push_back({{"box", box}, {"lower_bound", to_string(l.lower_bound)}});
    }
    j["variables"] = c.cover->variables;
    j["boxes_examined"] = c.cover->boxes_examined;
    j["leaves"] = leaves;
  }
  if (!c.parts.empty()) {
    j["parts"] = Json::array();
    for (const auto& p : c.parts) j["parts"].push_back(positivity_json(p, vars));
  }
  return j;
}

PositivityCertificate positivity_from_json(const Json& j, const Variables& vars) {
  PositivityCertificate c;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sign-enumeration") c.kind = PositivityKind::sign_enumeration;
  else if (kind == "interior-gram") c.kind = PositivityKind::interior_gram;
  else if (kind == "interval-bnb") c.kind = PositivityKind::interval_bnb;
  else if (kind == "composite") c.kind = PositivityKind::composite;
  else throw InputError("unknown certificate kind '" + kind + "'");
  c.statement = j.value("statement", "");
  if (j.contains("checks"))
    for (const auto& [k, v] : j.at("checks").items()) c.checks.emplace_back(k, v.get<bool>());
  if (j.contains("cases")) {
    SignEnumeration s;
    s.squares_forced = j.at("squares_forced").get<bool>();
    s.q4_even = j.at("q4_even").get<bool>();
    for (const auto& k : j.at("cases")) s.cases.push_back({k.at("signs").get<std::array<int, 4>>(), parse_rational(k.at("q4").get<std::string>())});
    c.signs = std::move(s);
  }
  if (j.contains("gram")) {
    InteriorGram g;
    g.basis = parse_monomials(j.at("basis").get<std::string>(), vars);
    g.gram = qmatrix_from_json(j.at("gram"));
    g.certificate = qpsd_from_json(j.at("psd"));
    g.max_denominator = j.value("max_denominator", 0L);
    g.min_eigenvalue = j.value("min_eigenvalue", 0.0);
    c.gram = std::move(g);
  }
  if (j.contains("leaves")) {
    BoxCover cover;
    cover.variables = j.at("variables").get<std::vector<std::size_t>>();
    cover.boxes_examined = j.value("boxes_examined", std::size_t{0});
    for (const auto& l : j.at("leaves")) {
      BoxRecord r;
      for (const auto& iv : l.at("box")) r.box.push_back(interval_from_json(iv));
      r.lower_bound = parse_rational(l.at("lower_bound").get<std::string>());
      cover.leaves.push_back(std::move(r));
    }
    c.cover = std::move(cover);
  }
  if (j.contains("parts"))
    for (const auto& p : j.at("parts")) c.parts.push_back(positivity_from_json(p, vars));
  return c;
}

Json functional_json(const MomentFunctional<AlgebraicNumber>& l, const Variables& vars) {
  return {{"monomials", format_monomials(l.monomials->monomials(), vars)}, {"values", to_json(l.values)}};
}

MomentFunctional<AlgebraicNumber> functional_from_json(const Json& j, const Variables& vars) {
  MomentFunctional<AlgebraicNumber> l;
  l.monomials = std::make_shared<const MonomialList>(parse_monomials(j.at("monomials").get<std::string>(), vars));
  l.values = kvector_from_json(j.at("values"));
  if (l.values.size() != l.monomials->size()) throw InputError("functional values do not match its monomials");
  return l;
}

// ---------------------------------------------------------------------------------------------
// Shared helpers

const TowerDescriptor& tower_at(std::size_t i) {
  static const auto roots = beta_roots();
  return roots.at(i);
}

SignOracle<AlgebraicNumber> sign_oracle(std::size_t tower) {
  return [tower](const AlgebraicNumber& a) { return sign(a, tower_at(tower)); };
}

std::function<double(const AlgebraicNumber&)> float_map(std::size_t tower) {
  return [tower](const AlgebraicNumber& a) { return to_double(a, tower_at(tower)); };
}

bool all_true(const Json& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Json& v) { return v.get<bool>(); });
}

StageStatus status_from_checks(const Json& checks) { return all_true(checks) ? StageStatus::pass : StageStatus::fail; }

/// The quadratic monomials in the given variables times p vanish under l.
bool annihilates(const MomentFunctional<AlgebraicNumber>& l, const KPoly& p, const std::vector<std::size_t>& vars) {
  for (const auto& m : monomials_in(vars, 4 - static_cast<unsigned>(p.total_degree()))) {
    if (!is_zero(l.apply(p.times_monomial(m)))) return false;
  }
  return true;
}

std::vector<Vector<AlgebraicNumber>> padded(const std::vector<Vector<AlgebraicNumber>>& us, std::size_t n) {
  std::vector<Vector<AlgebraicNumber>> out;
  for (const auto& u : us) {
    Vector<AlgebraicNumber> v(n, AlgebraicNumber(0));
    std::copy(u.begin(), u.end(), v.begin());
    out.push_back(std::move(v));
  }
  return out;
}

std::set<std::size_t> support(const std::vector<Vector<AlgebraicNumber>>& vs) {
  std::set<std::size_t> s;
  for (const auto& v : vs)
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i])) s.insert(i);
  return s;
}

std::vector<QPoly> combined_rational_polys(const PaperConstants& c) {
  return {c.q1, c.q2, c.q3, c.q4, c.r, c.s1, c.s2, c.s3};
}

std::vector<KPoly> combined_annihilated(const PaperConstants& c, const QPoly& r) {
  std::vector<KPoly> polys{c.p1, c.p2, c.p3};
  for (const auto& q : {c.q1, c.q2, c.q3, c.q4, r}) polys.push_back(to_tower(q));
  return polys;
}

PsdPointOptions point_options(const PipelineOptions& o) {
  PsdPointOptions p;
  p.denominators.erase(std::remove_if(p.denominators.begin(), p.denominators.end(), [&](long d) { return d > o.max_denominator; }),
                       p.denominators.end());
  return p;
}

std::vector<long> rounding_denominators(long max_den) {
  std::vector<long> out;
  for (long d = 10; d <= max_den; d *= 10) out.push_back(d);
  return out;
}

/// Checks shared by the first stage and its re-verification.
void block1_checks(const PaperConstants& c, const KMatrix& qx, const PsdCertificate<AlgebraicNumber>& cert,
                   std::size_t tower, Json& checks, Json& numbers) {
  const KMatrix kernel_check = qx;
  const auto ker = nullspace(qx);
  const std::size_t urank = span_rank(c.u, 10);
  bool us_in_kernel = true;
  for (const auto& u : c.u) us_in_kernel = us_in_kernel && is_zero_vector(qx * u);
  bool ps_in_kernel = true;
  for (const auto& p : {c.p1, c.p2, c.p3}) ps_in_kernel = ps_in_kernel && is_zero_vector(qx * coefficients(p, c.basis_x));
  Vector<AlgebraicNumber> comb(10, AlgebraicNumber(0));
  for (std::size_t i = 0; i < 10; ++i) comb[i] = c.u[0][i] * AlgebraicNumber(4) + c.u[1][i] * AlgebraicNumber::alpha() * AlgebraicNumber(4);
  const auto rat = rational_intersection(c.u, 10);

  checks["Q_x positive semidefinite (certificate)"] = check_certificate(qx, cert, sign_oracle(tower));
  checks["Q_x has rank 4"] = cert.rank() == 4;
  checks["kernel of Q_x = span(u1..u6)"] = ker.size() == 6 && urank == 6 && us_in_kernel;
  checks["p1, p2, p3 in the kernel"] = ps_in_kernel;
  checks["p3 = 4 u1 + 4 a u2"] = comb == coefficients(c.p3, c.basis_x);
  checks["span(u1..u6) contains no nonzero rational vector"] = rat.empty();
  numbers["rank_Q_x"] = cert.rank();
  numbers["kernel_dim_Q_x"] = ker.size();
  numbers["rational_intersection_dim"] = rat.size();
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Stages

StageRecord stage_block1(const PaperConstants& c, const PipelineOptions& o, PipelineState& state) {
  StageRecord s;
  s.name = "block_f";
  const KPoly fk = c.p1 * c.p1 + c.p2 * c.p2 + c.p3 * c.p3;
  s.checks["f = p1^2 + p2^2 + p3^2"] = fk == to_tower(c.f);
  s.numbers["f_terms"] = c.f.size();
  s.numbers["x0^4_coefficient"] = to_string(c.f.coefficient(Monomial::variable(0, 4)));
  if (!s.checks["f = p1^2 + p2^2 + p3^2"].get<bool>()) {
    s.status = StageStatus::fail;
    s.detail = "f does not reconstruct from p1, p2, p3";
    return s;
  }

  const auto e = annihilator_space<AlgebraicNumber>({c.p1, c.p2, c.p3}, {0, 1, 2, 3}, 4);
  s.numbers["dim_E"] = e.dimension();
  s.checks["dim E = 8"] = e.dimension() == 8;

  std::vector<std::size_t> towers;
  if (o.beta_root == BetaRoot::first) towers = {0};
  else if (o.beta_root == BetaRoot::second) towers = {1};
  else towers = {0, 1};

  const auto ek = kernel_constrained_space(e, c.basis_x, c.u);
  std::optional<PsdPointResult<AlgebraicNumber>> found;
  std::size_t tower = towers.front();
  if (ek) {
    s.numbers["dim_kernel_constrained"] = ek->dimension();
    const auto en = restrict_values(*ek, {{Monomial::variable(2, 4), AlgebraicNumber(cx::x2_quartic_moment())}});
    if (en) {
      for (std::size_t t : towers) {
        PsdPointOptions opt = point_options(o);
        opt.target_rank = 4;
        auto res = find_psd_point(*en, c.basis_x, sign_oracle(t), float_map(t), opt);
        if (res.found) {
          found = std::move(res);
          tower = t;
          break;
        }
      }
    }
  }
  state.tower_index = tower;
  s.numbers["beta_root"] = tower == 0 ? "first" : "second";
  if (!found) {
    s.status = StageStatus::inconclusive;
    s.detail = "no PSD moment matrix of rank 4 found in the kernel-constrained space";
    return s;
  }
  s.numbers["route"] = found->route;
  block1_checks(c, found->moment, found->certificate, tower, s.checks, s.numbers);

  Json printed = Json::array();
  for (int i = 1; i <= 6; ++i) printed.push_back(is_zero_vector(found->moment * cx::printed_u(i)));
  s.numbers["printed_u_in_kernel"] = printed;

  const auto [ai, bi] = tower_at(tower).refined(o.precision_bits);
  s.certificate["tower"] = {{"beta_index", tower}, {"alpha", interval_json(ai)}, {"beta", interval_json(bi)}};
  s.certificate["basis"] = format_monomials(c.basis_x, c.vars);
  s.certificate["functional"] = functional_json(found->functional, c.vars);
  s.certificate["moment_matrix"] = to_json(found->moment);
  s.certificate["psd"] = psd_json(found->certificate);
  s.certificate["kernel"] = vectors_json(c.u);
  state.q_x = found->moment;
  s.status = status_from_checks(s.checks);
  return s;
}

StageRecord stage_block2(const PaperConstants& c) {
  StageRecord s;
  s.name = "block_g";
  s.checks["g = q1^2 + q2^2 + q3^2 + q4^2"] = c.g == c.q1 * c.q1 + c.q2 * c.q2 + c.q3 * c.q3 + c.q4 * c.q4;
  s.checks["Q_y is a moment matrix"] = hankel(c.q_y, c.basis_y);
  const auto out = psd_decide(c.q_y);
  const auto* cert = std::get_if<PsdCertificate<Rational>>(&out);
  s.checks["Q_y positive semidefinite"] = cert != nullptr;
  const auto ker = nullspace(c.q_y);
  std::vector<Vector<Rational>> qs;
  for (const auto& q : {c.q1, c.q2, c.q3, c.q4}) qs.push_back(coefficients(q, c.basis_y));
  bool in_kernel = true;
  for (const auto& q : qs) in_kernel = in_kernel && is_zero_vector(c.q_y * q);
  s.checks["kernel of Q_y = span(q1..q4)"] = ker.size() == 4 && span_rank(qs, 10) == 4 && in_kernel;
  s.checks["Q_y has rank 6"] = cert && cert->rank() == 6;
  std::vector<Rational> ones(8, Rational(1));
  s.numbers["g(1,1,1,1)"] = to_string(evaluate<Rational, Rational>(c.g, std::span<const Rational>(ones)));
  s.numbers["rank_Q_y"] = cert ? cert->rank() : 0;
  s.numbers["kernel_dim_Q_y"] = ker.size();
  s.certificate["moment_matrix"] = to_json(c.q_y);
  if (cert) s.certificate["psd"] = psd_json(*cert);
  std::vector<Vector<AlgebraicNumber>> kq;
  for (const auto& q : qs) kq.push_back(to_tower(q));
  s.certificate["kernel"] = vectors_json(kq);
  s.status = status_from_checks(s.checks);
  return s;
}

namespace {

void combined_checks(const PaperConstants& c, const KMatrix& q, const PsdCertificate<AlgebraicNumber>& cert,
                     std::size_t tower, Json& checks, Json& numbers) {
  const std::size_t n = c.basis_xy.size();
  const auto us = padded(c.u, n);
  std::vector<Vector<AlgebraicNumber>> others;
  for (const auto& p : combined_rational_polys(c)) others.push_back(to_tower(coefficients(p, c.basis_xy)));
  auto all = us;
  all.insert(all.end(), others.begin(), others.end());
  bool in_kernel = true;
  for (const auto& v : all) in_kernel = in_kernel && is_zero_vector(q * v);
  const auto su = support(us), so = support(others);
  std::vector<std::size_t> common;
  std::set_intersection(su.begin(), su.end(), so.begin(), so.end(), std::back_inserter(common));
  const std::size_t x0sq = 0;  // x0^2 leads basis_xy

  checks["Q_xy positive semidefinite (certificate)"] = check_certificate(q, cert, sign_oracle(tower));
  checks["kernel dimension 14"] = n - cert.rank() == 14;
  checks["kernel = span of u1..u6, q1..q4, r, s1, s2, s3"] = in_kernel && span_rank(all, n) == 14 && n - cert.rank() == 14;
  checks["supports of the u-group and the rational group are disjoint"] = common.empty();
  checks["x0^2 occurs only in the u-group"] = su.count(x0sq) == 1 && so.count(x0sq) == 0;
  checks["u-group spans no nonzero rational vector"] = rational_intersection(us, n).empty();
  checks["x0^4 occurs in h"] = !is_zero(c.h.coefficient(Monomial::variable(0, 4)));
  numbers["kernel_dim"] = n - cert.rank();
  numbers["rank_Q_xy"] = cert.rank();
}

Json combined_chain() {
  return Json::array({
      "every square in a real SOS decomposition of h lies in the kernel of the PSD form Q_xy",
      "the kernel is spanned by u1..u6 (x-block) and the rational forms q1..q4, r, s1, s2, s3",
      "a rational square p = U + R with U in span(u) and R in the rational span; U is rational because the supports are disjoint",
      "span(u) has no nonzero rational vector, so U = 0 and p has no x0^2 term",
      "then no square contributes x0^4, contradicting the nonzero x0^4 coefficient of h",
  });
}

}  // namespace

StageRecord stage_combined(const PaperConstants& c, const PipelineOptions& o, const PipelineState& state) {
  StageRecord s;
  s.name = "combined";
  if (!state.q_x) {
    s.status = StageStatus::inconclusive;
    s.detail = "requires the Q_x matrix of the first stage";
    return s;
  }
  const auto space = annihilator_space(combined_annihilated(c, c.r), {0, 1, 2, 3, 4, 5, 6, 7}, 4);
  s.numbers["dim_annihilator"] = space.dimension();
  s.checks["dim annihilator space = 70"] = space.dimension() == 70;
  const auto s62 = restrict_blocks<AlgebraicNumber>(space, {{c.basis_x, *state.q_x}, {c.basis_y, to_tower(c.q_y)}});
  s.checks["blocks Q_x, Q_y are consistent"] = s62.has_value();
  if (!s62) {
    s.status = StageStatus::fail;
    s.detail = "the block prescriptions are inconsistent";
    return s;
  }
  s.numbers["dim_block_restricted"] = s62->dimension();
  s.checks["dim block-restricted space = 62"] = s62->dimension() == 62;
  const auto res = find_psd_point(*s62, c.basis_xy, sign_oracle(state.tower_index), float_map(state.tower_index), point_options(o));
  s.numbers["candidates_tried"] = res.candidates_tried;
  if (!res.found) {
    s.status = StageStatus::inconclusive;
    s.detail = "no PSD point found in the block-restricted space";
    return s;
  }
  s.numbers["route"] = res.route;
  combined_checks(c, res.moment, res.certificate, state.tower_index, s.checks, s.numbers);
  s.numbers["argument"] = combined_chain();
  s.certificate["tower"] = {{"beta_index", state.tower_index}};
  s.certificate["basis"] = format_monomials(c.basis_xy, c.vars);
  s.certificate["functional"] = functional_json(res.functional, c.vars);
  s.certificate["moment_matrix"] = to_json(res.moment);
  s.certificate["psd"] = psd_json(res.certificate);
  s.status = status_from_checks(s.checks);
  if (s.status == StageStatus::pass) s.detail = "h has no SOS decomposition with rational coefficients";
  return s;
}

StageRecord stage_positivity(const PaperConstants& c) {
  StageRecord s;
  s.name = "positivity";
  const auto cert = strict_positivity_h();
  s.checks = checks_json(cert.checks);
  // The composite certificate is built for the embedded h.
  s.checks["target is h"] = c.h == cx::h();
  std::vector<Rational> zero(8, Rational(0)), r2{0, 0, 1, 0, 0, 0, 0, 0};
  s.numbers["h(0)"] = to_string(evaluate<Rational, Rational>(c.h, std::span<const Rational>(zero)));
  s.numbers["f(0,0,1,0)"] = to_string(evaluate<Rational, Rational>(c.f, std::span<const Rational>(r2)));
  for (const auto& part : cert.parts) {
    if (part.signs) {
      Json vals = Json::array();
      for (const auto& k : part.signs->cases) vals.push_back(to_string(k.q4_value));
      s.numbers["q4_on_sign_patterns"] = vals;
    }
    if (part.cover) {
      s.numbers["boxes_examined"] = part.cover->boxes_examined;
      s.numbers["cover_leaves"] = part.cover->leaves.size();
    }
    if (part.gram) s.numbers["gram_max_denominator"] = part.gram->max_denominator;
  }
  s.certificate = positivity_json(cert, c.vars);
  // The rational Gram matrix is opportunistic; the box cover is authoritative.
  Json required = s.checks;
  required.erase("f(x0, x1, 0, x3) has a positive definite rational Gram matrix");
  s.status = status_from_checks(required);
  return s;
}

StageRecord stage_smoothness(const PaperConstants& c, const PipelineOptions& o) {
  StageRecord s;
  s.name = "smoothness";
  if (o.skip_groebner) {
    s.status = StageStatus::skipped;
    s.detail = "skipped by request";
    return s;
  }
  s.numbers["generators"] = "the 8 partial derivatives of h (h itself lies in their ideal by the Euler identity)";
  auto exps = [](const std::vector<std::optional<unsigned>>& e) {
    Json j = Json::array();
    for (const auto& x : e) j.push_back(x ? Json(*x) : Json(nullptr));
    return j;
  };

  const auto exact = projective_smoothness(c.h, o.smoothness_max_n, o.timeout_seconds);
  s.numbers["rational_max_n"] = o.smoothness_max_n;
  s.numbers["rational_status"] = to_string(exact.status);
  s.numbers["rational_exponents"] = exps(exact.exponents);
  s.numbers["rational_basis_size"] = exact.basis.elements.size();
  s.numbers["rational_basis_status"] = to_string(exact.basis.status);

  const auto mod = modular_smoothness(c.h, o.modular_max_degree, o.timeout_seconds);
  s.numbers["modular_prime"] = mod.prime;
  s.numbers["modular_max_degree"] = o.modular_max_degree;
  s.numbers["modular_status"] = to_string(mod.status);
  s.numbers["modular_vanishing_degree"] = mod.vanishing_degree ? Json(*mod.vanishing_degree) : Json(nullptr);
  s.numbers["modular_exponents"] = exps(mod.exponents);
  s.numbers["modular_basis_size"] = mod.basis_size;

  s.checks["every variable has a power in the Jacobian ideal"] =
      exact.status == SmoothnessStatus::nonsingular || mod.status == SmoothnessStatus::nonsingular;
  s.certificate = {{"method", "modular-rank"},
                   {"prime", mod.prime},
                   {"max_degree", o.modular_max_degree},
                   {"vanishing_degree", s.numbers["modular_vanishing_degree"]},
                   {"basis_size", mod.basis_size}};
  if (exact.status == SmoothnessStatus::nonsingular || mod.status == SmoothnessStatus::nonsingular) {
    s.status = StageStatus::pass;
    s.detail = "the projective hypersurface h = 0 is nonsingular";
  } else {
    s.status = StageStatus::inconclusive;
    s.detail = exact.diagnostics + "; " + mod.diagnostics;
  }
  return s;
}

StageRecord stage_variants(const PaperConstants& c, const PipelineOptions& o, const PipelineState& state) {
  StageRecord s;
  s.name = "variants";
  if (o.skip_variants) {
    s.status = StageStatus::skipped;
    s.detail = "skipped by request";
    return s;
  }
  Json rows = Json::array();
  if (state.q_x) {
    const std::size_t idx_cache = 0;
    (void)idx_cache;
    for (const char* text : {"x2^2 - y2^2", "x2^2 - y1^2", "x2^2 - 2*y2^2"}) {
      const QPoly r = parse_polynomial<Rational>(text, c.vars);
      Json row{{"r", text}, {"status", "numerical evidence"}};
      const auto space = annihilator_space(combined_annihilated(c, r), {0, 1, 2, 3, 4, 5, 6, 7}, 4);
      row["dim_annihilator"] = space.dimension();
      const auto sy = restrict_blocks<AlgebraicNumber>(space, {{c.basis_y, to_tower(c.q_y)}});
      const std::size_t x2q = *space.monomials->index_of(Monomial::variable(2, 4));
      std::optional<ConstraintSpace<AlgebraicNumber>> sxy;
      if (sy && std::all_of(sy->directions.begin(), sy->directions.end(), [&](const auto& d) { return is_zero(d[x2q]); })) {
        // Q_x is fixed up to scale; match the value the y-block forces on x2^4.
        const AlgebraicNumber scale = sy->offset[x2q] * inverse(AlgebraicNumber(cx::x2_quartic_moment()));
        row["x_block_scale"] = to_string(scale);
        sxy = restrict_blocks<AlgebraicNumber>(*sy, {{c.basis_x, state.q_x->map<AlgebraicNumber>([&](const AlgebraicNumber& a) { return a * scale; })}});
      }
      if (sxy) {
        row["dim_block_restricted"] = sxy->dimension();
        PsdPointOptions opt = point_options(o);
        opt.numeric_fallback = false;
        const auto res = find_psd_point(*sxy, c.basis_xy, sign_oracle(state.tower_index), float_map(state.tower_index), opt);
        row["psd_point_found"] = res.found;
        if (res.found) row["kernel_dim"] = res.certificate.kernel.size();
      } else {
        row["psd_point_found"] = false;
      }
      const auto ir = interior_gram(c.basis_xy, c.f + c.g + r * r);
      row["gram_min_eigenvalue"] = ir.min_eigenvalue;
      row["gram_max_eigenvalue"] = ir.max_eigenvalue;
      row["boundary_like"] = ir.min_eigenvalue < 1e-4 * ir.max_eigenvalue;
      rows.push_back(row);
    }
  }

  const QPoly plus = parse_polynomial<Rational>("x2^2 + y2^2", c.vars);
  const QPoly hp = c.f + c.g + plus * plus;
  const auto ir = interior_gram(c.basis_xy, hp);
  Json row{{"r", "x2^2 + y2^2"}, {"gram_min_eigenvalue", ir.min_eigenvalue}, {"gram_max_eigenvalue", ir.max_eigenvalue}};
  std::optional<std::pair<QMatrix, PsdCertificate<Rational>>> exact;
  for (long den : rounding_denominators(o.max_denominator)) {
    const QMatrix a = round_gram_to_exact(ir.gram, c.basis_xy, hp, den);
    const auto out = psd_decide(a);
    if (const auto* cert = std::get_if<PsdCertificate<Rational>>(&out); cert && cert->rank() == c.basis_xy.size()) {
      row["max_denominator"] = den;
      exact.emplace(a, *cert);
      break;
    }
  }
  row["status"] = exact ? "verified" : "not found";
  row["positive_pivots"] = exact ? exact->second.rank() : 0;
  rows.push_back(row);
  s.numbers["variants"] = rows;
  s.checks["r = x2^2 + y2^2: rational Gram with 36 positive pivots"] = exact.has_value();
  if (exact) {
    s.certificate = {{"r", "x2^2 + y2^2"},
                     {"basis", format_monomials(c.basis_xy, c.vars)},
                     {"gram", to_json(exact->first)},
                     {"psd", psd_json(exact->second)}};
    s.status = StageStatus::pass;
    s.detail = "r = x2^2 + y2^2 gives a form in the interior of the SOS cone; other rows are numerical evidence";
  } else {
    s.status = StageStatus::inconclusive;
    s.detail = "no full-rank rational Gram matrix found within the denominator budget";
  }
  return s;
}

// ---------------------------------------------------------------------------------------------
// Report

std::string VerificationReport::verdict() const {
  bool any_fail = false, all_pass = true;
  for (const auto& s : stages) {
    if (s.status == StageStatus::skipped) continue;
    if (s.status == StageStatus::fail) any_fail = true;
    if (s.status != StageStatus::pass) all_pass = false;
  }
  if (any_fail) return "refuted";
  return all_pass ? "verified" : "inconclusive";
}

int VerificationReport::exit_code() const {
  const std::string v = verdict();
  return v == "verified" ? 0 : v == "refuted" ? 1 : 2;
}

Json VerificationReport::to_json() const {
  Json j{{"version", version}, {"verdict", verdict()}, {"beta_root", beta_root}, {"stages", Json::array()}};
  for (const auto& s : stages) {
    j["stages"].push_back({{"name", s.name},
                           {"status", to_string(s.status)},
                           {"numbers", s.numbers},
                           {"checks", s.checks},
                           {"detail", s.detail},
                           {"certificate", s.certificate},
                           {"seconds", s.seconds}});
  }
  return j;
}

VerificationReport full_report(const PipelineOptions& options, const PaperConstants& constants) {
  VerificationReport report;
  report.version = kReportVersion;
  PipelineState state;
  auto timed = [&](auto&& run) {
    const auto start = std::chrono::steady_clock::now();
    StageRecord r;
    try {
      r = run();
    } catch (const BudgetExceeded& e) {
      r.status = StageStatus::inconclusive;
      r.detail = e.what();
    } catch (const std::exception& e) {
      r.status = StageStatus::fail;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.stages.push_back(std::move(r));
  };
  auto named = [](std::string name, auto&& fn) {
    return [name = std::move(name), fn]() {
      StageRecord r = fn();
      r.name = name;
      return r;
    };
  };
  timed(named("block_f", [&] { return stage_block1(constants, options, state); }));
  timed(named("block_g", [&] { return stage_block2(constants); }));
  timed(named("combined", [&] { return stage_combined(constants, options, state); }));
  timed(named("positivity", [&] { return stage_positivity(constants); }));
  timed(named("smoothness", [&] { return stage_smoothness(constants, options); }));
  timed(named("variants", [&] { return stage_variants(constants, options, state); }));
  report.beta_root = state.tower_index == 0 ? "first" : "second";
  return report;
}

// ---------------------------------------------------------------------------------------------
// Re-verification

namespace {

using Checker = std::function<std::string(const Json& stage, const Json& report)>;

const Json& find_stage(const Json& report, const std::string& name) {
  for (const auto& s : report.at("stages"))
    if (s.at("name") == name) return s;
  throw InputError("report has no stage '" + name + "'");
}

std::string recheck_block1(const Json& st, const Json&) {
  const auto& c = paper_constants();
  const auto& cert = st.at("certificate");
  const std::size_t tower = cert.at("tower").at("beta_index").get<std::size_t>();
  if (tower > 1) return "invalid tower index";
  if (!(to_tower(c.f) == c.p1 * c.p1 + c.p2 * c.p2 + c.p3 * c.p3)) return "f does not reconstruct";
  const auto l = functional_from_json(cert.at("functional"), c.vars);
  for (const auto& p : {c.p1, c.p2, c.p3})
    if (!annihilates(l, p, {0, 1, 2, 3})) return "functional does not annihilate the p-ideal in degree 4";
  const KMatrix qx = kmatrix_from_json(cert.at("moment_matrix"));
  if (!(moment_matrix(l, c.basis_x) == qx)) return "moment matrix does not match the functional";
  if (!(vectors_from_json(cert.at("kernel")) == c.u)) return "kernel vectors differ from u1..u6";
  Json checks = Json::object(), numbers = Json::object();
  block1_checks(c, qx, kpsd_from_json(cert.at("psd")), tower, checks, numbers);
  for (const auto& [k, v] : checks.items())
    if (!v.get<bool>()) return "failed: " + k;
  return "";
}

std::string recheck_block2(const Json& st, const Json&) {
  const auto& c = paper_constants();
  const auto& cert = st.at("certificate");
  if (!(qmatrix_from_json(cert.at("moment_matrix")) == c.q_y)) return "matrix differs from Q_y";
  const auto psd = qpsd_from_json(cert.at("psd"));
  if (!check_certificate(c.q_y, psd, SignOracle<Rational>(rational_sign))) return "PSD certificate rejected";
  if (psd.rank() != 6) return "rank is not 6";
  std::vector<Vector<Rational>> qs;
  for (const auto& q : {c.q1, c.q2, c.q3, c.q4}) {
    qs.push_back(coefficients(q, c.basis_y));
    if (!is_zero_vector(c.q_y * qs.back())) return "q not in the kernel";
  }
  if (span_rank(qs, 10) != 4) return "q1..q4 dependent";
  if (!(c.g == c.q1 * c.q1 + c.q2 * c.q2 + c.q3 * c.q3 + c.q4 * c.q4)) return "g does not reconstruct";
  return "";
}

std::string recheck_combined(const Json& st, const Json& report) {
  const auto& c = paper_constants();
  const auto& cert = st.at("certificate");
  const std::size_t tower = cert.at("tower").at("beta_index").get<std::size_t>();
  if (tower > 1) return "invalid tower index";
  const auto l = functional_from_json(cert.at("functional"), c.vars);
  for (const auto& p : combined_annihilated(c, c.r))
    if (!annihilates(l, p, {0, 1, 2, 3, 4, 5, 6, 7})) return "functional does not annihilate the ideal in degree 4";
  const KMatrix qx = kmatrix_from_json(find_stage(report, "block_f").at("certificate").at("moment_matrix"));
  if (!(moment_matrix(l, c.basis_x) == qx)) return "x-block differs from Q_x";
  if (!(moment_matrix(l, c.basis_y) == to_tower(c.q_y))) return "y-block differs from Q_y";
  const KMatrix q = kmatrix_from_json(cert.at("moment_matrix"));
  if (!(moment_matrix(l, c.basis_xy) == q)) return "moment matrix does not match the functional";
  Json checks = Json::object(), numbers = Json::object();
  combined_checks(c, q, kpsd_from_json(cert.at("psd")), tower, checks, numbers);
  for (const auto& [k, v] : checks.items())
    if (!v.get<bool>()) return "failed: " + k;
  return "";
}

std::string recheck_positivity(const Json& st, const Json&) {
  const auto& c = paper_constants();
  return check_positivity(positivity_from_json(st.at("certificate"), c.vars), c.h) ? "" : "certificate rejected";
}

std::string recheck_smoothness(const Json& st, const Json&) {
  const auto& c = paper_constants();
  const auto& cert = st.at("certificate");
  if (cert.at("prime").get<std::uint32_t>() != Fp::kModulus) return "unsupported prime";
  const auto mod = modular_smoothness(c.h, cert.at("max_degree").get<unsigned>());
  if (mod.status != SmoothnessStatus::nonsingular) return "recomputation does not certify nonsingularity";
  if (cert.at("vanishing_degree") != Json(*mod.vanishing_degree)) return "vanishing degree differs";
  return "";
}

std::string recheck_variants(const Json& st, const Json&) {
  const auto& c = paper_constants();
  const auto& cert = st.at("certificate");
  const QPoly plus = parse_polynomial<Rational>(cert.at("r").get<std::string>(), c.vars);
  if (!(plus == parse_polynomial<Rational>("x2^2 + y2^2", c.vars))) return "unexpected coupling term";
  const auto basis = parse_monomials(cert.at("basis").get<std::string>(), c.vars);
  const QMatrix a = qmatrix_from_json(cert.at("gram"));
  if (!(gram_expand(c.vars, basis, a) == c.f + c.g + plus * plus)) return "Gram matrix does not expand to the variant";
  const auto psd = qpsd_from_json(cert.at("psd"));
  if (!check_certificate(a, psd, SignOracle<Rational>(rational_sign))) return "PSD certificate rejected";
  if (psd.rank() != basis.size()) return "Gram matrix is not positive definite";
  return "";
}

}  // namespace

RecheckResult recheck_report(const Json& report) {
  static const std::map<std::string, Checker> checkers{
      {"block_f", recheck_block1}, {"block_g", recheck_block2},       {"combined", recheck_combined},
      {"positivity", recheck_positivity}, {"smoothness", recheck_smoothness}, {"variants", recheck_variants},
  };
  RecheckResult out;
  if (!report.is_object() || !report.contains("stages")) throw InputError("not a verification report");
  if (report.value("version", "") != kReportVersion) throw InputError("unsupported report version");
  for (const auto& st : report.at("stages")) {
    const std::string name = st.at("name").get<std::string>();
    const StageStatus status = parse_stage_status(st.at("status").get<std::string>());
    if (status != StageStatus::pass) {
      out.lines.push_back(name + ": " + to_string(status) + " (nothing to re-verify)");
      continue;
    }
    const auto it = checkers.find(name);
    std::string why;
    if (it == checkers.end()) {
      why = "unknown stage";
    } else {
      try {
        why = it->second(st, report);
      } catch (const std::exception& e) {
        why = std::string("malformed certificate: ") + e.what();
      }
    }
    if (why.empty()) {
      out.lines.push_back(name + ": pass, certificate re-verified");
    } else {
      out.ok = false;
      out.lines.push_back(name + ": pass claimed, re-verification FAILED (" + why + ")");
    }
  }
  return out;
}

}  // namespace soscert
