#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "soscert/errors.hpp"
#include "soscert/gram.hpp"
#include "soscert/groebner.hpp"
#include "soscert/linalg.hpp"
#include "soscert/pipeline.hpp"
#include "soscert/positivity.hpp"

using namespace soscert;

namespace {

enum Exit { kVerified = 0, kRefuted = 1, kInconclusive = 2, kInputError = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TowerDescriptor tower(BetaRoot root) { return beta_roots().at(root == BetaRoot::second ? 1 : 0); }

QPoly read_rational_poly(const std::string& path) {
  const auto doc = parse_document(read_file(path));
  if (doc.tower_field) throw InputError("expected a polynomial with rational coefficients");
  if (doc.lines.size() != 1) throw InputError("expected exactly one polynomial");
  return parse_polynomial<Rational>(doc.lines.front(), doc.vars);
}

std::vector<std::size_t> occurring_variables(const QPoly& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.variables().size(); ++i) {
    for (const auto& [m, c] : p.terms()) {
      if (m[i] > 0) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

template <class F>
int report_psd(const PsdOutcome<F>& out) {
  if (const auto* c = std::get_if<PsdCertificate<F>>(&out)) {
    std::cout << "psd rank " << c->rank() << " of " << c->size << "\n";
    for (const auto& p : c->pivots) std::cout << "pivot " << p.index << " " << to_string(p.value) << "\n";
    return kVerified;
  }
  const auto& r = std::get<PsdRefutation<F>>(out);
  std::cout << "not psd\nwitness";
  for (const auto& x : r.witness) std::cout << " " << to_string(x);
  std::cout << "\nvalue " << to_string(r.value) << "\n";
  return kRefuted;
}

int cmd_psd(const std::string& path, BetaRoot root) {
  const auto doc = parse_matrix_document(read_file(path));
  if (!doc.tower_field) return report_psd(psd_decide(*to_rational(doc.matrix)));
  return report_psd(psd_decide(doc.matrix, tower(root)));
}

int cmd_kernel(const std::string& path) {
  const auto doc = parse_matrix_document(read_file(path));
  const auto ker = nullspace(doc.matrix);
  std::cout << format_matrix(stack(ker, doc.matrix.cols()), {{"dimension", std::to_string(ker.size())}});
  return kVerified;
}

int cmd_rational_intersect(const std::string& path) {
  const auto doc = parse_matrix_document(read_file(path));
  std::vector<Vector<AlgebraicNumber>> rows;
  for (std::size_t i = 0; i < doc.matrix.rows(); ++i) rows.push_back(doc.matrix.row(i));
  const auto rat = rational_intersection(rows, doc.matrix.cols());
  std::vector<Vector<AlgebraicNumber>> k;
  for (const auto& v : rat) k.push_back(to_tower(v));
  std::cout << format_matrix(stack(k, doc.matrix.cols()), {{"dimension", std::to_string(rat.size())}});
  return kVerified;
}

int cmd_positivity(const std::string& path, const std::string& method, std::size_t max_boxes) {
  const QPoly p = read_rational_poly(path);
  if (method == "gram") {
    const auto c = interior_gram_certificate(p);
    if (!c) {
      std::cout << "no positive definite rational Gram matrix found\n";
      return kInconclusive;
    }
    std::cout << "positive definite rational Gram matrix, size " << c->gram->basis.size() << ", denominator "
              << c->gram->max_denominator << ", smallest eigenvalue " << c->gram->min_eigenvalue << "\n";
    return check_positivity(*c, p) ? kVerified : kInconclusive;
  }
  const auto vars = occurring_variables(p);
  const auto r = interval_bnb(p, vars, max_boxes);
  std::cout << to_string(r.status) << " after " << r.boxes_examined << " boxes\n";
  if (r.status == BnbStatus::certified) return check_positivity(*r.certificate, p) ? kVerified : kInconclusive;
  if (r.status == BnbStatus::counterbox) {
    std::cout << "counterbox";
    for (const auto& iv : *r.counterbox) std::cout << " [" << to_string(iv.lo) << ", " << to_string(iv.hi) << "]";
    std::cout << "\n";
    return kRefuted;
  }
  return kInconclusive;
}

int cmd_smooth(const std::string& path, unsigned max_n, unsigned modular_degree, double timeout) {
  const QPoly p = read_rational_poly(path);
  const auto exact = projective_smoothness(p, max_n, timeout);
  std::cout << "exact: " << to_string(exact.status) << " (" << exact.diagnostics << ")\n";
  if (exact.status == SmoothnessStatus::nonsingular) return kVerified;
  if (modular_degree == 0) return kInconclusive;
  const auto mod = modular_smoothness(p, modular_degree, timeout);
  std::cout << "modular: " << to_string(mod.status) << " (" << mod.diagnostics << ")\n";
  return mod.status == SmoothnessStatus::nonsingular ? kVerified : kInconclusive;
}

int cmd_discover(const std::string& path, BetaRoot root, std::optional<std::size_t> rank) {
  const auto s = parse_constraint_space(read_file(path), Variables::standard());
  const auto t = tower(root);
  // Moment matrices over the degree-2 monomials of the space's quartic monomials.
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    for (const auto& m : s.monomials->monomials())
      if (m[i] > 0) {
        vars.push_back(i);
        break;
      }
  }
  const auto basis = monomials_in(vars, 2);
  PsdPointOptions opt;
  opt.target_rank = rank;
  const auto res = find_psd_point<AlgebraicNumber>(
      s, basis, [&](const AlgebraicNumber& a) { return sign(a, t); }, [&](const AlgebraicNumber& a) { return to_double(a, t); },
      opt);
  if (!res.found) {
    std::cout << "no PSD point found after " << res.candidates_tried << " candidates\n";
    return kInconclusive;
  }
  std::cout << format_matrix(res.moment, {{"route", res.route},
                                          {"rank", std::to_string(res.certificate.rank())},
                                          {"basis", format_monomials(basis, Variables::standard())}});
  return kVerified;
}

int cmd_recheck(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  const auto r = recheck_report(j);
  for (const auto& l : r.lines) std::cout << l << "\n";
  std::cout << (r.ok ? "recheck: ok" : "recheck: FAILED") << "\n";
  return r.ok ? kVerified : kRefuted;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int cmd_verify(const PipelineOptions& o, const std::string& out) {
  const auto report = full_report(o);
  for (const auto& s : report.stages) {
    std::cout << s.name << ": " << to_string(s.status);
    if (!s.detail.empty()) std::cout << " (" << s.detail << ")";
    std::cout << "\n";
  }
  std::cout << "verdict: " << report.verdict() << "\n";
  if (!out.empty()) {
    Json j = report.to_json();
    j["generated_at"] = utc_timestamp();
    std::ofstream f(out);
    if (!f) throw InputError("cannot write '" + out + "'");
    f << j.dump(1) << "\n";
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of sum-of-squares certificates"};
  app.require_subcommand(1);

  PipelineOptions opts;
  std::string beta = "auto", report_out, file, method = "bnb";
  std::size_t max_boxes = 100000;
  unsigned max_n = 8, modular_degree = 17;
  double timeout = 0;
  std::optional<std::size_t> rank;

  auto* verify = app.add_subcommand("verify-paper", "Run every stage and print the verdict");
  verify->add_flag("--skip-groebner", opts.skip_groebner, "Skip the nonsingularity stage");
  verify->add_flag("--skip-variants", opts.skip_variants, "Skip the coupling-term variants");
  verify->add_option("--beta-root", beta, "Real embedding of the tower")->check(CLI::IsMember({"first", "second", "auto"}));
  verify->add_option("--precision-bits", opts.precision_bits, "Width of the reported root enclosures")->check(CLI::Range(1, 4096));
  verify->add_option("--max-denominator", opts.max_denominator, "Largest rounding denominator")->check(CLI::PositiveNumber);
  verify->add_option("--timeout-seconds", opts.timeout_seconds, "Budget for the Groebner computations");
  verify->add_option("--report", report_out, "Write the JSON report here");

  auto* psd = app.add_subcommand("psd", "Decide whether a symmetric matrix is positive semidefinite");
  psd->add_option("--matrix", file, "Matrix file")->required();
  psd->add_option("--beta-root", beta, "Real embedding of the tower")->check(CLI::IsMember({"first", "second"}));

  auto* kernel = app.add_subcommand("kernel", "Exact nullspace basis");
  kernel->add_option("--matrix", file, "Matrix file")->required();

  auto* ri = app.add_subcommand("rational-intersect", "Rational vectors in the span of the rows");
  ri->add_option("--vectors", file, "Matrix file, one vector per row")->required();

  auto* pos = app.add_subcommand("positivity", "Certify strict positivity of a form");
  pos->add_option("--poly", file, "Polynomial file")->required();
  pos->add_option("--method", method, "gram or bnb")->check(CLI::IsMember({"gram", "bnb"}));
  pos->add_option("--max-boxes", max_boxes, "Box budget for bnb");

  auto* smooth = app.add_subcommand("smooth", "Certify that a projective hypersurface is nonsingular");
  smooth->add_option("--poly", file, "Polynomial file")->required();
  smooth->add_option("--max-n", max_n, "Largest variable power searched over Q");
  smooth->add_option("--modular-degree", modular_degree, "Degree bound mod p; 0 disables");
  smooth->add_option("--timeout-seconds", timeout, "Budget per Groebner computation");

  auto* discover = app.add_subcommand("discover", "Search a constraint space for a PSD moment matrix");
  discover->add_option("--space", file, "Constraint space file")->required();
  discover->add_option("--rank", rank, "Accept only points of this rank");
  discover->add_option("--beta-root", beta, "Real embedding of the tower")->check(CLI::IsMember({"first", "second"}));

  auto* recheck = app.add_subcommand("recheck", "Re-verify the certificates of a report");
  recheck->add_option("--report", file, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    const BetaRoot root = parse_beta_root(beta);
    if (*verify) {
      opts.beta_root = root;
      return cmd_verify(opts, report_out);
    }
    if (*psd) return cmd_psd(file, root);
    if (*kernel) return cmd_kernel(file);
    if (*ri) return cmd_rational_intersect(file);
    if (*pos) return cmd_positivity(file, method, max_boxes);
    if (*smooth) return cmd_smooth(file, max_n, modular_degree, timeout);
    if (*discover) return cmd_discover(file, root, rank);
    if (*recheck) return cmd_recheck(file);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
