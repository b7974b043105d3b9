#include "soscert/numopt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace soscert {

namespace {

using EMat = Eigen::MatrixXd;
using EVec = Eigen::VectorXd;

EMat to_eigen(const FloatMatrix& m) {
  EMat e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

FloatMatrix from_eigen(const EMat& e) {
  FloatMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

double frobenius_inner(const FloatMatrix& a, const FloatMatrix& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

}  // namespace

FloatMatrix symmetrize(const FloatMatrix& m) {
  if (!m.is_square()) throw InputError("symmetrize requires a square matrix");
  FloatMatrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

FloatMatrix to_float(const QMatrix& m) {
  return m.map<double>([](const Rational& q) { return q.get_d(); });
}

FloatMatrix to_float(const KMatrix& m, const TowerDescriptor& tower) {
  return m.map<double>([&](const AlgebraicNumber& a) { return to_double(a, tower); });
}

double frobenius_norm(const FloatMatrix& m) { return std::sqrt(frobenius_inner(m, m)); }

EigenDecomposition symmetric_eigen(const FloatMatrix& m) {
  if (!m.is_square()) throw InputError("eigendecomposition requires a square matrix");
  const EMat e = to_eigen(symmetrize(m));
  if (!e.allFinite()) throw NumericalError("non-finite matrix entry");
  Eigen::SelfAdjointEigenSolver<EMat> solver(e);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const Eigen::Index n = e.rows();
  EigenDecomposition out;
  out.vectors = FloatMatrix(n, n);
  // Eigen sorts ascending.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.values.push_back(solver.eigenvalues()(src));
    for (Eigen::Index i = 0; i < n; ++i) out.vectors(i, k) = solver.eigenvectors()(i, src);
  }
  return out;
}

std::size_t estimate_rank(const std::vector<double>& eigenvalues, double relative_threshold) {
  if (eigenvalues.empty()) return 0;
  const double top = *std::max_element(eigenvalues.begin(), eigenvalues.end());
  if (top <= 0) return 0;
  return static_cast<std::size_t>(
      std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](double v) { return v > relative_threshold * top; }));
}

FloatMatrix psd_clip(const FloatMatrix& m) {
  const auto e = symmetric_eigen(m);
  const std::size_t n = m.rows();
  FloatMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] <= 0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += e.values[k] * e.vectors(i, k) * e.vectors(j, k);
  }
  return out;
}

FloatMatrix AffineFamily::at(const std::vector<double>& t) const {
  if (t.size() != directions.size()) throw InputError("parameter count mismatch");
  FloatMatrix m = offset;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] == 0) continue;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += t[k] * directions[k](i, j);
  }
  return m;
}

std::vector<double> AffineFamily::nearest_parameters(const FloatMatrix& x) const {
  const std::size_t k = directions.size();
  if (k == 0) return {};
  EMat gram(k, k);
  EVec rhs(k);
  const FloatMatrix diff = x - offset;
  for (std::size_t a = 0; a < k; ++a) {
    rhs(a) = frobenius_inner(directions[a], diff);
    for (std::size_t b = a; b < k; ++b) gram(a, b) = gram(b, a) = frobenius_inner(directions[a], directions[b]);
  }
  const EVec t = gram.completeOrthogonalDecomposition().solve(rhs);
  return std::vector<double>(t.data(), t.data() + k);
}

ProjectionResult project_affine_psd(const AffineFamily& family, std::vector<double> start,
                                    const ProjectionOptions& options) {
  ProjectionResult res;
  std::vector<double> t = std::move(start);
  FloatMatrix m = family.at(t);
  const double scale = 1.0 + frobenius_norm(m);
  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    const FloatMatrix x = psd_clip(m);
    t = family.nearest_parameters(x);
    const FloatMatrix next = family.at(t);
    const double step = frobenius_norm(next - m);
    res.residual = frobenius_norm(x - next);
    m = next;
    if (step < options.tolerance * scale) {
      res.converged = true;
      break;
    }
  }
  const auto e = symmetric_eigen(m);
  res.parameters = std::move(t);
  res.matrix = std::move(m);
  res.rank = estimate_rank(e.values, options.rank_threshold);
  res.min_eigenvalue = e.values.empty() ? 0.0 : e.values.back();
  return res;
}

ProjectionResult max_rank_point(const AffineFamily& family, double scale, const ProjectionOptions& options) {
  const std::size_t k = family.directions.size();
  std::vector<std::vector<double>> starts{std::vector<double>(k, 0.0)};
  for (double factor : {1.0, 10.0})
    for (std::size_t i = 0; i < k; ++i)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> s(k, 0.0);
        s[i] = sgn * factor * scale;
        starts.push_back(std::move(s));
      }
  std::vector<double> avg(k, 0.0);
  int used = 0, iterations = 0;
  bool converged = true;
  for (const auto& s : starts) {
    const auto run = project_affine_psd(family, s, options);
    iterations += run.iterations;
    converged = converged && run.converged;
    for (std::size_t i = 0; i < k; ++i) avg[i] += run.parameters[i];
    ++used;
  }
  for (auto& x : avg) x /= used;
  ProjectionResult res;
  res.matrix = family.at(avg);
  const auto e = symmetric_eigen(res.matrix);
  res.parameters = std::move(avg);
  res.rank = estimate_rank(e.values, options.rank_threshold);
  res.min_eigenvalue = e.values.empty() ? 0.0 : e.values.back();
  res.residual = frobenius_norm(psd_clip(res.matrix) - res.matrix);
  res.iterations = iterations;
  res.converged = converged;
  return res;
}

Rational rationalize(double x, long max_denominator) {
  if (!std::isfinite(x)) throw InputError("cannot rationalize a non-finite value");
  if (max_denominator < 1) throw InputError("max_denominator must be at least 1");
  Rational rest(x);
  // Convergents h/k from the recurrences h_n = a_n h_{n-1} + h_{n-2}, likewise for k.
  Integer h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  Rational best;
  bool have = false;
  for (int iter = 0; iter < 64; ++iter) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    const Integer h = a * h1 + h2, k = a * k1 + k2;
    if (k > max_denominator) break;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    best = Rational(h, k);
    best.canonicalize();
    have = true;
    const Rational frac = rest - a;
    if (sgn(frac) == 0) break;
    rest = 1 / frac;
  }
  return have ? best : Rational(0);
}

std::optional<AlgebraicNumber> recognize_tower(double x, const TowerDescriptor& tower, const TowerRounding& cfg) {
  constexpr std::size_t kD = AlgebraicNumber::kDegree;
  std::array<double, kD> basis{};
  for (std::size_t i = 0; i < kD; ++i) basis[i] = to_double(AlgebraicNumber::basis(i), tower);
  for (long den = 1; den <= cfg.max_denominator; ++den) {
    for (long height = 0; height <= cfg.height; ++height) {
      std::array<long, kD> c{};
      c.fill(-height);
      while (true) {
        long top = 0;
        double value = 0;
        for (std::size_t i = 0; i < kD; ++i) {
          top = std::max(top, std::labs(c[i]));
          value += static_cast<double>(c[i]) * basis[i];
        }
        if (top == height && std::fabs(value / static_cast<double>(den) - x) < cfg.tolerance) {
          AlgebraicNumber::Coords coords;
          for (std::size_t i = 0; i < kD; ++i) coords[i] = make_rational(c[i], den);
          return AlgebraicNumber(coords);
        }
        std::size_t i = 0;
        while (i < kD && c[i] == height) c[i++] = -height;
        if (i == kD) break;
        ++c[i];
      }
    }
  }
  return std::nullopt;
}

namespace {

// Unordered index pairs of the basis grouped by their product monomial.
std::map<Monomial, std::vector<std::pair<std::size_t, std::size_t>>, MonomialOrder> pair_groups(
    const std::vector<Monomial>& basis) {
  std::map<Monomial, std::vector<std::pair<std::size_t, std::size_t>>, MonomialOrder> groups(kDegRevLex);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) groups[basis[i] * basis[j]].emplace_back(i, j);
  return groups;
}

template <class Groups>
void check_support(const Groups& groups, const QPoly& f) {
  for (const auto& [m, c] : f.terms())
    if (!groups.count(m)) throw InputError("polynomial has a monomial outside the Gram basis products");
}

std::size_t ordered_count(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::size_t c = 0;
  for (const auto& [i, j] : pairs) c += i == j ? 1 : 2;
  return c;
}

}  // namespace

QMatrix round_gram_to_exact(const FloatMatrix& g, const std::vector<Monomial>& basis, const QPoly& f,
                            long max_denominator) {
  const std::size_t n = basis.size();
  if (g.rows() != n || g.cols() != n) throw InputError("Gram matrix size does not match the basis");
  const auto groups = pair_groups(basis);
  check_support(groups, f);
  QMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rationalize(0.5 * (g(i, j) + g(j, i)), max_denominator);
  for (const auto& [m, pairs] : groups) {
    Rational residual = f.coefficient(m);
    for (const auto& [i, j] : pairs) residual -= i == j ? a(i, i) : Rational(2 * a(i, j));
    if (sgn(residual) == 0) continue;
    const Rational share = residual / static_cast<long>(ordered_count(pairs));
    for (const auto& [i, j] : pairs) {
      a(i, j) += share;
      if (i != j) a(j, i) += share;
    }
  }
  return a;
}

namespace {

struct SparseSym {
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;  // full symmetric listing
};

SparseSym unit(std::size_t i, std::size_t j, double scale) {
  SparseSym s;
  if (i == j) s.entries.emplace_back(i, i, scale);
  else {
    s.entries.emplace_back(i, j, scale);
    s.entries.emplace_back(j, i, scale);
  }
  return s;
}

}  // namespace

InteriorResult interior_gram(const std::vector<Monomial>& basis, const QPoly& f, const BarrierOptions& options) {
  const std::size_t n = basis.size();
  const auto groups = pair_groups(basis);
  check_support(groups, f);

  // Minimum-norm Gram matrix plus a basis of the Gram matrices of zero.
  EMat a0 = EMat::Zero(n, n);
  std::vector<SparseSym> dirs;
  for (const auto& [m, pairs] : groups) {
    const double share = f.coefficient(m).get_d() / static_cast<double>(ordered_count(pairs));
    for (const auto& [i, j] : pairs) a0(i, j) = a0(j, i) = share;
    const auto [i0, j0] = pairs.front();
    const double w0 = i0 == j0 ? 1.0 : 0.5;
    for (std::size_t p = 1; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      SparseSym d = unit(i, j, i == j ? 1.0 : 0.5);
      for (const auto& e : unit(i0, j0, -w0).entries) d.entries.push_back(e);
      dirs.push_back(std::move(d));
    }
  }
  const std::size_t k = dirs.size();

  auto assemble = [&](const EVec& v) {
    EMat a = a0;
    for (std::size_t d = 0; d < k; ++d)
      if (v(d) != 0)
        for (const auto& [i, j, x] : dirs[d].entries) a(i, j) += v(d) * x;
    return a;
  };

  EVec v = EVec::Zero(k);
  double s;
  {
    Eigen::SelfAdjointEigenSolver<EMat> es(a0, Eigen::EigenvaluesOnly);
    s = std::max(0.0, -es.eigenvalues()(0)) + 1.0 + 0.1 * std::fabs(es.eigenvalues()(n - 1));
  }
  auto objective = [&](const EVec& vv, double ss, double tau, double& value) {
    EMat m = assemble(vv);
    m.diagonal().array() += ss;
    Eigen::LLT<EMat> llt(m);
    if (llt.info() != Eigen::Success) return false;
    const EMat& l = llt.matrixL();
    value = tau * ss - 2.0 * l.diagonal().array().log().sum();
    return std::isfinite(value);
  };

  InteriorResult res;
  double tau = options.initial_weight;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    res.outer_iterations = outer + 1;
    for (int it = 0; it < options.max_newton; ++it) {
      EMat m = assemble(v);
      m.diagonal().array() += s;
      Eigen::LLT<EMat> llt(m);
      if (llt.info() != Eigen::Success) throw NumericalError("barrier iterate left the feasible region");
      const EMat w = llt.solve(EMat::Identity(n, n));
      const EMat w2 = w * w;
      EVec grad(k + 1);
      EMat hess(k + 1, k + 1);
      for (std::size_t d = 0; d < k; ++d) {
        double gd = 0, hs = 0;
        for (const auto& [i, j, x] : dirs[d].entries) {
          gd += x * w(j, i);
          hs += x * w2(j, i);
        }
        grad(d) = -gd;
        hess(d, k) = hess(k, d) = hs;
        for (std::size_t e = d; e < k; ++e) {
          double h = 0;
          for (const auto& [a, b, x] : dirs[d].entries)
            for (const auto& [c, dd, y] : dirs[e].entries) h += x * y * w(b, c) * w(dd, a);
          hess(d, e) = hess(e, d) = h;
        }
      }
      grad(k) = tau - w.trace();
      hess(k, k) = w2.trace();
      const EVec step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (!std::isfinite(decrement) || decrement / 2 < 1e-10) break;
      double f0;
      objective(v, s, tau, f0);
      double t = 1.0, f1 = 0;
      while (t > 1e-12) {
        const EVec vt = v + t * step.head(k);
        const double st = s + t * step(k);
        if (objective(vt, st, tau, f1) && f1 <= f0 - 0.25 * t * decrement) break;
        t *= 0.5;
      }
      if (t <= 1e-12) break;
      v += t * step.head(k);
      s += t * step(k);
    }
    const EMat a = assemble(v);
    Eigen::SelfAdjointEigenSolver<EMat> es(a, Eigen::EigenvaluesOnly);
    res.min_eigenvalue = es.eigenvalues()(0);
    res.max_eigenvalue = es.eigenvalues()(n - 1);
    // Suboptimality of the smallest eigenvalue on the central path is at most n / tau.
    if (res.min_eigenvalue > 0 && static_cast<double>(n) / tau < options.relative_gap * res.min_eigenvalue) break;
    tau *= options.weight_growth;
  }
  res.gram = from_eigen(assemble(v));
  res.strictly_feasible = res.min_eigenvalue > 0;
  return res;
}

}  // namespace soscert
