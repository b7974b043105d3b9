#include "soscert/gram.hpp"

#include <map>
#include <sstream>

namespace soscert {

MonomialList::MonomialList(std::vector<Monomial> monomials) : monomials_(std::move(monomials)) {
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    if (!index_.emplace(monomials_[i], i).second) throw InputError("duplicate monomial in list");
  }
}

std::optional<std::size_t> MonomialList::index_of(const Monomial& m) const {
  const auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Monomial> monomials_in(const std::vector<std::size_t>& variables, unsigned degree, MonomialOrder order) {
  std::vector<Monomial> out;
  for (const auto& m : monomial_basis(variables.size(), degree, order)) {
    std::array<unsigned, kMaxVars> exps{};
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i] >= kMaxVars) throw InputError("variable index out of range");
      exps[variables[i]] = m[i];
    }
    out.push_back(Monomial::from_exponents(exps));
  }
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return order.greater(a, b); });
  return out;
}

template <class F>
Polynomial<F> gram_expand(const Variables& vars, const std::vector<Monomial>& basis, const Matrix<F>& a) {
  if (a.rows() != basis.size() || a.cols() != basis.size()) throw InputError("Gram matrix size does not match basis");
  std::vector<typename Polynomial<F>::Term> terms;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (!is_zero(a(i, j))) terms.emplace_back(basis[i] * basis[j], a(i, j));
  return Polynomial<F>::from_terms(vars, terms);
}

template <class F>
bool sos_verify(const WeightedSquares<F>& parts, const Polynomial<F>& f, const SignOracle<F>& sign) {
  Polynomial<F> sum(f.variables());
  for (const auto& [w, p] : parts) {
    if (sign(w) <= 0) return false;
    sum += (p * p).scaled(w);
  }
  return sum == f;
}

template <class F>
WeightedSquares<F> weighted_sos_from_certificate(const Variables& vars, const std::vector<Monomial>& basis,
                                                 const Matrix<F>& a, const PsdCertificate<F>& cert) {
  if (cert.size != basis.size() || !(cert.reassemble() == a))
    throw InputError("certificate does not reassemble the Gram matrix");
  WeightedSquares<F> out;
  for (const auto& p : cert.pivots) {
    std::vector<typename Polynomial<F>::Term> terms;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (!is_zero(p.column[i])) terms.emplace_back(basis[i], p.column[i]);
    out.emplace_back(p.value, Polynomial<F>::from_terms(vars, terms));
  }
  return out;
}

template <class F>
F MomentFunctional<F>::operator()(const Monomial& m) const {
  const auto idx = monomials->index_of(m);
  if (!idx) throw InputError("monomial outside the functional's domain");
  return values[*idx];
}

template <class F>
F MomentFunctional<F>::apply(const Polynomial<F>& p) const {
  F s(0L);
  for (const auto& [m, c] : p.terms()) s += c * (*this)(m);
  return s;
}

template <class F>
Matrix<F> moment_matrix(const MomentFunctional<F>& l, const std::vector<Monomial>& basis) {
  Matrix<F> m(basis.size(), basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) m(i, j) = m(j, i) = l(basis[i] * basis[j]);
  return m;
}

template <class F>
MomentFunctional<F> ConstraintSpace<F>::point(const Vector<F>& t) const {
  if (t.size() != directions.size()) throw InputError("parameter count mismatch");
  MomentFunctional<F> l{monomials, offset};
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (is_zero(t[k])) continue;
    for (std::size_t i = 0; i < l.values.size(); ++i)
      if (!is_zero(directions[k][i])) l.values[i] += t[k] * directions[k][i];
  }
  return l;
}

template <class F>
ConstraintSpace<F> annihilator_space(const std::vector<Polynomial<F>>& polys, const std::vector<std::size_t>& variables,
                                     unsigned degree, MonomialOrder order) {
  auto columns = std::make_shared<const MonomialList>(monomials_in(variables, degree, order));
  std::vector<Vector<F>> rows;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    if (!p.is_homogeneous() || p.total_degree() > static_cast<int>(degree))
      throw InputError("annihilated polynomials must be homogeneous of degree at most the target degree");
    for (const auto& q : monomials_in(variables, degree - static_cast<unsigned>(p.total_degree()), order)) {
      Vector<F> row(columns->size(), F(0L));
      for (const auto& [m, c] : p.terms()) {
        const auto idx = columns->index_of(m * q);
        if (!idx) throw InputError("polynomial uses a variable outside the functional's domain");
        row[*idx] += c;
      }
      rows.push_back(std::move(row));
    }
  }
  ConstraintSpace<F> s;
  s.monomials = columns;
  s.offset = Vector<F>(columns->size(), F(0L));
  if (rows.empty()) {
    for (std::size_t i = 0; i < columns->size(); ++i) {
      Vector<F> e(columns->size(), F(0L));
      e[i] = F(1L);
      s.directions.push_back(std::move(e));
    }
  } else {
    s.directions = nullspace(stack(rows, columns->size()));
  }
  return s;
}

namespace {

// Imposes A t = rhs on the parameters of s.
template <class F>
std::optional<ConstraintSpace<F>> impose(const ConstraintSpace<F>& s, const Matrix<F>& a, const Vector<F>& rhs) {
  ConstraintSpace<F> out;
  out.monomials = s.monomials;
  out.affine = s.affine || !is_zero_vector(rhs);
  out.offset = s.offset;
  if (s.dimension() == 0) {
    if (!is_zero_vector(rhs)) return std::nullopt;
    return s;
  }
  const auto t0 = solve(a, rhs);
  if (!t0) return std::nullopt;
  for (std::size_t k = 0; k < s.dimension(); ++k) {
    if (is_zero((*t0)[k])) continue;
    for (std::size_t i = 0; i < out.offset.size(); ++i)
      if (!is_zero(s.directions[k][i])) out.offset[i] += (*t0)[k] * s.directions[k][i];
  }
  for (const auto& n : nullspace(a)) {
    Vector<F> d(out.offset.size(), F(0L));
    for (std::size_t k = 0; k < n.size(); ++k) {
      if (is_zero(n[k])) continue;
      for (std::size_t i = 0; i < d.size(); ++i)
        if (!is_zero(s.directions[k][i])) d[i] += n[k] * s.directions[k][i];
    }
    out.directions.push_back(std::move(d));
  }
  return out;
}

}  // namespace

template <class F>
std::optional<ConstraintSpace<F>> restrict_values(const ConstraintSpace<F>& s,
                                                  const std::vector<std::pair<Monomial, F>>& values) {
  Matrix<F> a(values.size(), s.dimension());
  Vector<F> rhs(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    const auto idx = s.monomials->index_of(values[r].first);
    if (!idx) throw InputError("prescribed monomial outside the functional's domain");
    for (std::size_t k = 0; k < s.dimension(); ++k) a(r, k) = s.directions[k][*idx];
    rhs[r] = values[r].second - s.offset[*idx];
  }
  return impose(s, a, rhs);
}

template <class F>
std::optional<ConstraintSpace<F>> restrict_blocks(const ConstraintSpace<F>& s,
                                                  const std::vector<std::pair<std::vector<Monomial>, Matrix<F>>>& blocks) {
  std::map<Monomial, F, MonomialOrder> prescribed(kDegRevLex);
  for (const auto& [basis, m] : blocks) {
    if (m.rows() != basis.size() || !m.is_symmetric()) throw InputError("block matrix does not match its basis");
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j) {
        const auto [it, inserted] = prescribed.try_emplace(basis[i] * basis[j], m(i, j));
        if (!inserted && !(it->second == m(i, j))) return std::nullopt;
      }
  }
  return restrict_values(s, std::vector<std::pair<Monomial, F>>(prescribed.begin(), prescribed.end()));
}

template <class F>
std::optional<ConstraintSpace<F>> kernel_constrained_space(const ConstraintSpace<F>& s,
                                                           const std::vector<Monomial>& basis,
                                                           const std::vector<Vector<F>>& kernel) {
  // Row i of M(l) v is sum_j l(b_i b_j) v_j, linear in the coordinates of l.
  std::vector<std::size_t> product_index(basis.size() * basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto idx = s.monomials->index_of(basis[i] * basis[j]);
      if (!idx) throw InputError("basis products leave the functional's domain");
      product_index[i * basis.size() + j] = *idx;
    }
  std::vector<Vector<F>> rows;
  Vector<F> rhs;
  for (const auto& v : kernel) {
    if (v.size() != basis.size()) throw InputError("kernel vector length does not match basis");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::map<std::size_t, F> coeff;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (!is_zero(v[j])) coeff[product_index[i * basis.size() + j]] += v[j];
      Vector<F> row(s.dimension(), F(0L));
      F constant(0L);
      for (const auto& [idx, c] : coeff) {
        if (is_zero(c)) continue;
        constant += c * s.offset[idx];
        for (std::size_t k = 0; k < s.dimension(); ++k)
          if (!is_zero(s.directions[k][idx])) row[k] += c * s.directions[k][idx];
      }
      if (is_zero_vector(row) && is_zero(constant)) continue;
      rows.push_back(std::move(row));
      rhs.push_back(-constant);
    }
  }
  if (rows.empty()) return s;
  return impose(s, stack(rows, s.dimension()), rhs);
}

template <class F>
CanonicalForm<F> canonical_form(const ConstraintSpace<F>& s) {
  const std::size_t n = s.ambient_dimension(), d = s.dimension();
  // Row-reducing the directions with reversed columns picks free coordinates latest-first.
  Matrix<F> rev(d, n);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < n; ++i) rev(k, n - 1 - i) = s.directions[k][i];
  const Echelon<F> e = rref(rev);
  CanonicalForm<F> out;
  out.point = MomentFunctional<F>{s.monomials, s.offset};
  for (std::size_t k = 0; k < e.rank(); ++k) {
    Vector<F> dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = e.reduced(k, n - 1 - i);
    const std::size_t free = n - 1 - e.pivots[k];
    out.free_coordinates.push_back(free);
    out.directions.push_back(std::move(dir));
  }
  for (std::size_t k = 0; k < out.directions.size(); ++k) {
    const F c = out.point.values[out.free_coordinates[k]];
    if (is_zero(c)) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_zero(out.directions[k][i])) out.point.values[i] -= c * out.directions[k][i];
  }
  return out;
}

template <class F>
PsdPointResult<F> find_psd_point(const ConstraintSpace<F>& s, const std::vector<Monomial>& basis,
                                 const SignOracle<F>& sign, const std::function<double(const F&)>& to_float,
                                 const PsdPointOptions& options) {
  const CanonicalForm<F> cf = canonical_form(s);
  PsdPointResult<F> res;
  auto try_candidate = [&](const MomentFunctional<F>& l, const char* route) {
    ++res.candidates_tried;
    Matrix<F> m = moment_matrix(l, basis);
    auto out = psd_decide<F>(m, sign);
    if (!std::holds_alternative<PsdCertificate<F>>(out)) return false;
    auto& cert = std::get<PsdCertificate<F>>(out);
    if (options.target_rank && cert.rank() != *options.target_rank) return false;
    res.found = true;
    res.route = route;
    res.functional = l;
    res.moment = std::move(m);
    res.certificate = std::move(cert);
    return true;
  };
  auto shifted = [&](const MomentFunctional<F>& base, std::size_t k, const F& t) {
    MomentFunctional<F> l = base;
    for (std::size_t i = 0; i < l.values.size(); ++i)
      if (!is_zero(cf.directions[k][i])) l.values[i] += t * cf.directions[k][i];
    return l;
  };

  if (try_candidate(cf.point, "canonical")) return res;
  for (std::size_t k = 0; k < cf.directions.size(); ++k)
    for (long sgn : {1L, -1L})
      if (try_candidate(shifted(cf.point, k, F(sgn)), "direction")) return res;
  if (!options.numeric_fallback || cf.directions.empty()) return res;

  AffineFamily family;
  auto float_moment = [&](const Vector<F>& values) {
    return moment_matrix(MomentFunctional<F>{s.monomials, values}, basis).template map<double>(to_float);
  };
  family.offset = float_moment(cf.point.values);
  for (const auto& dir : cf.directions) family.directions.push_back(float_moment(dir));
  res.numeric = max_rank_point(family, 1.0, options.projection);
  for (long den : options.denominators) {
    MomentFunctional<F> l = cf.point;
    for (std::size_t k = 0; k < cf.directions.size(); ++k) {
      const Rational t = rationalize(res.numeric->parameters[k], den);
      if (sgn(t) != 0) l = shifted(l, k, F(t));
    }
    if (try_candidate(l, "numeric")) return res;
  }
  return res;
}

std::string format_monomials(const std::vector<Monomial>& monomials, const Variables& vars) {
  std::string out;
  for (const auto& m : monomials) {
    if (!out.empty()) out += ' ';
    out += to_string(QPoly::monomial(vars, m));
  }
  return out;
}

std::vector<Monomial> parse_monomials(std::string_view text, const Variables& vars) {
  std::vector<Monomial> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    const QPoly p = parse_polynomial<Rational>(tok, vars);
    if (p.size() != 1 || p.terms()[0].second != 1) throw InputError("expected a monomial, got '" + tok + "'");
    out.push_back(p.terms()[0].first);
  }
  return out;
}

template <class F>
std::string format_constraint_space(const ConstraintSpace<F>& s, const Variables& vars) {
  std::vector<Vector<F>> rows;
  if (s.affine) rows.push_back(s.offset);
  for (const auto& d : s.directions) rows.push_back(d);
  const std::vector<std::pair<std::string, std::string>> headers{
      {"affine", s.affine ? "1" : "0"}, {"basis", format_monomials(s.monomials->monomials(), vars)}};
  return format_matrix(stack(rows, s.ambient_dimension()), headers);
}

ConstraintSpace<AlgebraicNumber> parse_constraint_space(std::string_view text, const Variables& vars) {
  const MatrixDocument doc = parse_matrix_document(text);
  ConstraintSpace<AlgebraicNumber> s;
  for (const auto& [k, v] : doc.headers) {
    if (k == "affine") s.affine = v == "1";
    if (k == "basis") s.monomials = std::make_shared<const MonomialList>(parse_monomials(v, vars));
  }
  if (!s.monomials) throw InputError("constraint space needs a 'basis' header");
  if (s.monomials->size() != doc.matrix.cols()) throw InputError("basis length does not match the column count");
  std::size_t r = 0;
  s.offset = Vector<AlgebraicNumber>(doc.matrix.cols(), AlgebraicNumber(0));
  if (s.affine) {
    if (doc.matrix.rows() == 0) throw InputError("affine space needs an offset row");
    s.offset = doc.matrix.row(r++);
  }
  for (; r < doc.matrix.rows(); ++r) s.directions.push_back(doc.matrix.row(r));
  if (span_rank(s.directions, s.ambient_dimension()) != s.directions.size())
    throw InputError("constraint space directions are linearly dependent");
  return s;
}

#define SOSCERT_INSTANTIATE_GRAM(F)                                                                                  \
  template Polynomial<F> gram_expand(const Variables&, const std::vector<Monomial>&, const Matrix<F>&);             \
  template bool sos_verify(const WeightedSquares<F>&, const Polynomial<F>&, const SignOracle<F>&);                  \
  template WeightedSquares<F> weighted_sos_from_certificate(const Variables&, const std::vector<Monomial>&,         \
                                                            const Matrix<F>&, const PsdCertificate<F>&);            \
  template struct MomentFunctional<F>;                                                                              \
  template Matrix<F> moment_matrix(const MomentFunctional<F>&, const std::vector<Monomial>&);                      \
  template struct ConstraintSpace<F>;                                                                               \
  template ConstraintSpace<F> annihilator_space(const std::vector<Polynomial<F>>&, const std::vector<std::size_t>&, \
                                                unsigned, MonomialOrder);                                           \
  template std::optional<ConstraintSpace<F>> restrict_values(const ConstraintSpace<F>&,                             \
                                                             const std::vector<std::pair<Monomial, F>>&);           \
  template std::optional<ConstraintSpace<F>> restrict_blocks(                                                       \
      const ConstraintSpace<F>&, const std::vector<std::pair<std::vector<Monomial>, Matrix<F>>>&);                  \
  template std::optional<ConstraintSpace<F>> kernel_constrained_space(                                              \
      const ConstraintSpace<F>&, const std::vector<Monomial>&, const std::vector<Vector<F>>&);                      \
  template CanonicalForm<F> canonical_form(const ConstraintSpace<F>&);                                              \
  template PsdPointResult<F> find_psd_point(const ConstraintSpace<F>&, const std::vector<Monomial>&,                \
                                            const SignOracle<F>&, const std::function<double(const F&)>&,           \
                                            const PsdPointOptions&);                                                \
  template std::string format_constraint_space(const ConstraintSpace<F>&, const Variables&);

SOSCERT_INSTANTIATE_GRAM(Rational)
SOSCERT_INSTANTIATE_GRAM(AlgebraicNumber)

}  // namespace soscert
