#pragma once

// Exact dense linear algebra over Q, K and prime fields.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "soscert/errors.hpp"
#include "soscert/rational.hpp"
#include "soscert/tower.hpp"

namespace soscert {

template <class F>
using Vector = std::vector<F>;

inline bool is_zero(double x) { return x == 0.0; }

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0L)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1L);
    return m;
  }
  static Matrix from_rows(const std::vector<Vector<F>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InputError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector<F> row(std::size_t i) const { return Vector<F>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vector<F> column(std::size_t j) const {
    Vector<F> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<Vector<F>> row_list() const {
    std::vector<Vector<F>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& x : data_)
      if (!soscert::is_zero(x)) return false;
    return true;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) { return combine(a, b, false); }
  friend Matrix operator-(const Matrix& a, const Matrix& b) { return combine(a, b, true); }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& x = a(i, k);
        if (soscert::is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!soscert::is_zero(b(k, j))) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend Vector<F> operator*(const Matrix& a, const Vector<F>& v) {
    if (a.cols_ != v.size()) throw InputError("matrix-vector dimension mismatch");
    Vector<F> out(a.rows_, F(0L));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!soscert::is_zero(v[j]) && !soscert::is_zero(a(i, j))) out[i] += a(i, j) * v[j];
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  template <class G, class Fn>
  Matrix<G> map(Fn&& fn) const {
    Matrix<G> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = fn((*this)(i, j));
    return m;
  }

 private:
  static Matrix combine(const Matrix& a, const Matrix& b, bool subtract) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix dimension mismatch");
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) {
      if (subtract) c.data_[k] -= b.data_[k];
      else c.data_[k] += b.data_[k];
    }
    return c;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

using QMatrix = Matrix<Rational>;
using KMatrix = Matrix<AlgebraicNumber>;

template <class F>
F dot(const Vector<F>& a, const Vector<F>& b) {
  if (a.size() != b.size()) throw InputError("vector length mismatch");
  F s(0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!soscert::is_zero(a[i]) && !soscert::is_zero(b[i])) s += a[i] * b[i];
  return s;
}

template <class F>
bool is_zero_vector(const Vector<F>& v) {
  for (const auto& x : v)
    if (!soscert::is_zero(x)) return false;
  return true;
}

/// vᵀ M v
template <class F>
F quadratic_form(const Matrix<F>& m, const Vector<F>& v) {
  return dot(v, m * v);
}

template <class F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form. Columns are scanned left to right and the first nonzero entry
/// at or below the current row becomes the pivot.
template <class F>
Echelon<F> rref(const Matrix<F>& m) {
  std::vector<Vector<F>> rows = m.row_list();
  const std::size_t nr = m.rows(), nc = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t p = r;
    while (p < nr && soscert::is_zero(rows[p][c])) ++p;
    if (p == nr) continue;
    std::swap(rows[p], rows[r]);
    const F inv = inverse(rows[r][c]);
    support.clear();
    for (std::size_t k = c; k < nc; ++k) {
      if (soscert::is_zero(rows[r][k])) continue;
      rows[r][k] = k == c ? F(1L) : F(rows[r][k] * inv);
      support.push_back(k);
    }
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == r || soscert::is_zero(rows[i][c])) continue;
      const F f = rows[i][c];
      for (std::size_t k : support) rows[i][k] -= f * rows[r][k];
      if constexpr (std::is_same_v<F, Rational>) {
        if (i > r) {
          const Rational s = primitive_scale(rows[i]);
          if (s != 1) {
            for (auto& x : rows[i]) x *= s;
          }
        }
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {Matrix<F>::from_rows(rows, nc), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).rank();
}

/// Basis of {v : M v = 0}, one vector per free column (ascending), with a 1 in that column.
template <class F>
std::vector<Vector<F>> nullspace(const Matrix<F>& m) {
  const Echelon<F> e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector<F>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<F> v(m.cols(), F(0L));
    v[f] = F(1L);
    for (std::size_t k = 0; k < e.pivots.size(); ++k) {
      if (!soscert::is_zero(e.reduced(k, f))) v[e.pivots[k]] = -e.reduced(k, f);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Stacks vectors as rows.
template <class F>
Matrix<F> stack(const std::vector<Vector<F>>& vectors, std::size_t dim) {
  return Matrix<F>::from_rows(vectors, dim);
}

/// Rank of the span of the given vectors of length dim.
template <class F>
std::size_t span_rank(const std::vector<Vector<F>>& vectors, std::size_t dim) {
  return rank(stack(vectors, dim));
}

template <class F>
bool in_span(const std::vector<Vector<F>>& basis, const Vector<F>& v) {
  auto extended = basis;
  extended.push_back(v);
  return span_rank(extended, v.size()) == span_rank(basis, v.size());
}

/// Solves A x = b. Returns one solution (free variables zero) or nullopt when inconsistent.
template <class F>
std::optional<Vector<F>> solve(const Matrix<F>& a, const Vector<F>& b) {
  if (b.size() != a.rows()) throw InputError("right-hand side length mismatch");
  Matrix<F> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const Echelon<F> e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) return std::nullopt;
  Vector<F> x(a.cols(), F(0L));
  for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = e.reduced(k, a.cols());
  return x;
}

// ---------------------------------------------------------------------------------------
// PSD decision

template <class F>
struct PsdPivot {
  std::size_t index;
  F value;           // positive
  Vector<F> column;  // column of the unit lower-triangular factor; 1 at index, zero above
};

/// M = sum_k value_k * column_k * column_kᵀ, i.e. M = L D Lᵀ.
template <class F>
struct PsdCertificate {
  std::size_t size = 0;
  std::vector<PsdPivot<F>> pivots;
  std::vector<Vector<F>> kernel;
  std::size_t rank() const { return pivots.size(); }

  Matrix<F> reassemble() const {
    Matrix<F> m(size, size);
    for (const auto& p : pivots)
      for (std::size_t i = 0; i < size; ++i) {
        if (soscert::is_zero(p.column[i])) continue;
        const F vi = p.value * p.column[i];
        for (std::size_t j = 0; j < size; ++j)
          if (!soscert::is_zero(p.column[j])) m(i, j) += vi * p.column[j];
      }
    return m;
  }
};

/// vᵀ M v = value < 0.
template <class F>
struct PsdRefutation {
  Vector<F> witness;
  F value;
};

template <class F>
using PsdOutcome = std::variant<PsdCertificate<F>, PsdRefutation<F>>;

template <class F>
using SignOracle = std::function<int(const F&)>;

/// Symmetric elimination in index order. A positive diagonal pivots; a zero row joins the
/// kernel; a negative diagonal or a zero diagonal with a nonzero row yields a refutation.
template <class F>
PsdOutcome<F> psd_decide(const Matrix<F>& m, const SignOracle<F>& sign) {
  if (!m.is_symmetric()) throw InputError("psd_decide requires a symmetric matrix");
  const std::size_t n = m.rows();
  Matrix<F> s = m;
  std::vector<PsdPivot<F>> pivots;
  std::vector<std::size_t> kernel_idx;

  auto lift = [&](Vector<F> w) {
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
      F acc(0L);
      for (std::size_t j = it->index + 1; j < n; ++j)
        if (!soscert::is_zero(it->column[j]) && !soscert::is_zero(w[j])) acc += it->column[j] * w[j];
      w[it->index] = -acc;
    }
    return w;
  };
  auto refute = [&](Vector<F> w) -> PsdOutcome<F> {
    Vector<F> v = lift(std::move(w));
    F value = quadratic_form(m, v);
    return PsdRefutation<F>{std::move(v), std::move(value)};
  };

  for (std::size_t i = 0; i < n; ++i) {
    const int sd = sign(s(i, i));
    if (sd < 0) {
      Vector<F> w(n, F(0L));
      w[i] = F(1L);
      return refute(std::move(w));
    }
    if (sd == 0) {
      std::size_t j = i + 1;
      while (j < n && soscert::is_zero(s(i, j))) ++j;
      if (j == n) {
        kernel_idx.push_back(i);
        continue;
      }
      // (t e_i + e_j)ᵀ S (t e_i + e_j) = 2 t s_ij + s_jj = -1
      Vector<F> w(n, F(0L));
      w[i] = -(s(j, j) + F(1L)) / (s(i, j) + s(i, j));
      w[j] = F(1L);
      return refute(std::move(w));
    }
    const F d = s(i, i);
    const F dinv = inverse(d);
    Vector<F> col(n, F(0L));
    col[i] = F(1L);
    for (std::size_t j = i + 1; j < n; ++j)
      if (!soscert::is_zero(s(j, i))) col[j] = s(j, i) * dinv;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (soscert::is_zero(col[j])) continue;
      for (std::size_t k = i + 1; k <= j; ++k) {
        if (soscert::is_zero(s(i, k))) continue;
        s(j, k) -= col[j] * s(i, k);
        if (k != j) s(k, j) = s(j, k);
      }
    }
    pivots.push_back({i, d, std::move(col)});
  }

  PsdCertificate<F> cert;
  cert.size = n;
  for (std::size_t i : kernel_idx) {
    Vector<F> w(n, F(0L));
    w[i] = F(1L);
    cert.kernel.push_back(lift(std::move(w)));
  }
  cert.pivots = std::move(pivots);
  return cert;
}

inline int rational_sign(const Rational& q) { return sgn(q); }

inline PsdOutcome<Rational> psd_decide(const QMatrix& m) {
  return psd_decide<Rational>(m, SignOracle<Rational>(rational_sign));
}
inline PsdOutcome<AlgebraicNumber> psd_decide(const KMatrix& m, const TowerDescriptor& tower) {
  return psd_decide<AlgebraicNumber>(m, SignOracle<AlgebraicNumber>([tower](const AlgebraicNumber& a) {
                                       return sign(a, tower);
                                     }));
}

/// Independent re-check of a certificate against M: exact reassembly, positive pivots,
/// unit triangular columns and M v = 0 for every kernel vector.
template <class F>
bool check_certificate(const Matrix<F>& m, const PsdCertificate<F>& cert, const SignOracle<F>& sign) {
  if (!m.is_square() || cert.size != m.rows()) return false;
  for (const auto& p : cert.pivots) {
    if (sign(p.value) <= 0 || p.column.size() != cert.size || !(p.column[p.index] == F(1L))) return false;
    for (std::size_t j = 0; j < p.index; ++j)
      if (!soscert::is_zero(p.column[j])) return false;
  }
  if (!(cert.reassemble() == m)) return false;
  for (const auto& v : cert.kernel)
    if (v.size() != cert.size || is_zero_vector(v) || !is_zero_vector(m * v)) return false;
  return cert.pivots.size() + cert.kernel.size() == cert.size &&
         span_rank(cert.kernel, cert.size) == cert.kernel.size();
}

template <class F>
bool check_refutation(const Matrix<F>& m, const PsdRefutation<F>& ref, const SignOracle<F>& sign) {
  return ref.witness.size() == m.rows() && sign(quadratic_form(m, ref.witness)) < 0;
}

// ---------------------------------------------------------------------------------------
// Field-coordinate helpers

/// Vectors over Q embedded into K.
Vector<AlgebraicNumber> to_tower(const Vector<Rational>& v);
KMatrix to_tower(const QMatrix& m);
std::optional<Vector<Rational>> to_rational(const Vector<AlgebraicNumber>& v);
std::optional<QMatrix> to_rational(const KMatrix& m);

/// Basis (in reduced echelon form) of span(B) ∩ Qⁿ for vectors B over K.
std::vector<Vector<Rational>> rational_intersection(const std::vector<Vector<AlgebraicNumber>>& basis,
                                                    std::size_t dim);

// ---------------------------------------------------------------------------------------
// Text format
//
//   rows R
//   cols C
//   field Q | field Q(a^3=2; b^2+a^2*b+1-a^2=0)     (optional, default Q)
//   e, e, ..., e                                     (R lines of C entries)
//
// Lines starting with '#' are comments.

struct MatrixDocument {
  bool tower_field = false;
  KMatrix matrix;
  /// Extra `key value` header lines other than rows/cols/field, in order.
  std::vector<std::pair<std::string, std::string>> headers;
};

MatrixDocument parse_matrix_document(std::string_view text);
std::string format_matrix(const QMatrix& m, const std::vector<std::pair<std::string, std::string>>& headers = {});
std::string format_matrix(const KMatrix& m, const std::vector<std::pair<std::string, std::string>>& headers = {});
std::string format_matrix(const Matrix<double>& m, const std::vector<std::pair<std::string, std::string>>& headers = {});

}  // namespace soscert
