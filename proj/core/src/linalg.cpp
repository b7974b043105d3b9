#include "soscert/linalg.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "soscert/polynomial.hpp"

namespace soscert {

Vector<AlgebraicNumber> to_tower(const Vector<Rational>& v) {
  return Vector<AlgebraicNumber>(v.begin(), v.end());
}

KMatrix to_tower(const QMatrix& m) {
  return m.map<AlgebraicNumber>([](const Rational& q) { return AlgebraicNumber(q); });
}

std::optional<Vector<Rational>> to_rational(const Vector<AlgebraicNumber>& v) {
  Vector<Rational> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_rational()) return std::nullopt;
    out.push_back(x[0]);
  }
  return out;
}

std::optional<QMatrix> to_rational(const KMatrix& m) {
  QMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_rational()) return std::nullopt;
      out(i, j) = m(i, j)[0];
    }
  return out;
}

std::vector<Vector<Rational>> rational_intersection(const std::vector<Vector<AlgebraicNumber>>& basis,
                                                    std::size_t dim) {
  constexpr std::size_t kD = AlgebraicNumber::kDegree;
  // Generators of span_K(B) over Q: gamma * v for each field basis element gamma.
  std::vector<Vector<AlgebraicNumber>> gens;
  for (const auto& v : basis) {
    if (v.size() != dim) throw InputError("vector length mismatch");
    for (std::size_t g = 0; g < kD; ++g) {
      const AlgebraicNumber gamma = AlgebraicNumber::basis(g);
      Vector<AlgebraicNumber> w(dim);
      for (std::size_t i = 0; i < dim; ++i) w[i] = gamma * v[i];
      gens.push_back(std::move(w));
    }
  }
  if (gens.empty()) return {};
  // Rational combinations c with every irrational coordinate of sum c_k gens_k vanishing.
  QMatrix constraints(dim * (kD - 1), gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t t = 1; t < kD; ++t) constraints(i * (kD - 1) + (t - 1), k) = gens[k][i][t];
  std::vector<Vector<Rational>> images;
  for (const auto& c : nullspace(constraints)) {
    Vector<Rational> x(dim, Rational(0));
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (!is_zero(c[k]))
        for (std::size_t i = 0; i < dim; ++i) x[i] += c[k] * gens[k][i][0];
    images.push_back(std::move(x));
  }
  if (images.empty()) return {};
  const Echelon<Rational> e = rref(stack(images, dim));
  std::vector<Vector<Rational>> out;
  for (std::size_t k = 0; k < e.rank(); ++k) out.push_back(e.reduced.row(k));
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Header keys are identifiers of two or more characters, which no entry can start with.
bool is_header_key(std::string_view tok) {
  if (tok.size() < 2) return false;
  for (char c : tok)
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  if (s.empty()) throw InputError("expected a dimension");
  for (char c : s) {
    if (c < '0' || c > '9') throw InputError("bad dimension '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

template <class Fmt>
std::string format_generic(std::size_t rows, std::size_t cols, std::string_view field,
                           const std::vector<std::pair<std::string, std::string>>& headers, Fmt&& entry) {
  std::ostringstream out;
  out << "rows " << rows << "\ncols " << cols << "\n";
  if (!field.empty()) out << "field " << field << "\n";
  for (const auto& [k, v] : headers) out << k << " " << v << "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out << (j ? ", " : "") << entry(i, j);
    out << "\n";
  }
  return out.str();
}

}  // namespace

MatrixDocument parse_matrix_document(std::string_view text) {
  MatrixDocument doc;
  std::optional<std::size_t> rows, cols;
  std::vector<std::vector<AlgebraicNumber>> data;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const bool header = data.empty() && is_header_key(line.substr(0, line.find(' ')));
    if (header) {
      const auto sp = line.find(' ');
      if (sp == std::string_view::npos) throw InputError("line " + std::to_string(line_no) + ": expected 'key value'");
      const std::string_view key = line.substr(0, sp), value = trim(line.substr(sp + 1));
      if (key == "rows") rows = parse_size(value);
      else if (key == "cols") cols = parse_size(value);
      else if (key == "field") {
        if (value == "Q") doc.tower_field = false;
        else if (value == kTowerFieldHeader) doc.tower_field = true;
        else throw InputError("unsupported field '" + std::string(value) + "'");
      } else {
        doc.headers.emplace_back(std::string(key), std::string(value));
      }
      continue;
    }
    if (!rows || !cols) throw InputError("line " + std::to_string(line_no) + ": entries before 'rows'/'cols'");
    std::vector<AlgebraicNumber> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string_view cell = trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      try {
        row.push_back(doc.tower_field ? parse_algebraic(cell) : AlgebraicNumber(parse_rational(cell)));
      } catch (const InputError& e) {
        throw InputError("line " + std::to_string(line_no) + ": " + e.what());
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row.size() != *cols) throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(*cols) + " entries");
    data.push_back(std::move(row));
  }
  if (!rows || !cols) throw InputError("matrix document needs 'rows' and 'cols'");
  if (data.size() != *rows) throw InputError("expected " + std::to_string(*rows) + " rows, found " + std::to_string(data.size()));
  doc.matrix = KMatrix::from_rows(data, *cols);
  return doc;
}

std::string format_matrix(const QMatrix& m, const std::vector<std::pair<std::string, std::string>>& headers) {
  return format_generic(m.rows(), m.cols(), "Q", headers, [&](std::size_t i, std::size_t j) { return to_string(m(i, j)); });
}

std::string format_matrix(const KMatrix& m, const std::vector<std::pair<std::string, std::string>>& headers) {
  return format_generic(m.rows(), m.cols(), kTowerFieldHeader, headers,
                        [&](std::size_t i, std::size_t j) { return to_string(m(i, j)); });
}

std::string format_matrix(const Matrix<double>& m, const std::vector<std::pair<std::string, std::string>>& headers) {
  return format_generic(m.rows(), m.cols(), "", headers, [&](std::size_t i, std::size_t j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
    return std::string(buf);
  });
}

}  // namespace soscert
