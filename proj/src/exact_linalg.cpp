#include "hklab/exact_linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace hklab {

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::string s(text);
  auto valid_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  mpz_class d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  Rational r(mpz_class(num), d);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  return v.get_str();
}

Vector zero_vector(std::size_t n) { return Vector(n, Rational(0)); }

Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n, Rational(0));
  v.at(i) = 1;
  return v;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("vector size mismatch in +");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("vector size mismatch in -");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(const Rational& s, const Vector& v) {
  Vector r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("vector size mismatch in dot");
  Rational r = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0) r += a[i] * b[i];
  }
  return r;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) { return scalar(n, Rational(1)); }

Matrix Matrix::scalar(std::size_t n, const Rational& s) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

Matrix Matrix::from_columns(std::span<const Vector> columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw ShapeError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ShapeError("row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::diagonal(std::span<const Rational> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<long>(i * cols_),
                data_.begin() + static_cast<long>((i + 1) * cols_));
}

Vector Matrix::col(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_col(std::size_t j, const Vector& v) {
  if (v.size() != rows_) throw ShapeError("set_col length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::columns(std::span<const std::size_t> which) const {
  Matrix m(rows_, which.size());
  for (std::size_t k = 0; k < which.size(); ++k)
    for (std::size_t i = 0; i < rows_; ++i) m(i, k) = (*this)(i, which[k]);
  return m;
}

Matrix Matrix::hstack(const Matrix& other) const {
  if (other.rows_ != rows_) throw ShapeError("hstack row mismatch");
  Matrix m(rows_, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
  }
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Rational Matrix::trace() const {
  if (!is_square()) throw ShapeError("trace of non-square matrix");
  Rational t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw ShapeError("apply: dimension mismatch");
  Vector r(rows_, Rational(0));
  for (std::size_t j = 0; j < cols_; ++j) {
    if (sgn(v[j]) == 0) continue;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational& a = (*this)(i, j);
      if (sgn(a) != 0) r[i] += a * v[j];
    }
  }
  return r;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix += shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix -= shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw ShapeError("matrix product shape mismatch");
  Matrix c(a.rows_, b.cols_);
  Rational t;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Rational& bkj = b(k, j);
        if (sgn(bkj) == 0) continue;
        t = aik * bkj;
        c(i, j) += t;
      }
    }
  }
  return c;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix matrix_power(const Matrix& m, std::size_t k) {
  if (!m.is_square()) throw ShapeError("power of non-square matrix");
  Matrix r = Matrix::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

// ---------------------------------------------------------------- elimination

RrefResult rref(Matrix m) {
  RrefResult out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  Rational factor;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j) {
        if (sgn(m(r, j)) == 0) continue;
        factor = f * m(r, j);
        m(i, j) -= factor;
      }
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

Rational determinant(Matrix m) {
  if (!m.is_square()) throw ShapeError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) throw ShapeError("inverse of non-square matrix");
  return solve(m, Matrix::identity(m.rows()));
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(std::size_t ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {}

Subspace Subspace::span(const Matrix& generators) {
  Subspace s(generators.rows());
  if (generators.cols() == 0) return s;
  auto r = rref(generators);
  s.basis_ = generators.columns(r.pivot_cols);
  return s;
}

Subspace Subspace::span(std::span<const Vector> vectors, std::size_t ambient_dim) {
  return span(Matrix::from_columns(vectors, ambient_dim));
}

Subspace Subspace::full(std::size_t ambient_dim) {
  Subspace s(ambient_dim);
  s.basis_ = Matrix::identity(ambient_dim);
  return s;
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) throw ShapeError("subspace membership: ambient mismatch");
  if (is_zero(v)) return true;
  if (dim() == 0) return false;
  return solve(basis_, v).has_value();
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw ShapeError("subspace containment: ambient mismatch");
  if (other.dim() == 0) return true;
  if (other.dim() > dim()) return false;
  return rank(basis_.hstack(other.basis_)) == dim();
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.ambient_ == b.ambient_ && a.dim() == b.dim() && a.contains(b);
}

Subspace kernel_basis(const Matrix& m) {
  const std::size_t cols = m.cols();
  auto r = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : r.pivot_cols) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v = unit_vector(cols, f);
    for (std::size_t k = 0; k < r.pivot_cols.size(); ++k) v[r.pivot_cols[k]] = -r.reduced(k, f);
    basis.push_back(std::move(v));
  }
  return Subspace::span(basis, cols);
}

Subspace image_basis(const Matrix& m) { return Subspace::span(m); }

Subspace image_of(const Matrix& m, const Subspace& s) {
  if (m.cols() != s.ambient_dim()) throw ShapeError("image_of: ambient mismatch");
  if (s.dim() == 0) return Subspace(m.rows());
  return Subspace::span(m * s.basis());
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw ShapeError("subspace_sum: ambient mismatch");
  return Subspace::span(a.basis().hstack(b.basis()));
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw ShapeError("subspace_intersection: ambient mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Subspace(a.ambient_dim());
  // a·x = b·y  <=>  [A | -B] (x;y) = 0
  Matrix joined = a.basis().hstack(Rational(-1) * b.basis());
  Subspace k = kernel_basis(joined);
  std::vector<Vector> out;
  for (std::size_t c = 0; c < k.dim(); ++c) {
    Vector xy = k.basis_vector(c);
    Vector x(xy.begin(), xy.begin() + static_cast<long>(a.dim()));
    out.push_back(a.basis().apply(x));
  }
  return Subspace::span(out, a.ambient_dim());
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("solve: row count mismatch");
  const std::size_t n = a.cols();
  auto r = rref(a.hstack(b));
  for (auto p : r.pivot_cols)
    if (p >= n) return std::nullopt;
  Matrix x(n, b.cols());
  for (std::size_t k = 0; k < r.pivot_cols.size(); ++k)
    for (std::size_t j = 0; j < b.cols(); ++j) x(r.pivot_cols[k], j) = r.reduced(k, n + j);
  return x;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw ShapeError("solve: rhs length mismatch");
  Matrix bm(b.size(), 1);
  bm.set_col(0, b);
  auto x = solve(a, bm);
  if (!x) return std::nullopt;
  return x->col(0);
}

Vector coordinates_in(const Subspace& s, const Vector& v) {
  auto c = solve(s.basis(), v);
  if (!c) throw Error("vector not in subspace");
  return *c;
}

Matrix restrict_to(const Matrix& op, const Subspace& s) {
  if (!op.is_square() || op.rows() != s.ambient_dim()) throw ShapeError("restrict_to: shape");
  if (s.dim() == 0) return Matrix(0, 0);
  auto x = solve(s.basis(), op * s.basis());
  if (!x) throw Error("restrict_to: subspace is not invariant");
  return *x;
}

std::size_t nilpotence_index(const Matrix& n) {
  if (!n.is_square()) throw ShapeError("nilpotence_index of non-square matrix");
  const std::size_t d = n.rows();
  Matrix p = n;
  std::size_t index = 0;
  while (!p.is_zero()) {
    ++index;
    if (index > d) throw NotNilpotentError("operator is not nilpotent");
    p = p * n;
  }
  return index;
}

// ---------------------------------------------------------------- spectra

namespace {

// Characteristic polynomial via Hessenberg reduction; coefficients in
// increasing degree, monic.
std::vector<Rational> characteristic_polynomial(Matrix h) {
  const std::size_t n = h.rows();
  for (std::size_t c = 0; c + 2 < n; ++c) {
    std::size_t p = c + 1;
    while (p < n && sgn(h(p, c)) == 0) ++p;
    if (p == n) continue;
    if (p != c + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(p, j), h(c + 1, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, p), h(i, c + 1));
    }
    for (std::size_t i = c + 2; i < n; ++i) {
      if (sgn(h(i, c)) == 0) continue;
      Rational u = h(i, c) / h(c + 1, c);
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= u * h(c + 1, j);
      for (std::size_t r = 0; r < n; ++r) h(r, c + 1) += u * h(r, i);
    }
  }
  std::vector<std::vector<Rational>> polys(n + 1);
  polys[0] = {Rational(1)};
  for (std::size_t m = 1; m <= n; ++m) {
    // (x - h_mm) p_{m-1}
    std::vector<Rational> p(m + 1, Rational(0));
    const auto& prev = polys[m - 1];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      p[k + 1] += prev[k];
      p[k] -= h(m - 1, m - 1) * prev[k];
    }
    Rational t = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      t *= h(i, i - 1);
      if (sgn(t) == 0) break;
      Rational coef = t * h(i - 1, m - 1);
      const auto& q = polys[i - 1];
      for (std::size_t k = 0; k < q.size(); ++k) p[k] -= coef * q[k];
    }
    polys[m] = std::move(p);
  }
  return polys[n];
}

Rational evaluate(const std::vector<Rational>& p, const Rational& x) {
  Rational r = 0;
  for (std::size_t k = p.size(); k-- > 0;) r = r * x + p[k];
  return r;
}

std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& root) {
  std::vector<Rational> q(p.size() - 1);
  Rational carry = 0;
  for (std::size_t k = p.size() - 1; k-- > 0;) {
    carry = carry * root + p[k + 1];
    q[k] = carry;
  }
  return q;
}

}  // namespace

std::vector<Eigenspace> integer_eigenspaces(const Matrix& m) {
  if (!m.is_square()) throw ShapeError("eigenspaces of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Eigenspace> out;
  if (n == 0) return out;
  // For a real spectrum, sum of squared eigenvalues = tr(m^2).
  Rational tr2 = (m * m).trace();
  if (sgn(tr2) < 0) throw NonSemisimpleError("spectrum is not real (tr(A^2) < 0)");
  mpz_class whole = tr2.get_num() / tr2.get_den();
  mpz_class bound = sqrt(whole) + 1;
  auto poly = characteristic_polynomial(m);
  std::size_t found = 0;
  for (mpz_class t = -bound; t <= bound; ++t) {
    Rational x(t);
    std::size_t mult = 0;
    while (poly.size() > 1 && sgn(evaluate(poly, x)) == 0) {
      poly = deflate(poly, x);
      ++mult;
    }
    if (mult == 0) continue;
    Subspace e = kernel_basis(m - Matrix::scalar(n, x));
    if (e.dim() != mult) {
      throw NonSemisimpleError("eigenvalue " + t.get_str() + " has algebraic multiplicity " +
                               std::to_string(mult) + " but geometric multiplicity " +
                               std::to_string(e.dim()));
    }
    found += mult;
    out.push_back({t.get_si(), std::move(e)});
  }
  if (found != n) throw NonSemisimpleError("spectrum is not integral");
  return out;
}

namespace {
void require_commuting(std::span<const Matrix> ops) {
  for (std::size_t a = 0; a < ops.size(); ++a) {
    if (!ops[a].is_square() || ops[a].rows() != ops[0].rows())
      throw ShapeError("operators must be square of equal size");
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      if (!commutator(ops[a], ops[b]).is_zero())
        throw NotCommutingError("operators " + std::to_string(a) + " and " + std::to_string(b) +
                                " do not commute");
    }
  }
}
}  // namespace

std::vector<Subspace> simultaneous_eigenspaces(std::span<const Matrix> ops,
                                               std::span<const std::vector<long>> values) {
  if (ops.empty()) throw ShapeError("no operators");
  require_commuting(ops);
  const std::size_t n = ops[0].rows();
  std::vector<Subspace> out;
  std::size_t total = 0;
  for (const auto& tuple : values) {
    if (tuple.size() != ops.size()) throw ShapeError("eigenvalue tuple length mismatch");
    Subspace s = Subspace::full(n);
    for (std::size_t k = 0; k < ops.size() && s.dim() > 0; ++k) {
      Subspace e = kernel_basis(ops[k] - Matrix::scalar(n, Rational(tuple[k])));
      s = subspace_intersection(s, e);
    }
    total += s.dim();
    out.push_back(std::move(s));
  }
  if (total != n) {
    throw NonSemisimpleError("joint eigenspaces have total dimension " + std::to_string(total) +
                             " in ambient dimension " + std::to_string(n));
  }
  return out;
}

std::vector<JointEigenspace> joint_eigendecomposition(std::span<const Matrix> ops) {
  if (ops.empty()) throw ShapeError("no operators");
  require_commuting(ops);
  const std::size_t n = ops[0].rows();
  std::vector<JointEigenspace> parts{{{}, Subspace::full(n)}};
  for (const auto& op : ops) {
    std::vector<JointEigenspace> next;
    for (auto& part : parts) {
      if (part.space.dim() == 0) continue;
      Matrix local = restrict_to(op, part.space);
      for (auto& e : integer_eigenspaces(local)) {
        auto values = part.values;
        values.push_back(e.value);
        next.push_back({std::move(values), image_of(part.space.basis(), e.space)});
      }
    }
    parts = std::move(next);
  }
  std::sort(parts.begin(), parts.end(),
            [](const JointEigenspace& a, const JointEigenspace& b) { return a.values < b.values; });
  return parts;
}

// ---------------------------------------------------------------- IncrementalRref

IncrementalRref::IncrementalRref(std::size_t cols) : cols_(cols), pivot_row_of_col_(cols, -1) {}

bool IncrementalRref::add(Vector row) {
  if (row.size() != cols_) throw ShapeError("IncrementalRref::add: width mismatch");
  Rational t;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (sgn(row[c]) == 0) continue;
    int r = pivot_row_of_col_[c];
    if (r < 0) continue;
    Rational f = row[c];
    const Vector& pr = rows_[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(pr[j]) == 0) continue;
      t = f * pr[j];
      row[j] -= t;
    }
  }
  std::size_t p = 0;
  while (p < cols_ && sgn(row[p]) == 0) ++p;
  if (p == cols_) return false;
  Rational inv = 1 / row[p];
  for (std::size_t j = p; j < cols_; ++j)
    if (sgn(row[j]) != 0) row[j] *= inv;
  for (auto& other : rows_) {
    if (sgn(other[p]) == 0) continue;
    Rational f = other[p];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(row[j]) == 0) continue;
      t = f * row[j];
      other[j] -= t;
    }
  }
  pivot_row_of_col_[p] = static_cast<int>(rows_.size());
  pivots_.push_back(p);
  rows_.push_back(std::move(row));
  return true;
}

std::vector<std::size_t> IncrementalRref::pivot_cols() const {
  auto p = pivots_;
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<std::size_t> IncrementalRref::free_cols() const {
  std::vector<std::size_t> f;
  for (std::size_t c = 0; c < cols_; ++c)
    if (pivot_row_of_col_[c] < 0) f.push_back(c);
  return f;
}

Matrix IncrementalRref::cokernel_map() const {
  auto free = free_cols();
  std::vector<long> free_index(cols_, -1);
  for (std::size_t k = 0; k < free.size(); ++k) free_index[free[k]] = static_cast<long>(k);
  Matrix q(free.size(), cols_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (free_index[c] >= 0) {
      q(static_cast<std::size_t>(free_index[c]), c) = 1;
      continue;
    }
    // e_c = row - (row - e_c): modulo the row space e_c == -(row entries on free columns)
    const Vector& r = rows_[static_cast<std::size_t>(pivot_row_of_col_[c])];
    for (std::size_t k = 0; k < free.size(); ++k) {
      if (sgn(r[free[k]]) != 0) q(k, c) = -r[free[k]];
    }
  }
  return q;
}

Matrix IncrementalRref::rows_matrix() const {
  std::vector<Vector> ordered;
  for (auto p : pivot_cols()) ordered.push_back(rows_[static_cast<std::size_t>(pivot_row_of_col_[p])]);
  return Matrix::from_rows(ordered, cols_);
}

}  // namespace hklab
