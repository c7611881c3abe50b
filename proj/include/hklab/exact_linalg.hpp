#ifndef HKLAB_EXACT_LINALG_HPP
#define HKLAB_EXACT_LINALG_HPP

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hklab {

/// Exact rational scalar. GMP keeps every result in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Vector = std::vector<Rational>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NotCommutingError : public Error {
 public:
  using Error::Error;
};

class NonSemisimpleError : public Error {
 public:
  using Error::Error;
};

class NotNilpotentError : public Error {
 public:
  using Error::Error;
};

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on anything else
/// (including a zero denominator).
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& value);

Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t i);
bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& v);
Rational dot(const Vector& a, const Vector& b);

/// Dense row-major rational matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static Matrix identity(std::size_t n);
  static Matrix scalar(std::size_t n, const Rational& s);
  static Matrix from_columns(std::span<const Vector> columns, std::size_t rows);
  static Matrix from_rows(std::span<const Vector> rows, std::size_t cols);
  static Matrix diagonal(std::span<const Rational> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, const Vector& v);

  Matrix transpose() const;
  Matrix columns(std::span<const std::size_t> which) const;
  /// Columns of `*this` followed by columns of `other`.
  Matrix hstack(const Matrix& other) const;

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }
  Rational trace() const;

  Vector apply(const Vector& v) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(const Rational& s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Rational& s) { return a *= s; }
  friend Matrix operator*(const Rational& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  const std::vector<Rational>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix matrix_power(const Matrix& m, std::size_t k);

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const { return pivot_cols.size(); }
};

/// Reduced row-echelon form; the pivot in each column is the first nonzero
/// entry at or below the current row.
RrefResult rref(Matrix m);
std::size_t rank(const Matrix& m);
Rational determinant(Matrix m);
std::optional<Matrix> inverse(const Matrix& m);

/// Column space of `basis` inside Q^ambient_dim. The columns are always
/// independent; constructors reduce their input.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim = 0);
  /// Spans the columns of `generators`; dependent columns are dropped.
  static Subspace span(const Matrix& generators);
  static Subspace span(std::span<const Vector> vectors, std::size_t ambient_dim);
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  Vector basis_vector(std::size_t i) const { return basis_.col(i); }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b);

 private:
  std::size_t ambient_;
  Matrix basis_;
};

Subspace kernel_basis(const Matrix& m);
Subspace image_basis(const Matrix& m);
Subspace image_of(const Matrix& m, const Subspace& s);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

/// Some x with a·x = b, or nullopt when the system is inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b);
/// Some X with a·X = b (column-wise), or nullopt.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// Coordinates of the vectors of `s`-membership: the unique c with
/// basis·c = v. Throws if v is not in the span.
Vector coordinates_in(const Subspace& s, const Vector& v);

/// Matrix of the restriction of `op` to an invariant subspace, in the basis
/// of `s`. Throws Error when `s` is not invariant.
Matrix restrict_to(const Matrix& op, const Subspace& s);

/// Largest i with n^i != 0 (0 for the zero map). Throws NotNilpotentError
/// when n^(dim+1) != 0.
std::size_t nilpotence_index(const Matrix& n);

/// Integer eigenvalues of a diagonalizable matrix with integral spectrum,
/// each with its eigenspace. Throws NonSemisimpleError otherwise.
struct Eigenspace {
  long value;
  Subspace space;
};
std::vector<Eigenspace> integer_eigenspaces(const Matrix& m);

struct JointEigenspace {
  std::vector<long> values;
  Subspace space;
};

/// Joint eigenspaces of pairwise commuting operators for the requested
/// eigenvalue tuples. Throws NotCommutingError for non-commuting input and
/// NonSemisimpleError when the returned spaces do not fill the ambient space.
std::vector<Subspace> simultaneous_eigenspaces(std::span<const Matrix> ops,
                                               std::span<const std::vector<long>> values);

/// Discovers the joint spectrum of pairwise commuting, diagonalizable,
/// integer-spectrum operators. Tuples are returned in lexicographic order.
std::vector<JointEigenspace> joint_eigendecomposition(std::span<const Matrix> ops);

/// Row space kept in reduced row-echelon form while rows are streamed in.
/// Rows are reduced against existing pivots before insertion.
class IncrementalRref {
 public:
  explicit IncrementalRref(std::size_t cols);

  /// Returns true when the row increased the rank.
  bool add(Vector row);
  std::size_t rank() const { return pivots_.size(); }
  std::size_t cols() const { return cols_; }
  /// Pivot columns in increasing order.
  std::vector<std::size_t> pivot_cols() const;
  std::vector<std::size_t> free_cols() const;
  /// Map from Q^cols onto coordinates of the quotient by the row space,
  /// indexed by the free columns: a free column e_j maps to its unit vector.
  Matrix cokernel_map() const;
  Matrix rows_matrix() const;

 private:
  std::size_t cols_;
  // pivot column -> reduced row
  std::vector<std::size_t> pivots_;
  std::vector<Vector> rows_;
  std::vector<int> pivot_row_of_col_;
};

}  // namespace hklab

#endif  // HKLAB_EXACT_LINALG_HPP
