#ifndef HKLAB_GRADED_HPP
#define HKLAB_GRADED_HPP

#include <map>
#include <vector>

#include "hklab/exact_linalg.hpp"
#include "hklab/json_io.hpp"

namespace hklab {

/// Degree -> dimension of a graded vector space. Absent degrees are zero.
using GradedDims = std::map<int, std::size_t>;

std::size_t dim_at(const GradedDims& dims, int degree);
std::size_t total_dim(const GradedDims& dims);

/// Homogeneous endomorphism of a graded space: a block H^d -> H^(d+offset)
/// for every degree d present in the table.
class GradedOperator {
 public:
  GradedOperator() = default;
  GradedOperator(GradedDims dims, int offset);

  static GradedOperator identity(const GradedDims& dims);
  /// The grading operator h: (d - 2n)·id on H^d.
  static GradedOperator grading(const GradedDims& dims, int n);

  int offset() const { return offset_; }
  const GradedDims& dims() const { return dims_; }

  const Matrix& block(int source_degree) const;
  void set_block(int source_degree, Matrix m);

  bool is_zero() const;
  Vector apply(int source_degree, const Vector& v) const;

  GradedOperator& operator+=(const GradedOperator& other);
  GradedOperator& operator-=(const GradedOperator& other);
  GradedOperator& operator*=(const Rational& s);
  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(const Rational& s, GradedOperator a) { return a *= s; }
  /// Composition a∘b.
  friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b);
  friend bool operator==(const GradedOperator& a, const GradedOperator& b);

  GradedOperator power(std::size_t k) const;

  /// The operator on the direct sum, degrees in increasing order.
  Matrix total_matrix() const;

 private:
  GradedDims dims_;
  int offset_ = 0;
  std::map<int, Matrix> blocks_;
};

GradedOperator commutator(const GradedOperator& a, const GradedOperator& b);

/// The block of op^k starting in degree d (zero when a degree on the way is
/// empty).
Matrix block_power(const GradedOperator& op, int degree, int k);

/// Position of the first coordinate of H^d inside the direct sum.
std::size_t total_offset(const GradedDims& dims, int degree);

/// {"offset": k, "blocks": [{"degree": d, "matrix": [[...]]}]}
Json to_json(const GradedOperator& op);
GradedOperator graded_operator_from_json(const Json& j, const GradedDims& dims, int expected_offset,
                                         const std::string& where);

}  // namespace hklab

#endif  // HKLAB_GRADED_HPP
