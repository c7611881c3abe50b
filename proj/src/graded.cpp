#include "hklab/graded.hpp"

namespace hklab {

std::size_t dim_at(const GradedDims& dims, int degree) {
  auto it = dims.find(degree);
  return it == dims.end() ? 0 : it->second;
}

std::size_t total_dim(const GradedDims& dims) {
  std::size_t t = 0;
  for (const auto& [d, n] : dims) t += n;
  return t;
}

std::size_t total_offset(const GradedDims& dims, int degree) {
  std::size_t t = 0;
  for (const auto& [d, n] : dims) {
    if (d >= degree) break;
    t += n;
  }
  return t;
}

GradedOperator::GradedOperator(GradedDims dims, int offset) : dims_(std::move(dims)), offset_(offset) {
  for (const auto& [d, n] : dims_) blocks_.emplace(d, Matrix(dim_at(dims_, d + offset_), n));
}

GradedOperator GradedOperator::identity(const GradedDims& dims) {
  GradedOperator op(dims, 0);
  for (const auto& [d, n] : dims) op.blocks_[d] = Matrix::identity(n);
  return op;
}

GradedOperator GradedOperator::grading(const GradedDims& dims, int n) {
  GradedOperator op(dims, 0);
  for (const auto& [d, k] : dims) op.blocks_[d] = Matrix::scalar(k, Rational(d - 2 * n));
  return op;
}

const Matrix& GradedOperator::block(int source_degree) const {
  auto it = blocks_.find(source_degree);
  if (it == blocks_.end())
    throw ShapeError("no block for degree " + std::to_string(source_degree));
  return it->second;
}

void GradedOperator::set_block(int source_degree, Matrix m) {
  auto it = blocks_.find(source_degree);
  if (it == blocks_.end())
    throw ShapeError("no block for degree " + std::to_string(source_degree));
  if (m.rows() != it->second.rows() || m.cols() != it->second.cols())
    throw ShapeError("block shape mismatch at degree " + std::to_string(source_degree));
  it->second = std::move(m);
}

bool GradedOperator::is_zero() const {
  for (const auto& [d, m] : blocks_)
    if (!m.is_zero()) return false;
  return true;
}

Vector GradedOperator::apply(int source_degree, const Vector& v) const {
  return block(source_degree).apply(v);
}

namespace {
void require_compatible(const GradedOperator& a, const GradedOperator& b) {
  if (a.dims() != b.dims()) throw ShapeError("graded operators on different spaces");
  if (a.offset() != b.offset()) throw ShapeError("graded operators of different degree");
}
}  // namespace

GradedOperator& GradedOperator::operator+=(const GradedOperator& other) {
  require_compatible(*this, other);
  for (auto& [d, m] : blocks_) m += other.blocks_.at(d);
  return *this;
}

GradedOperator& GradedOperator::operator-=(const GradedOperator& other) {
  require_compatible(*this, other);
  for (auto& [d, m] : blocks_) m -= other.blocks_.at(d);
  return *this;
}

GradedOperator& GradedOperator::operator*=(const Rational& s) {
  for (auto& [d, m] : blocks_) m *= s;
  return *this;
}

GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
  if (a.dims_ != b.dims_) throw ShapeError("graded operators on different spaces");
  GradedOperator c(a.dims_, a.offset_ + b.offset_);
  for (auto& [d, m] : c.blocks_) {
    int mid = d + b.offset_;
    if (dim_at(a.dims_, mid) == 0 || m.rows() == 0 || m.cols() == 0) continue;
    m = a.blocks_.at(mid) * b.blocks_.at(d);
  }
  return c;
}

bool operator==(const GradedOperator& a, const GradedOperator& b) {
  return a.dims_ == b.dims_ && a.offset_ == b.offset_ && a.blocks_ == b.blocks_;
}

GradedOperator GradedOperator::power(std::size_t k) const {
  GradedOperator r = identity(dims_);
  for (std::size_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

Matrix GradedOperator::total_matrix() const {
  const std::size_t n = total_dim(dims_);
  Matrix t(n, n);
  for (const auto& [d, m] : blocks_) {
    if (m.rows() == 0 || m.cols() == 0) continue;
    std::size_t r0 = total_offset(dims_, d + offset_);
    std::size_t c0 = total_offset(dims_, d);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) t(r0 + i, c0 + j) = m(i, j);
  }
  return t;
}

GradedOperator commutator(const GradedOperator& a, const GradedOperator& b) {
  return a * b - b * a;
}

Matrix block_power(const GradedOperator& op, int degree, int k) {
  const GradedDims& dims = op.dims();
  const int off = op.offset();
  Matrix acc = Matrix::identity(dim_at(dims, degree));
  for (int s = 0; s < k; ++s) {
    int from = degree + off * s;
    if (dim_at(dims, from + off) == 0 || acc.rows() == 0)
      return Matrix(dim_at(dims, degree + off * k), dim_at(dims, degree));
    acc = op.block(from) * acc;
  }
  return acc;
}

Json to_json(const GradedOperator& op) {
  Json j;
  j["offset"] = op.offset();
  Json blocks = Json::array();
  for (const auto& [d, n] : op.dims()) {
    const Matrix& m = op.block(d);
    if (m.rows() == 0 || m.cols() == 0) continue;
    blocks.push_back({{"degree", d}, {"matrix", matrix_to_json(m)}});
  }
  j["blocks"] = blocks;
  return j;
}

GradedOperator graded_operator_from_json(const Json& j, const GradedDims& dims, int expected_offset,
                                         const std::string& where) {
  long offset = require_int(j, "offset", where);
  if (offset != expected_offset)
    throw SchemaError(where + ".offset: expected " + std::to_string(expected_offset));
  GradedOperator op(dims, expected_offset);
  const Json& blocks = require_member(j, "blocks", where);
  if (!blocks.is_array()) throw SchemaError(where + ".blocks: expected an array");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::string w = where + ".blocks[" + std::to_string(i) + "]";
    long d = require_int(blocks[i], "degree", w);
    auto deg = static_cast<int>(d);
    if (dims.find(deg) == dims.end()) throw SchemaError(w + ".degree: not a declared degree");
    std::size_t rows = dim_at(dims, deg + expected_offset);
    op.set_block(deg, matrix_from_json(require_member(blocks[i], "matrix", w), rows,
                                       dim_at(dims, deg), w + ".matrix"));
  }
  return op;
}

}  // namespace hklab
