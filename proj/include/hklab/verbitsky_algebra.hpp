#ifndef HKLAB_VERBITSKY_ALGEBRA_HPP
#define HKLAB_VERBITSKY_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hklab/exact_linalg.hpp"
#include "hklab/graded.hpp"
#include "hklab/quadratic_space.hpp"

namespace hklab {

class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::size_t achieved, std::size_t target, std::size_t samples);
  std::size_t achieved_dim;
  std::size_t target_dim;
};

using Exponents = std::vector<int>;

/// Monomials of Sym^k(Q^vars) for k <= max_degree, each degree listed in
/// descending graded reverse-lexicographic order.
class SymmetricAlgebra {
 public:
  SymmetricAlgebra(std::size_t vars, std::size_t max_degree);

  std::size_t vars() const { return vars_; }
  std::size_t max_degree() const { return monomials_.size() - 1; }
  const std::vector<Exponents>& monomials(std::size_t k) const { return monomials_.at(k); }
  std::size_t dim(std::size_t k) const { return monomials_.at(k).size(); }
  std::size_t index(const Exponents& e) const;

  /// Product of a ∈ Sym^ka and b ∈ Sym^kb in monomial coordinates.
  Vector multiply(std::size_t ka, const Vector& a, std::size_t kb, const Vector& b) const;
  /// v^k for a linear form v ∈ Sym^1.
  Vector power(const Vector& v, std::size_t k) const;

 private:
  std::size_t vars_;
  std::vector<std::vector<Exponents>> monomials_;
  std::vector<std::map<Exponents, std::size_t>> index_;
};

/// "x0^2*x3"; "1" for the empty monomial.
std::string monomial_label(const Exponents& e);

/// C(b2 - 1 + j, j) with j = min(k, 2n - k): the closed-form dimension of the
/// degree-2k piece of the Verbitsky component.
std::size_t verbitsky_target_dim(std::size_t b2, int n, int k);

struct AlgebraElement {
  int degree;
  Vector coords;
};

/// Sym•H² modulo the ideal generated by v^(n+1) for isotropic v, with
/// monomial-coset bases in every even degree 0..4n.
class GradedAlgebra {
 public:
  GradedAlgebra(QuadraticSpace space, int n, std::vector<std::vector<std::size_t>> basis,
                std::vector<Matrix> projections);

  int n() const { return n_; }
  const QuadraticSpace& space() const { return space_; }
  std::size_t b2() const { return space_.dim(); }
  const SymmetricAlgebra& sym() const { return sym_; }

  std::vector<int> degrees() const;
  std::size_t dim(int degree) const;
  GradedDims dims() const;

  /// Indices into sym().monomials(degree / 2) of the basis cosets.
  const std::vector<std::size_t>& basis_indices(int degree) const;
  const Exponents& basis_monomial(int degree, std::size_t i) const;
  std::string basis_label(int degree, std::size_t i) const;
  /// Quotient map Sym^(degree/2) -> SH^degree in basis coordinates.
  const Matrix& projection(int degree) const;

  /// Structure constants: column i*dim(db)+j holds e_i·e_j for e_i ∈ SH^da,
  /// e_j ∈ SH^db. Requires da <= db.
  const Matrix& product_table(int da, int db) const;

  AlgebraElement zero(int degree) const;
  AlgebraElement unit() const;
  AlgebraElement from_h2(const Vector& x) const;
  AlgebraElement from_polynomial(int degree, const Vector& sym_coords) const;

  /// Throws std::invalid_argument when the degrees overflow 4n.
  AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) const;
  AlgebraElement power(const Vector& x, int k) const;
  /// The coordinate of a degree-4n element.
  Rational top_functional(const AlgebraElement& a) const;

  /// Block SH^degree -> SH^(degree+2) of multiplication by x ∈ H².
  Matrix multiplication_block(const Vector& x, int degree) const;

 private:
  void build_tables();
  std::size_t slot(int degree) const;

  QuadraticSpace space_;
  int n_;
  SymmetricAlgebra sym_;
  std::vector<std::vector<std::size_t>> basis_;
  std::vector<Matrix> projections_;
  std::map<std::pair<int, int>, Matrix> tables_;
};

struct BuildStats {
  std::size_t samples_drawn = 0;
  std::size_t ideal_rank = 0;
};

/// Builds the Verbitsky component. The ideal in degree 2(n+1) is the span of
/// sampled isotropic (n+1)-st powers; sampling stops once the rank equals the
/// closed-form target and has stayed there for a confirmation run. Higher
/// degrees follow from the ideal being generated in degree 2(n+1). Throws
/// BudgetExhausted if `sample_budget` samples do not reach the target.
GradedAlgebra build_verbitsky(const QuadraticSpace& space, int n, std::size_t sample_budget,
                              std::uint64_t seed, BuildStats* stats = nullptr);

Json to_json(const GradedAlgebra& alg);
GradedAlgebra graded_algebra_from_json(const Json& j);

}  // namespace hklab

#endif  // HKLAB_VERBITSKY_ALGEBRA_HPP
