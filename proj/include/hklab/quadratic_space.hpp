#ifndef HKLAB_QUADRATIC_SPACE_HPP
#define HKLAB_QUADRATIC_SPACE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hklab/exact_linalg.hpp"
#include "hklab/json_io.hpp"

namespace hklab {

class TransportObstruction : public Error {
 public:
  using Error::Error;
};

/// A rational vector space with a nondegenerate symmetric bilinear form,
/// standing in for (H^2, q).
class QuadraticSpace {
 public:
  /// Throws std::invalid_argument unless `gram` is square, symmetric and
  /// nondegenerate.
  explicit QuadraticSpace(Matrix gram);

  std::size_t dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }

  /// v^T · gram · w.
  Rational bilinear(const Vector& v, const Vector& w) const;
  Rational norm(const Vector& v) const { return bilinear(v, v); }
  /// The linear form q(v, ·) as a row vector (gram · v).
  Vector pairing(const Vector& v) const;

  friend bool operator==(const QuadraticSpace& a, const QuadraticSpace& b) {
    return a.gram_ == b.gram_;
  }

 private:
  Matrix gram_;
};

/// U ⊕ U ⊕ diag(tail), with U the hyperbolic plane [[0,1],[1,0]]. Basis order
/// is (e1, f1, e2, f2, t1, ...). Requires b2 >= 4 and tail.size() == b2 - 4.
QuadraticSpace make_standard_space(std::size_t b2, const std::vector<Rational>& tail);

/// gram ⊕ U: two extra basis vectors appended.
QuadraticSpace mukai_extension(const QuadraticSpace& space);

/// (positive, negative) inertia indices.
std::pair<std::size_t, std::size_t> signature(const QuadraticSpace& space);

Subspace orthogonal_complement(const QuadraticSpace& space, const Subspace& s);

struct HyperbolicPair {
  Vector e;
  Vector f;
};

/// Some (e, f) inside `within` with q(e)=q(f)=0 and q(e,f)=1. Deterministic.
/// Throws Error if no isotropic vector is found by the bounded search.
HyperbolicPair find_hyperbolic_pair(const QuadraticSpace& space, const Subspace& within);
HyperbolicPair find_hyperbolic_pair(const QuadraticSpace& space);

/// Stream of isotropic vectors; see sample_isotropic.
class IsotropicSampler {
 public:
  IsotropicSampler(const QuadraticSpace& space, std::uint64_t seed);
  Vector next();

 private:
  const QuadraticSpace* space_;
  HyperbolicPair pair_;
  Subspace rest_;
  std::uint64_t state_;
};

/// Nonzero isotropic vectors z + λe + μf over a hyperbolic pair (e, f) with
/// q(z) + 2λμ = 0, scaled to integer coordinates. Deterministic for `seed`.
std::vector<Vector> sample_isotropic(const QuadraticSpace& space, std::size_t count,
                                     std::uint64_t seed);

struct IsotropicPlane {
  Vector v1;
  Vector v2;
};

bool is_isotropic_plane(const QuadraticSpace& space, const IsotropicPlane& p);
Subspace span_of(const IsotropicPlane& p);

struct Isometry {
  Matrix matrix;
};

/// g^T · gram · g == gram.
bool preserves_form(const QuadraticSpace& space, const Matrix& g);
/// preserves_form and det g == 1.
bool is_special_isometry(const QuadraticSpace& space, const Matrix& g);

/// Reflection x -> x - 2 q(x,r)/q(r) r; requires q(r) != 0.
Matrix reflection(const QuadraticSpace& space, const Vector& r);
/// Eichler transformation for isotropic u and z ⊥ u; lies in SO(q).
Matrix eichler_transformation(const QuadraticSpace& space, const Vector& u, const Vector& z);

/// g in SO(q) with g(span p1) = span p2, built from reflections following the
/// constructive Witt extension. Throws TransportObstruction when dim = 4 and
/// the planes lie in different SO-orbits (the determinant cannot be fixed),
/// and std::invalid_argument for invalid planes.
Isometry witt_transport(const QuadraticSpace& space, const IsotropicPlane& p1,
                        const IsotropicPlane& p2);

Json to_json(const QuadraticSpace& space);
QuadraticSpace quadratic_space_from_json(const Json& j, const std::string& where = "space");

}  // namespace hklab

#endif  // HKLAB_QUADRATIC_SPACE_HPP
