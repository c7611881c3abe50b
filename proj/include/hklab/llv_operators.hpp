#ifndef HKLAB_LLV_OPERATORS_HPP
#define HKLAB_LLV_OPERATORS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hklab/exact_linalg.hpp"
#include "hklab/graded.hpp"
#include "hklab/quadratic_space.hpp"
#include "hklab/verbitsky_algebra.hpp"

namespace hklab {

class NotLefschetz : public Error {
 public:
  using Error::Error;
};

/// A graded space with Lefschetz operators for every basis vector of H² and a
/// grading operator. Degrees may have either parity.
struct LLVModule {
  QuadraticSpace space;
  int n = 0;
  GradedDims dims;
  /// L[i] is the Lefschetz operator of the i-th basis vector.
  std::vector<GradedOperator> L;
  GradedOperator h;

  std::size_t b2() const { return space.dim(); }
  GradedOperator lefschetz(const Vector& x) const;
};

LLVModule module_of(const GradedAlgebra& alg);

GradedOperator lefschetz(const GradedAlgebra& alg, const Vector& x);
GradedOperator grading(const GradedAlgebra& alg);

/// L^(2n-d): H^d -> H^(4n-d) is bijective for every degree d < 2n.
bool hard_lefschetz(const LLVModule& m, const GradedOperator& L);

/// The Λ completing (L, ·, h) to an sl2-triple. Solved degree by degree from
/// the bottom: Λ is fixed on L(H^(d-2)) by [L,Λ] = h and vanishes on the
/// primitive part. Throws NotLefschetz when q(x) = 0, hard Lefschetz fails or
/// the system has no solution.
GradedOperator dual_lefschetz(const LLVModule& m, const GradedOperator& L);
GradedOperator dual_lefschetz(const LLVModule& m, const Vector& x);
GradedOperator dual_lefschetz(const GradedAlgebra& alg, const Vector& x);

/// Deterministic basis of H² made of anisotropic vectors. Different variants
/// give different bases.
std::vector<Vector> anisotropic_basis(const QuadraticSpace& space, int variant);

/// The linear map y -> Λ(y) on H² agreeing with (q(x)/2)·Λ_x on anisotropic x,
/// so that Λ(x) = Λ_x whenever q(x) = 2. Built from one anisotropic basis and
/// compared against a second.
class LambdaExtension {
 public:
  explicit LambdaExtension(const LLVModule& m);

  GradedOperator operator()(const Vector& y) const;
  /// Λ of the i-th basis vector of H².
  const GradedOperator& of_basis(std::size_t i) const { return per_basis_.at(i); }
  bool well_defined() const { return well_defined_; }
  const std::string& witness() const { return witness_; }

 private:
  GradedDims dims_;
  std::vector<GradedOperator> per_basis_;
  bool well_defined_ = true;
  std::string witness_;
};

struct HodgeFrame {
  Vector s;
  Vector sbar;
  Vector beta;
  Vector eta;
  Subspace u_complement;
};

/// All q-relations of a frame hold exactly and u_complement is the orthogonal
/// complement of the four vectors.
bool is_valid_frame(const QuadraticSpace& space, const HodgeFrame& f);

/// Seed 0 gives the frame from the first two orthogonal hyperbolic pairs; on
/// a standard space that is (e1, f1, e2, f2). Other seeds move it by a random
/// Eichler transformation.
HodgeFrame build_frame(const QuadraticSpace& space, std::uint64_t seed);
HodgeFrame transform_frame(const QuadraticSpace& space, const HodgeFrame& f, const Matrix& g);

struct SL2Triple {
  GradedOperator e;
  GradedOperator f;
  GradedOperator h;
};

/// [e,f] = h, [h,e] = 2e, [h,f] = -2f, exactly.
bool verify_sl2(const SL2Triple& t);

struct FrameOperators {
  GradedOperator L_s, L_sbar, L_beta, L_eta;
  GradedOperator Lam_s, Lam_sbar, Lam_beta, Lam_eta;
  GradedOperator H_s, H_sbar, H_beta, H_eta;
  /// M = [L_beta, Λ(sbar)], F = [Λ(s), L_eta], H_M = H_beta - H_s.
  GradedOperator M, F, H_M;
  /// The scaled pair E_M = 2M, F_M = 2F.
  GradedOperator E_M, F_M;

  /// The four Lefschetz triples and (M, F, H_M).
  std::vector<std::pair<std::string, SL2Triple>> triples() const;
  /// (E_M, F_M, H_M) as written with the factors of 2.
  SL2Triple scaled_m_triple() const { return {E_M, F_M, H_M}; }
};

/// c with [a, b] = c·h, if one exists and h is nonzero.
std::optional<Rational> commutator_scalar(const GradedOperator& a, const GradedOperator& b,
                                          const GradedOperator& h);

FrameOperators frame_operators(const LLVModule& m, const LambdaExtension& lam,
                               const HodgeFrame& frame);

/// M = [L_beta, Λ(sbar)].
GradedOperator build_M(const LLVModule& m, const LambdaExtension& lam, const HodgeFrame& frame);

struct DerivationReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> witnesses;
  bool passed() const { return failures == 0; }
};

/// Tests op(ab) = op(a)b + a op(b) on random pairs of homogeneous elements.
DerivationReport verify_derivation(const GradedAlgebra& alg, const GradedOperator& op,
                                   std::size_t trials, std::uint64_t seed);

using PQI = std::array<int, 3>;

/// Joint eigenspaces of (H_s, H_sbar, H_beta) labelled by (p, q, i), with
/// p = eig(H_s) + n, q = eig(H_sbar) + n and i = p + q - n - eig(H_beta).
struct Bigrading {
  int n = 0;
  GradedDims dims;
  std::map<PQI, Subspace> components;

  std::size_t dim(const PQI& key) const;
  /// Sum of the components of H^(p+q) with the given (p, q).
  Subspace hodge_piece(int p, int q) const;
};

/// Throws NonSemisimpleError or NotCommutingError if the Cartan operators do
/// not give an integral decomposition.
Bigrading bigrading(const LLVModule& m, const FrameOperators& ops);

/// Keys whose dimension is not invariant under (p,q,i) -> (q,p,i),
/// (i,p+q-i,p) and (p+q-i,i,p). Empty when the symmetry holds.
std::vector<PQI> bigrading_asymmetries(const Bigrading& b);

Json to_json(const HodgeFrame& f);
HodgeFrame hodge_frame_from_json(const Json& j, const QuadraticSpace& space);
Json to_json(const Bigrading& b);

}  // namespace hklab

#endif  // HKLAB_LLV_OPERATORS_HPP
