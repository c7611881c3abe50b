#ifndef HKLAB_FILTRATIONS_HPP
#define HKLAB_FILTRATIONS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hklab/exact_linalg.hpp"
#include "hklab/graded.hpp"
#include "hklab/llv_operators.hpp"

namespace hklab {

/// Increasing filtration W_0 ⊆ ... ⊆ W_{2·centre} of a vector space.
/// Indices below 0 give the zero space and indices above 2·centre the whole.
struct WeightFiltration {
  int centre = 0;
  std::size_t ambient = 0;
  std::vector<Subspace> steps;

  Subspace at(int i) const;
  std::size_t gr_dim(int i) const { return at(i).dim() - at(i - 1).dim(); }
};

/// The weight filtration of a nilpotent endomorphism centred at `centre`,
/// assembled from Jordan chains and checked against its defining properties.
/// Throws std::invalid_argument when the nilpotence index exceeds the centre.
WeightFiltration weight_filtration(const Matrix& nilp, int centre);

/// Same for a homogeneous operator on a graded space, on the direct sum.
WeightFiltration weight_filtration(const GradedOperator& nilp, int centre);

/// Both defining properties: N W_i ⊆ W_{i-2}, and N^i: Gr_{c+i} -> Gr_{c-i}
/// bijective for i >= 1.
bool verify_weight_filtration(const Matrix& nilp, const WeightFiltration& w);

/// The part of a subspace of the direct sum lying in H^d, in H^d coordinates.
Subspace slice_degree(const Subspace& s, const GradedDims& dims, int degree);

/// Perverse filtration of one degree, steps P_i for i in [first, first + size).
struct PerverseChain {
  int degree = 0;
  int first = 0;
  std::size_t ambient = 0;
  std::vector<Subspace> steps;

  Subspace at(int i) const;
};

/// P_i H^d = Σ_j L^j Ker(L^(n-(d-2j)+i+1) on H^(d-2j)), with the kernel of a
/// non-positive power taken to be zero, for i in [d-2n-1, d+1].
PerverseChain perverse_filtration(const LLVModule& m, const GradedOperator& L_beta, int degree);

struct CheckResult {
  bool passed = true;
  std::vector<std::string> witnesses;

  void fail(std::string witness) {
    passed = false;
    if (witnesses.size() < 8) witnesses.push_back(std::move(witness));
  }
};

/// W^{L_beta}_i ∩ H^d = P_{d+i-2n} H^d for every d and i.
CheckResult crosscheck_perverse_weight(const LLVModule& m, const GradedOperator& L_beta);

/// W^{L_sbar}_i = Σ_{q >= 2n-i} V^{p,q,•} in every degree.
CheckResult conjugate_hodge_check(const LLVModule& m, const GradedOperator& L_sbar,
                                  const Bigrading& big);

/// (degree, index) -> dimension.
using GradedDimTable = std::map<std::pair<int, int>, std::size_t>;

struct GrComparison {
  GradedDimTable monodromy;  // (ℓ, j) -> dim Gr^M_{n+j} H^ℓ
  GradedDimTable perverse;   // (ℓ, j) -> Σ_{p+q=ℓ} dim Gr^P_{j+q} H^{p,q}
  bool agree = false;
};

/// Per-degree weight filtrations of M centred at n.
std::map<int, WeightFiltration> monodromy_filtrations(const GradedOperator& M, int n);

GrComparison compare_gr_dims(const std::map<int, WeightFiltration>& m_filt, const Bigrading& big,
                             const LLVModule& m, const GradedOperator& L_beta);

Json to_json(const GradedDimTable& t);
/// Rows by degree, columns by index.
std::string render_table(const GradedDimTable& t, const std::string& row_label,
                         const std::string& col_label);

}  // namespace hklab

#endif  // HKLAB_FILTRATIONS_HPP
