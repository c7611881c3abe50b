#ifndef HKLAB_NAGAI_VERIFIER_HPP
#define HKLAB_NAGAI_VERIFIER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hklab/filtrations.hpp"
#include "hklab/json_io.hpp"
#include "hklab/llv_operators.hpp"
#include "hklab/module_io.hpp"
#include "hklab/verbitsky_algebra.hpp"

namespace hklab {

/// One checked statement. Recorded verdicts (asserted == false) are reported
/// but never affect the exit status.
struct Verdict {
  std::string claim;
  std::string expected;
  std::string observed;
  bool passed = true;
  bool asserted = true;
  std::vector<std::string> witnesses;
};

/// Builds a verdict; a failing verdict without witnesses gets `observed` as one.
Verdict make_verdict(std::string claim, std::string expected, std::string observed, bool passed,
                     bool asserted = true, std::vector<std::string> witnesses = {});

Json to_json(const Verdict& v);

/// degree -> nilp(M restricted to that degree).
using NilpotenceProfile = std::map<int, std::size_t>;

NilpotenceProfile nilpotence_profile(const GradedOperator& M);

/// nilp(M_2k) = k for k <= n, nilp(M_2n) = n, nilp(M_2k) <= n-1 for k < n,
/// M^(n+1) = 0 on every even degree and M^n = 0 below degree 2n. Degrees
/// missing from the profile are skipped.
std::vector<Verdict> check_even_nagai(const NilpotenceProfile& profile, int n,
                                      bool asserted = true);

/// nilp(M_d) = nilp(M_(4n-d)) for every degree present.
Verdict check_profile_duality(const NilpotenceProfile& profile, int n, bool asserted = true);

struct KernelConditionEntry {
  int p = 0;
  int q = 0;
  std::size_t piece_dim = 0;
  std::size_t kernel_dim = 0;
  bool holds() const { return kernel_dim == 0; }
};

/// For every (p, q) with p + q <= 2n - 2 and a nonzero Hodge piece: the
/// common kernel of L_beta and L_sbar on that piece.
std::vector<KernelConditionEntry> kernel_condition_table(const LLVModule& m,
                                                         const FrameOperators& ops,
                                                         const Bigrading& big);

/// One verdict per entry; those with q < n are asserted, the rest recorded.
std::vector<Verdict> check_kernel_condition(const std::vector<KernelConditionEntry>& table, int n);

/// V^{p,q,i} != 0 with p + q = 2k implies |p - q| <= 2k - 2|i - k|.
Verdict check_level_reformulation(const Bigrading& big, bool asserted = true);

/// The level bound holds in degree 2k iff Gr^M_(n+j) H^2k = 0 for |j| > k.
Verdict check_level_gr_consistency(const Bigrading& big,
                                   const std::map<int, WeightFiltration>& m_filt);

/// Hodge level max |p - q| of H^d, or -1 when H^d = 0.
int hodge_level(const Bigrading& big, int degree);

/// Upper bounds, the level lower bound and the consequences of H^3 != 0 for
/// every odd degree 2k-1 with k <= n. Vacuous pass without odd degrees.
std::vector<Verdict> check_odd(const Bigrading& big, const NilpotenceProfile& profile,
                               const std::vector<KernelConditionEntry>& kernel_cond);

/// The four-fold symmetry of dims, then dim H^(2k-1) = 4·Σ dim V^{p,q,i} over
/// p < k, i < k. The second verdict is asserted only when the first passes.
std::vector<Verdict> check_betti_mod4(const Bigrading& big);

/// (q, i) -> dim V^{d-q,q,i} for one degree d.
struct DiamondTable {
  int degree = 0;
  std::map<std::pair<int, int>, std::size_t> cells;
};

DiamondTable diamond_report(const Bigrading& big, int degree);
/// Rows by descending i, columns by q, empty cells as '.'.
std::string render_diamond(const DiamondTable& t);
Json to_json(const DiamondTable& t);

/// Degree-2 layout: β at (q,i) = (1,0), η at (1,2), and (1, b2-4, 1) along i=1.
Verdict check_degree2_diamond(const Bigrading& big, std::size_t b2);

struct InstanceConfig {
  int n = 1;
  std::size_t b2 = 5;
  std::vector<Rational> tail;
  std::uint64_t seed = 0;
  std::uint64_t frame_seed = 0;
  std::size_t budget = 20000;
  std::size_t derivation_trials = 100;
};

/// Standard tail of b2 - 4 entries equal to 2 when `tail` is empty.
QuadraticSpace instance_space(const InstanceConfig& c);

struct Report {
  Json instance;
  Json seeds;
  NilpotenceProfile profile;
  std::vector<Verdict> verdicts;
  Json tables = Json::object();

  /// Every asserted verdict passed.
  bool passed() const;
};

Json to_json(const Report& r);
std::string render_text(const Report& r);

/// Builds SH and runs every check.
Report run_instance(const InstanceConfig& c);
/// Every check on an algebra built elsewhere; n and b2 come from the algebra.
Report run_algebra(const GradedAlgebra& alg, InstanceConfig c);
/// The same checks on an ingested module, after validation. A failing
/// validation stops the run.
Report run_module(const LLVModuleSpec& spec, std::uint64_t frame_seed);

/// {1,2,3} × {4,5,6,7}.
std::vector<InstanceConfig> default_grid(std::uint64_t seed, std::size_t budget);

/// Runs the configurations on a pool of worker threads; reports come back in
/// input order and do not depend on the thread count.
std::vector<Report> run_grid(const std::vector<InstanceConfig>& configs, unsigned threads);

}  // namespace hklab

#endif  // HKLAB_NAGAI_VERIFIER_HPP
