#ifndef HKLAB_MODULE_IO_HPP
#define HKLAB_MODULE_IO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hklab/json_io.hpp"
#include "hklab/llv_operators.hpp"
#include "hklab/verbitsky_algebra.hpp"

namespace hklab {

inline constexpr const char* kModuleSchema = "hklab.llv-module/1";

struct LambdaAction {
  Vector vector;
  GradedOperator action;
};

/// A module as read from or written to disk. Degrees may have either parity.
struct LLVModuleSpec {
  LLVModule module;
  std::vector<LambdaAction> lambda_actions;
  std::optional<HodgeFrame> frame;
  std::string label;
};

/// Parses a module document. Every problem, including malformed rationals and
/// shape mismatches, is a SchemaError naming the offending path.
LLVModuleSpec load_module(const Json& j);
/// Reads and parses a file; unreadable or truncated text is a SchemaError.
LLVModuleSpec load_module_file(const std::string& path);

Json to_json(const LLVModuleSpec& spec);

/// The module of a built algebra with Λ for the first anisotropic basis and
/// the given frame.
LLVModuleSpec module_spec(const GradedAlgebra& alg, const HodgeFrame& frame,
                          const std::string& label);
Json export_module(const GradedAlgebra& alg, const HodgeFrame& frame);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  /// First failing check, if any.
  const ValidationCheck* first_failure() const;
};

/// Runs every structural check in a fixed order. Never throws on bad data.
ValidationReport validate(const LLVModuleSpec& spec);

Json to_json(const ValidationReport& r);

// Synthetic, non-geometric modules used as fixtures.

/// One-dimensional H² with gram [[2]], n = 1 and dims 1, 1, 1 in degrees 0, 2, 4.
LLVModuleSpec ladder_module();

/// The spin representation restricted to H² for a standard space with b2 = 4,
/// or b2 = 5 with a square tail entry. Lives in degrees 2n-1 and 2n+1, four
/// dimensions each.
LLVModuleSpec spinor_module(const QuadraticSpace& space, int n);

/// a ⊗ b with L and h acting as derivations; n is the sum of the two. The
/// spaces must agree.
LLVModuleSpec tensor_modules(const LLVModuleSpec& a, const LLVModuleSpec& b);

/// m ⊕ m[1]: a second copy placed one degree higher with unchanged operators.
LLVModuleSpec shifted_copy(const LLVModuleSpec& m);

/// Zeroes the block of L[index] starting in `degree`.
LLVModuleSpec zero_lefschetz_block(const LLVModuleSpec& m, std::size_t index, int degree);

}  // namespace hklab

#endif  // HKLAB_MODULE_IO_HPP
