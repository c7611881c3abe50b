#ifndef HKLAB_RANDOM_HPP
#define HKLAB_RANDOM_HPP

#include <cstdint>
#include <random>

namespace hklab {

/// Seeded generator with a portable integer mapping. std::uniform_int_distribution
/// is implementation-defined, so outputs would differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi] (inclusive); modulo bias is irrelevant at these ranges.
  long uniform(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  /// Uniform in [lo, hi] \ {0}.
  long nonzero(long lo, long hi) {
    long v = 0;
    while (v == 0) v = uniform(lo, hi);
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hklab

#endif  // HKLAB_RANDOM_HPP
