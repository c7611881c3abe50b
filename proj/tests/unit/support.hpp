#ifndef HKLAB_TEST_SUPPORT_HPP
#define HKLAB_TEST_SUPPORT_HPP

#include <map>
#include <mutex>
#include <utility>

#include "hklab/llv_operators.hpp"
#include "hklab/quadratic_space.hpp"
#include "hklab/random.hpp"
#include "hklab/verbitsky_algebra.hpp"

namespace hklab::test {

inline QuadraticSpace standard(std::size_t b2) {
  return make_standard_space(b2, std::vector<Rational>(b2 - 4, Rational(2)));
}

// Built once per (n, b2) and shared across test cases.
inline const GradedAlgebra& algebra(int n, std::size_t b2) {
  static std::map<std::pair<int, std::size_t>, GradedAlgebra> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, b2});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(n, b2), build_verbitsky(standard(b2), n, 20000, 1)).first;
  return it->second;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, long lo = -3,
                            long hi = 3) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline Vector random_vector(std::size_t n, std::uint64_t seed, long lo = -3, long hi = 3) {
  return random_matrix(n, 1, seed, lo, hi).col(0);
}

}  // namespace hklab::test

#endif  // HKLAB_TEST_SUPPORT_HPP
