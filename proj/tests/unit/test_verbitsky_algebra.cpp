#include <doctest.h>

#include "hklab/verbitsky_algebra.hpp"
#include "support.hpp"

using namespace hklab;

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

AlgebraElement random_element(const GradedAlgebra& alg, int degree, std::uint64_t seed) {
  return {degree, test::random_vector(alg.dim(degree), seed)};
}

bool same(const AlgebraElement& a, const AlgebraElement& b) {
  return a.degree == b.degree && a.coords == b.coords;
}

}  // namespace

TEST_CASE("dimensions match Sym^k below the middle and are Poincare symmetric") {
  for (int n = 1; n <= 3; ++n)
    for (std::size_t b2 = 4; b2 <= 7; ++b2) {
      if (n == 3 && b2 == 7) continue;
      const GradedAlgebra& alg = test::algebra(n, b2);
      for (int k = 0; k <= 2 * n; ++k) {
        std::size_t j = static_cast<std::size_t>(std::min(k, 2 * n - k));
        CHECK(alg.dim(2 * k) == binomial(b2 - 1 + j, j));
        CHECK(alg.dim(2 * k) == alg.dim(4 * n - 2 * k));
        CHECK(alg.dim(2 * k) == verbitsky_target_dim(b2, n, k));
      }
      CHECK(alg.dim(4 * n) == 1);
    }
}

TEST_CASE("isotropic classes satisfy v^(n+1) = 0 while anisotropic ones do not") {
  for (int n = 1; n <= 3; ++n) {
    const GradedAlgebra& alg = test::algebra(n, 5);
    for (const auto& v : sample_isotropic(alg.space(), 10, 77)) {
      CHECK(is_zero(alg.power(v, n + 1).coords));
      CHECK_FALSE(is_zero(alg.power(v, n).coords));
    }
    Vector x = unit_vector(5, 4);
    CHECK_FALSE(is_zero(alg.power(x, 2 * n).coords));
  }
}

TEST_CASE("the top-degree pairing is perfect") {
  const GradedAlgebra& alg = test::algebra(2, 6);
  for (int d = 0; d <= 4; d += 2) {
    int e = 8 - d;
    Matrix pairing(alg.dim(d), alg.dim(e));
    for (std::size_t i = 0; i < alg.dim(d); ++i)
      for (std::size_t j = 0; j < alg.dim(e); ++j) {
        AlgebraElement a{d, unit_vector(alg.dim(d), i)};
        AlgebraElement b{e, unit_vector(alg.dim(e), j)};
        pairing(i, j) = alg.top_functional(alg.multiply(a, b));
      }
    CHECK(determinant(pairing) != 0);
  }
}

TEST_CASE("the top power is proportional to q(x)^n") {
  for (int n = 1; n <= 3; ++n) {
    const GradedAlgebra& alg = test::algebra(n, 6);
    Vector x0 = unit_vector(6, 0) + unit_vector(6, 1);
    Rational q0 = alg.space().norm(x0);
    Rational c = alg.top_functional(alg.power(x0, 2 * n));
    for (int i = 0; i < n; ++i) c /= q0;
    CHECK(c != 0);
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      Vector x = test::random_vector(6, seed);
      Rational q = alg.space().norm(x);
      Rational expected = c;
      for (int i = 0; i < n; ++i) expected *= q;
      CHECK(alg.top_functional(alg.power(x, 2 * n)) == expected);
    }
  }
}

TEST_CASE("multiplication is commutative and associative") {
  const GradedAlgebra& alg = test::algebra(2, 5);
  std::uint64_t seed = 1;
  for (int a = 0; a <= 8; a += 2)
    for (int b = 0; a + b <= 8; b += 2) {
      auto x = random_element(alg, a, seed++);
      auto y = random_element(alg, b, seed++);
      CHECK(same(alg.multiply(x, y), alg.multiply(y, x)));
      for (int c = 0; a + b + c <= 8; c += 2) {
        auto z = random_element(alg, c, seed++);
        CHECK(same(alg.multiply(alg.multiply(x, y), z), alg.multiply(x, alg.multiply(y, z))));
      }
    }
  CHECK_THROWS_AS(alg.multiply(random_element(alg, 6, 1), random_element(alg, 4, 2)),
                  std::invalid_argument);
}

TEST_CASE("multiplication blocks agree with the product") {
  const GradedAlgebra& alg = test::algebra(2, 5);
  Vector x = test::random_vector(5, 3);
  for (int d = 0; d < 8; d += 2) {
    auto a = random_element(alg, d, 10 + d);
    CHECK(alg.multiplication_block(x, d).apply(a.coords) == alg.multiply(alg.from_h2(x), a).coords);
  }
}

TEST_CASE("builds are deterministic and survive a JSON round trip") {
  QuadraticSpace s = test::standard(5);
  GradedAlgebra a = build_verbitsky(s, 2, 20000, 11);
  GradedAlgebra b = build_verbitsky(s, 2, 20000, 11);
  CHECK(canonical_dump(to_json(a)) == canonical_dump(to_json(b)));
  GradedAlgebra c = graded_algebra_from_json(to_json(a));
  CHECK(canonical_dump(to_json(c)) == canonical_dump(to_json(a)));
  CHECK(c.product_table(2, 4) == a.product_table(2, 4));
}

TEST_CASE("a tiny sample budget is reported") {
  CHECK_THROWS_AS(build_verbitsky(test::standard(6), 2, 3, 1), BudgetExhausted);
}

TEST_CASE("symmetric algebra bookkeeping") {
  SymmetricAlgebra sym(3, 3);
  CHECK(sym.dim(0) == 1);
  CHECK(sym.dim(2) == 6);
  CHECK(sym.dim(3) == 10);
  for (std::size_t k = 0; k <= 3; ++k)
    for (std::size_t i = 0; i < sym.dim(k); ++i) CHECK(sym.index(sym.monomials(k)[i]) == i);
  CHECK(monomial_label({2, 0, 1}) == "x0^2*x2");
  CHECK(monomial_label({0, 0, 0}) == "1");
  Vector v{1, 1, 0};
  Vector sq = sym.power(v, 2);
  CHECK(sq[sym.index({2, 0, 0})] == 1);
  CHECK(sq[sym.index({1, 1, 0})] == 2);
  CHECK(sq[sym.index({0, 2, 0})] == 1);
}
