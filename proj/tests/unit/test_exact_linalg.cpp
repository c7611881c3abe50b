#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "hklab/exact_linalg.hpp"
#include "support.hpp"

using namespace hklab;

namespace {

// Leibniz expansion, used as an independent determinant oracle.
Rational leibniz(const Matrix& m) {
  std::vector<std::size_t> perm(m.rows());
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < perm.size(); ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("rationals parse and print in lowest terms") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(format_rational(Rational(-6, 4)) == "-3/2");
  CHECK(format_rational(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rref of a known matrix") {
  Matrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  RrefResult r = rref(m);
  CHECK(r.rank() == 2);
  CHECK(r.pivot_cols == std::vector<std::size_t>{0, 1});
  Matrix expected{{1, 0, 1}, {0, 1, 1}, {0, 0, 0}};
  CHECK(r.reduced == expected);
}

TEST_CASE("determinant agrees with the Leibniz expansion") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Matrix m = test::random_matrix(5, 5, seed, -4, 4);
    CHECK(determinant(m) == leibniz(m));
  }
}

TEST_CASE("inverse exists iff the determinant is nonzero") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Matrix m = test::random_matrix(4, 4, seed, -1, 1);
    auto inv = inverse(m);
    CHECK(inv.has_value() == (determinant(m) != 0));
    if (inv) CHECK(m * *inv == Matrix::identity(4));
  }
}

TEST_CASE("rank-nullity and transpose rank on random rectangular matrices") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Matrix a = test::random_matrix(4, 3, seed, -1, 1);
    Matrix m = a * test::random_matrix(3, 6, seed + 100, -1, 1);
    std::size_t r = rank(m);
    CHECK(r <= 3);
    CHECK(r == rank(m.transpose()));
    Subspace k = kernel_basis(m);
    CHECK(k.dim() + r == 6);
    CHECK((m * k.basis()).is_zero());
    CHECK(image_basis(m).dim() == r);
  }
}

TEST_CASE("sum and intersection satisfy the dimension formula") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Subspace a = Subspace::span(test::random_matrix(6, 3, seed, -1, 1));
    Subspace b = Subspace::span(test::random_matrix(6, 4, seed + 50, -1, 1));
    Subspace s = subspace_sum(a, b);
    Subspace i = subspace_intersection(a, b);
    CHECK(s.dim() + i.dim() == a.dim() + b.dim());
    CHECK(a.contains(i));
    CHECK(b.contains(i));
    CHECK(s.contains(a));
    CHECK(s.contains(b));
  }
}

TEST_CASE("solve returns a solution or reports inconsistency") {
  Matrix a{{1, 1}, {2, 2}};
  CHECK_FALSE(solve(a, Vector{1, 3}).has_value());
  auto x = solve(a, Vector{1, 2});
  REQUIRE(x.has_value());
  CHECK(a.apply(*x) == Vector{1, 2});
}

TEST_CASE("nilpotence index of Jordan blocks") {
  Matrix n(5, 5);
  n(0, 1) = 1;
  n(1, 2) = 1;
  n(3, 4) = 1;
  CHECK(nilpotence_index(n) == 2);
  CHECK(nilpotence_index(Matrix(3, 3)) == 0);
  CHECK_THROWS_AS(nilpotence_index(Matrix::identity(2)), NotNilpotentError);
}

TEST_CASE("integer eigenspaces of a conjugated diagonal matrix") {
  Matrix p{{1, 1, 0}, {0, 1, 1}, {1, 0, 2}};
  Matrix d{{2, 0, 0}, {0, -1, 0}, {0, 0, 2}};
  Matrix m = p * d * *inverse(p);
  auto es = integer_eigenspaces(m);
  REQUIRE(es.size() == 2);
  CHECK(es[0].value == -1);
  CHECK(es[0].space.dim() == 1);
  CHECK(es[1].value == 2);
  CHECK(es[1].space.dim() == 2);
  Matrix jordan{{1, 1}, {0, 1}};
  CHECK_THROWS_AS(integer_eigenspaces(jordan), NonSemisimpleError);
}

TEST_CASE("joint eigendecomposition of commuting diagonal operators") {
  Matrix a = Matrix::diagonal(std::vector<Rational>{1, 1, 0, 0});
  Matrix b = Matrix::diagonal(std::vector<Rational>{0, 1, 0, 1});
  std::vector<Matrix> ops{a, b};
  auto js = joint_eigendecomposition(ops);
  CHECK(js.size() == 4);
  for (const auto& j : js) CHECK(j.space.dim() == 1);
  Matrix c{{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
  std::vector<Matrix> bad{a + c, b};
  CHECK_THROWS(joint_eigendecomposition(bad));
}

TEST_CASE("incremental rref tracks the batch rank") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Matrix m = test::random_matrix(3, 5, seed, -2, 2) * test::random_matrix(5, 7, seed + 9, -2, 2);
    IncrementalRref inc(7);
    for (std::size_t i = 0; i < m.rows(); ++i) inc.add(m.row(i));
    CHECK(inc.rank() == rank(m));
    Matrix q = inc.cokernel_map();
    CHECK(q.rows() == 7 - inc.rank());
    CHECK((q * m.transpose()).is_zero());
  }
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(Matrix(2, 3) * Matrix(2, 3), ShapeError);
  CHECK_THROWS_AS(Matrix(2, 3).hstack(Matrix(3, 1)), ShapeError);
}
