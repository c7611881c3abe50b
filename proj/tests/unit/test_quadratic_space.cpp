#include <doctest.h>

#include "hklab/quadratic_space.hpp"
#include "support.hpp"

using namespace hklab;

TEST_CASE("standard space gram and signature") {
  QuadraticSpace s = test::standard(6);
  CHECK(s.dim() == 6);
  CHECK(s.bilinear(unit_vector(6, 0), unit_vector(6, 1)) == 1);
  CHECK(s.norm(unit_vector(6, 0)) == 0);
  CHECK(s.norm(unit_vector(6, 5)) == 2);
  CHECK(signature(s) == std::make_pair<std::size_t, std::size_t>(4, 2));
  QuadraticSpace neg = make_standard_space(5, {Rational(-3)});
  CHECK(signature(neg) == std::make_pair<std::size_t, std::size_t>(2, 3));
}

TEST_CASE("invalid gram matrices are rejected") {
  CHECK_THROWS_AS(QuadraticSpace(Matrix{{1, 1}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(QuadraticSpace(Matrix{{1, 2}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(QuadraticSpace(Matrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(make_standard_space(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_standard_space(5, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_standard_space(5, {Rational(0)}), std::invalid_argument);
}

TEST_CASE("sampled vectors are isotropic, nonzero and reproducible") {
  for (std::size_t b2 : {4u, 5u, 7u}) {
    QuadraticSpace s = test::standard(b2);
    auto a = sample_isotropic(s, 40, 9);
    auto b = sample_isotropic(s, 40, 9);
    CHECK(a == b);
    for (const auto& v : a) {
      CHECK_FALSE(is_zero(v));
      CHECK(s.norm(v) == 0);
    }
    CHECK(Subspace::span(a, b2).dim() == b2);
  }
}

TEST_CASE("sampling on a non-diagonal gram") {
  QuadraticSpace s(Matrix{{2, 1, 0, 0}, {1, -2, 0, 0}, {0, 0, 0, 3}, {0, 0, 3, 0}});
  for (const auto& v : sample_isotropic(s, 20, 3)) CHECK(s.norm(v) == 0);
}

TEST_CASE("orthogonal complement") {
  QuadraticSpace s = test::standard(6);
  Subspace w = Subspace::span(std::vector<Vector>{unit_vector(6, 0), unit_vector(6, 4)}, 6);
  Subspace c = orthogonal_complement(s, w);
  CHECK(c.dim() == 4);
  for (std::size_t i = 0; i < c.dim(); ++i) {
    CHECK(s.bilinear(c.basis_vector(i), unit_vector(6, 0)) == 0);
    CHECK(s.bilinear(c.basis_vector(i), unit_vector(6, 4)) == 0);
  }
}

TEST_CASE("reflections and Eichler transformations preserve the form") {
  QuadraticSpace s = test::standard(7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Vector r = test::random_vector(7, seed);
    if (s.norm(r) == 0) continue;
    Matrix g = reflection(s, r);
    CHECK(preserves_form(s, g));
    CHECK(determinant(g) == -1);
    CHECK(g * g == Matrix::identity(7));
  }
  Vector u = unit_vector(7, 0);
  Vector z = unit_vector(7, 2) + unit_vector(7, 5);
  Matrix e = eichler_transformation(s, u, z);
  CHECK(is_special_isometry(s, e));
  CHECK_THROWS_AS(eichler_transformation(s, unit_vector(7, 4), z), std::invalid_argument);
  CHECK_THROWS_AS(reflection(s, u), std::invalid_argument);
}

TEST_CASE("Witt transport maps one isotropic plane onto another") {
  for (std::size_t b2 : {5u, 6u, 7u}) {
    QuadraticSpace s = test::standard(b2);
    auto iso = sample_isotropic(s, 60, 4);
    std::vector<IsotropicPlane> planes;
    for (std::size_t i = 0; i < iso.size() && planes.size() < 4; ++i)
      for (std::size_t j = i + 1; j < iso.size() && planes.size() < 4; ++j) {
        IsotropicPlane p{iso[i], iso[j]};
        if (is_isotropic_plane(s, p)) planes.push_back(p);
      }
    planes.push_back({unit_vector(b2, 0), unit_vector(b2, 2)});
    planes.push_back({unit_vector(b2, 1), unit_vector(b2, 3)});
    for (const auto& p1 : planes)
      for (const auto& p2 : planes) {
        Isometry g = witt_transport(s, p1, p2);
        CHECK(is_special_isometry(s, g.matrix));
        CHECK(image_of(g.matrix, span_of(p1)) == span_of(p2));
      }
  }
}

TEST_CASE("Witt transport in dimension four hits the SO obstruction") {
  QuadraticSpace s = test::standard(4);
  IsotropicPlane a{unit_vector(4, 0), unit_vector(4, 2)};
  IsotropicPlane b{unit_vector(4, 1), unit_vector(4, 3)};
  IsotropicPlane c{unit_vector(4, 0), unit_vector(4, 3)};
  Isometry g = witt_transport(s, a, b);
  CHECK(is_special_isometry(s, g.matrix));
  CHECK(image_of(g.matrix, span_of(a)) == span_of(b));
  CHECK_THROWS_AS(witt_transport(s, a, c), TransportObstruction);
  CHECK_THROWS_AS(witt_transport(s, a, IsotropicPlane{unit_vector(4, 0), unit_vector(4, 1)}),
                  std::invalid_argument);
}

TEST_CASE("quadratic space JSON round trip and schema errors") {
  QuadraticSpace s = make_standard_space(6, {Rational(2), Rational(-1, 3)});
  CHECK(quadratic_space_from_json(to_json(s)) == s);
  Json bad = to_json(s);
  bad["gram"][0][0] = "x";
  CHECK_THROWS_AS(quadratic_space_from_json(bad), SchemaError);
  Json degenerate = {{"dim", 2}, {"gram", {{"1", "1"}, {"1", "1"}}}};
  CHECK_THROWS_AS(quadratic_space_from_json(degenerate), SchemaError);
}
