#include <doctest.h>

#include "hklab/filtrations.hpp"
#include "support.hpp"

using namespace hklab;

namespace {

// N e2 = e1, N e1 = e0, N e3 = 0: Jordan blocks of sizes 3 and 1.
Matrix two_blocks() {
  Matrix n(4, 4);
  n(0, 1) = 1;
  n(1, 2) = 1;
  return n;
}

Subspace span_units(std::initializer_list<std::size_t> idx, std::size_t dim) {
  std::vector<Vector> v;
  for (std::size_t i : idx) v.push_back(unit_vector(dim, i));
  return Subspace::span(v, dim);
}

struct Frame {
  LLVModule m;
  FrameOperators ops;
  Bigrading big;
};

Frame frame_of(int n, std::size_t b2) {
  const GradedAlgebra& alg = test::algebra(n, b2);
  LLVModule m = module_of(alg);
  LambdaExtension lam(m);
  FrameOperators ops = frame_operators(m, lam, build_frame(alg.space(), 0));
  Bigrading big = bigrading(m, ops);
  return {m, ops, big};
}

}  // namespace

TEST_CASE("weight filtration of two Jordan blocks") {
  WeightFiltration w = weight_filtration(two_blocks(), 2);
  CHECK(w.centre == 2);
  CHECK(w.at(-1).dim() == 0);
  CHECK(w.at(0) == span_units({0}, 4));
  CHECK(w.at(1) == span_units({0}, 4));
  CHECK(w.at(2) == span_units({0, 1, 3}, 4));
  CHECK(w.at(3) == span_units({0, 1, 3}, 4));
  CHECK(w.at(4) == Subspace::full(4));
  CHECK(w.at(7) == Subspace::full(4));
  CHECK(w.gr_dim(0) == 1);
  CHECK(w.gr_dim(2) == 2);
  CHECK(w.gr_dim(4) == 1);
  CHECK(w.gr_dim(1) == 0);
  CHECK(verify_weight_filtration(two_blocks(), w));
}

TEST_CASE("wrong filtrations are rejected") {
  WeightFiltration w = weight_filtration(two_blocks(), 2);
  WeightFiltration missing = w;
  missing.steps[2] = span_units({0, 1}, 4);
  missing.steps[3] = span_units({0, 1}, 4);
  CHECK_FALSE(verify_weight_filtration(two_blocks(), missing));
  WeightFiltration shifted = w;
  shifted.steps[0] = span_units({0, 1}, 4);
  shifted.steps[1] = span_units({0, 1}, 4);
  CHECK_FALSE(verify_weight_filtration(two_blocks(), shifted));
}

TEST_CASE("a centre below the nilpotence index throws") {
  CHECK_THROWS_AS(weight_filtration(two_blocks(), 1), std::invalid_argument);
  CHECK_NOTHROW(weight_filtration(Matrix(3, 3), 0));
}

TEST_CASE("weight filtrations of random nilpotent matrices satisfy the axioms") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Matrix strict(6, 6);
    Matrix r = test::random_matrix(6, 6, seed, -2, 2);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) strict(i, j) = (seed % 3 == 0 && j == i + 2) ? 0 : r(i, j);
    Matrix p = test::random_matrix(6, 6, seed + 40, -1, 1) + Matrix::identity(6) * Rational(3);
    auto pinv = inverse(p);
    if (!pinv) continue;
    Matrix n = p * strict * *pinv;
    int k = static_cast<int>(nilpotence_index(n));
    WeightFiltration w = weight_filtration(n, k);
    CHECK(verify_weight_filtration(n, w));
    std::size_t total = 0;
    for (int i = 0; i <= 2 * k; ++i) total += w.gr_dim(i);
    CHECK(total == 6);
  }
}

TEST_CASE("perverse and weight filtrations of L_beta agree") {
  for (int n = 1; n <= 3; ++n) {
    Frame f = frame_of(n, 5);
    CheckResult r = crosscheck_perverse_weight(f.m, f.ops.L_beta);
    CHECK_MESSAGE(r.passed, (r.witnesses.empty() ? "" : r.witnesses.front()));
  }
}

TEST_CASE("the weight filtration of L_sbar is the conjugate Hodge filtration") {
  for (int n = 1; n <= 2; ++n) {
    Frame f = frame_of(n, 6);
    CheckResult r = conjugate_hodge_check(f.m, f.ops.L_sbar, f.big);
    CHECK_MESSAGE(r.passed, (r.witnesses.empty() ? "" : r.witnesses.front()));
  }
}

TEST_CASE("perverse chain is increasing and exhaustive") {
  Frame f = frame_of(2, 5);
  for (int d = 0; d <= 8; d += 2) {
    PerverseChain p = perverse_filtration(f.m, f.ops.L_beta, d);
    CHECK(p.at(p.first - 1).dim() == 0);
    CHECK(p.at(p.first + static_cast<int>(p.steps.size())).dim() == dim_at(f.m.dims, d));
    for (std::size_t i = 1; i < p.steps.size(); ++i) CHECK(p.steps[i].contains(p.steps[i - 1]));
  }
}

TEST_CASE("graded pieces of M agree with the perverse graded pieces") {
  for (int n = 1; n <= 3; ++n)
    for (std::size_t b2 : {4u, 6u}) {
      Frame f = frame_of(n, b2);
      auto m_filt = monodromy_filtrations(f.ops.M, n);
      GrComparison g = compare_gr_dims(m_filt, f.big, f.m, f.ops.L_beta);
      CHECK(g.agree);
      CHECK(g.monodromy == g.perverse);
    }
}

TEST_CASE("Gr^M on H^2 is (2, b2-4, 2)") {
  for (std::size_t b2 = 4; b2 <= 7; ++b2) {
    Frame f = frame_of(1, b2);
    auto m_filt = monodromy_filtrations(f.ops.M, 1);
    const WeightFiltration& w = m_filt.at(2);
    CHECK(w.gr_dim(0) == 2);
    CHECK(w.gr_dim(1) == b2 - 4);
    CHECK(w.gr_dim(2) == 2);
  }
}

TEST_CASE("slice_degree picks out one degree") {
  GradedDims dims{{0, 1}, {2, 3}};
  Subspace s = span_units({0, 2}, 4);
  CHECK(slice_degree(s, dims, 0).dim() == 1);
  CHECK(slice_degree(s, dims, 2) == span_units({1}, 3));
}
