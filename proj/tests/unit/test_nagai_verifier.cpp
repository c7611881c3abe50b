#include <doctest.h>

#include "hklab/nagai_verifier.hpp"
#include "support.hpp"

using namespace hklab;

namespace {

struct Setup {
  LLVModule m;
  FrameOperators ops;
  Bigrading big;
};

Setup setup(int n, std::size_t b2) {
  const GradedAlgebra& alg = test::algebra(n, b2);
  LLVModule m = module_of(alg);
  LambdaExtension lam(m);
  FrameOperators ops = frame_operators(m, lam, build_frame(alg.space(), 0));
  Bigrading big = bigrading(m, ops);
  return {m, ops, big};
}

const Verdict* find(const std::vector<Verdict>& vs, const std::string& claim) {
  for (const auto& v : vs)
    if (v.claim == claim) return &v;
  return nullptr;
}

bool all_pass(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (!v.passed) return false;
  return true;
}

Bigrading single_component(int n, PQI key) {
  Bigrading b;
  b.n = n;
  b.dims = {{key[0] + key[1], 1}};
  b.components[key] = Subspace::full(1);
  return b;
}

std::string fixture(const std::string& name) { return std::string(HKLAB_FIXTURES_DIR) + "/" + name; }

}  // namespace

TEST_CASE("nilpotence profiles of SH") {
  CHECK(nilpotence_profile(setup(1, 5).ops.M) == NilpotenceProfile{{0, 0}, {2, 1}, {4, 0}});
  CHECK(nilpotence_profile(setup(2, 5).ops.M) ==
        NilpotenceProfile{{0, 0}, {2, 1}, {4, 2}, {6, 1}, {8, 0}});
  CHECK(nilpotence_profile(setup(3, 4).ops.M) ==
        NilpotenceProfile{{0, 0}, {2, 1}, {4, 2}, {6, 3}, {8, 2}, {10, 1}, {12, 0}});
  for (int n = 1; n <= 3; ++n) {
    auto p = nilpotence_profile(setup(n, 6).ops.M);
    CHECK(all_pass(check_even_nagai(p, n)));
    CHECK(check_profile_duality(p, n).passed);
  }
}

TEST_CASE("a zeroed block of M breaks the even checks with a witness") {
  Setup s = setup(2, 5);
  GradedOperator M = s.ops.M;
  M.set_block(4, Matrix(s.m.dims.at(4), s.m.dims.at(4)));
  auto verdicts = check_even_nagai(nilpotence_profile(M), 2);
  const Verdict* v = find(verdicts, "nagai.even.nilp_2n_is_n");
  REQUIRE(v != nullptr);
  CHECK_FALSE(v->passed);
  CHECK(v->asserted);
  CHECK_FALSE(v->witnesses.empty());
  CHECK_FALSE(find(verdicts, "nagai.even.nilp_2k_is_k")->passed);
  CHECK(find(verdicts, "nagai.even.M_pow_n_plus_1_zero")->passed);
  CHECK(check_profile_duality(nilpotence_profile(M), 2).passed);
}

TEST_CASE("an overlong Jordan chain violates M^(n+1) = 0") {
  NilpotenceProfile p{{0, 0}, {2, 2}, {4, 1}};
  auto verdicts = check_even_nagai(p, 1);
  CHECK_FALSE(find(verdicts, "nagai.even.M_pow_n_plus_1_zero")->passed);
  CHECK_FALSE(check_profile_duality(p, 1).passed);
}

TEST_CASE("level reformulation") {
  for (int n = 1; n <= 3; ++n) CHECK(check_level_reformulation(setup(n, 5).big).passed);
  Verdict bad = check_level_reformulation(single_component(1, {2, 0, 0}));
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.witnesses.empty());
  CHECK(check_level_reformulation(single_component(1, {2, 0, 1})).passed);
}

TEST_CASE("hodge levels of SH in low degree") {
  Setup s = setup(2, 5);
  CHECK(hodge_level(s.big, 0) == 0);
  CHECK(hodge_level(s.big, 2) == 2);
  CHECK(hodge_level(s.big, 4) == 4);
  CHECK(hodge_level(s.big, 3) == -1);
}

TEST_CASE("an asymmetric bigrading stops the mod 4 check") {
  auto verdicts = check_betti_mod4(single_component(1, {1, 0, 0}));
  REQUIRE(verdicts.size() == 2);
  CHECK(verdicts[0].claim == "betti.symmetry");
  CHECK_FALSE(verdicts[0].passed);
  CHECK_FALSE(verdicts[1].asserted);
}

TEST_CASE("odd checks are vacuous without odd degrees") {
  Setup s = setup(2, 5);
  auto odd = check_odd(s.big, nilpotence_profile(s.ops.M), kernel_condition_table(s.m, s.ops, s.big));
  CHECK(all_pass(odd));
  auto betti = check_betti_mod4(s.big);
  CHECK(all_pass(betti));
}

TEST_CASE("the spinor module sits inside the odd bounds") {
  Report r = run_module(load_module_file(fixture("spinor_n2_b5.json")), 0);
  CHECK(r.passed());
  CHECK(r.profile == NilpotenceProfile{{3, 1}, {5, 1}});
  for (const char* claim : {"odd.upper_2k_minus_3.d=3", "odd.upper_n_minus_1.d=3", "betti.mod4"}) {
    const Verdict* v = find(r.verdicts, claim);
    REQUIRE_MESSAGE(v != nullptr, claim);
    CHECK(v->asserted);
    CHECK(v->passed);
  }
  const Verdict* lower = find(r.verdicts, "odd.lower_level.d=3");
  REQUIRE(lower != nullptr);
  CHECK_FALSE(lower->asserted);
  CHECK(lower->passed);
}

TEST_CASE("the spinor tensor product evaluates odd bounds without asserting them") {
  Report r = run_module(load_module_file(fixture("spinor_tensor.json")), 0);
  CHECK(r.passed());
  const Verdict* upper = find(r.verdicts, "odd.upper_2k_minus_3.d=3");
  REQUIRE(upper != nullptr);
  CHECK_FALSE(upper->asserted);
  const Verdict* betti = find(r.verdicts, "betti.mod4");
  REQUIRE(betti != nullptr);
  CHECK(betti->asserted);
  CHECK(betti->passed);
}

TEST_CASE("modules that fail validation are refused") {
  Report r = run_module(load_module_file(fixture("corrupted.json")), 0);
  CHECK_FALSE(r.passed());
  Report shifted = run_module(load_module_file(fixture("shifted_copy.json")), 0);
  CHECK_FALSE(shifted.passed());
}

TEST_CASE("degree 0 and degree 2n diamonds") {
  for (int n = 1; n <= 3; ++n) {
    Setup s = setup(n, 5);
    DiamondTable d0 = diamond_report(s.big, 0);
    CHECK(d0.cells.size() == 1);
    CHECK(d0.cells.at({0, 0}) == 1);
    DiamondTable mid = diamond_report(s.big, 2 * n);
    for (const auto& [qi, dim] : mid.cells) CHECK(mid.cells.at({2 * n - qi.first, qi.second}) == dim);
    DiamondTable top = diamond_report(s.big, 4 * n);
    CHECK(top.cells.at({2 * n, 2 * n}) == 1);
  }
}

TEST_CASE("degree 2 diamond layout") {
  for (std::size_t b2 = 4; b2 <= 7; ++b2) {
    Setup s = setup(1, b2);
    DiamondTable d = diamond_report(s.big, 2);
    CHECK(d.cells.at({1, 0}) == 1);
    CHECK(d.cells.at({1, 2}) == 1);
    CHECK(d.cells.at({0, 1}) == 1);
    CHECK(d.cells.at({2, 1}) == 1);
    if (b2 > 4) CHECK(d.cells.at({1, 1}) == b2 - 4);
    CHECK(check_degree2_diamond(s.big, b2).passed);
  }
  Setup s = setup(1, 5);
  std::string text = render_diamond(diamond_report(s.big, 2));
  CHECK(text.find("i\\q") != std::string::npos);
  Json j = to_json(diamond_report(s.big, 2));
  CHECK(j["cells"].size() == 5);
  CHECK_FALSE(check_degree2_diamond(single_component(1, {1, 1, 1}), 5).passed);
}

TEST_CASE("the kernel condition holds below q = n") {
  for (int n = 1; n <= 3; ++n) {
    Setup s = setup(n, 5);
    auto table = kernel_condition_table(s.m, s.ops, s.big);
    for (const auto& e : table) {
      CHECK(e.p + e.q <= 2 * n - 2);
      if (e.q < n) CHECK(e.holds());
    }
    for (const auto& v : check_kernel_condition(table, n))
      if (v.asserted) CHECK(v.passed);
  }
  auto t2 = kernel_condition_table(setup(2, 5).m, setup(2, 5).ops, setup(2, 5).big);
  REQUIRE_FALSE(t2.empty());
  CHECK(t2.front().p == 0);
  CHECK(t2.front().q == 0);
  CHECK(t2.front().holds());
}

TEST_CASE("full instance runs pass and carry their seeds") {
  InstanceConfig c;
  c.n = 2;
  c.b2 = 5;
  c.seed = 3;
  Report r = run_instance(c);
  CHECK(r.passed());
  Json j = to_json(r);
  for (const char* key : {"instance", "seeds", "profiles", "verdicts", "tables", "passed"})
    CHECK_MESSAGE(j.contains(key), key);
  CHECK(j["seeds"]["build"] == 3);
  CHECK(render_text(r).find("RESULT PASS") != std::string::npos);
}

TEST_CASE("grid output does not depend on the thread count") {
  std::vector<InstanceConfig> configs;
  for (auto [n, b2] : std::vector<std::pair<int, std::size_t>>{{1, 4}, {1, 5}, {2, 4}, {1, 7}}) {
    InstanceConfig c;
    c.n = n;
    c.b2 = b2;
    c.seed = 5;
    c.derivation_trials = 20;
    configs.push_back(c);
  }
  auto one = run_grid(configs, 1);
  auto many = run_grid(configs, 3);
  REQUIRE(one.size() == configs.size());
  REQUIRE(many.size() == configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    CHECK(canonical_dump(to_json(one[i])) == canonical_dump(to_json(many[i])));
  CHECK(default_grid(1, 20000).size() == 12);
}
