#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hklab/module_io.hpp"
#include "support.hpp"

using namespace hklab;

namespace {

std::string fixture(const std::string& name) { return std::string(HKLAB_FIXTURES_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t count_rationals(const Json& j) {
  if (j.is_string()) return 1;
  std::size_t c = 0;
  if (j.is_array() || j.is_object())
    for (const auto& x : j) c += count_rationals(x);
  return c;
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

const ValidationCheck* find(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("the committed SH fixture loads, validates and re-serialises byte for byte") {
  std::string text = slurp(fixture("sh_n2_b5.json"));
  LLVModuleSpec spec = load_module_file(fixture("sh_n2_b5.json"));
  CHECK(spec.module.n == 2);
  CHECK(spec.module.b2() == 5);
  CHECK(spec.lambda_actions.size() == 5);
  CHECK(spec.frame.has_value());
  CHECK(validate(spec).passed());
  CHECK(canonical_dump(to_json(spec)) == text);
}

TEST_CASE("export round trip and rational count") {
  const GradedAlgebra& alg = test::algebra(2, 6);
  HodgeFrame frame = build_frame(alg.space(), 0);
  Json j = export_module(alg, frame);
  CHECK(j["schema"] == kModuleSchema);
  LLVModuleSpec back = load_module(j);
  CHECK(canonical_dump(to_json(back)) == canonical_dump(j));

  std::size_t b2 = alg.b2();
  std::size_t expected = b2 * b2 + 4 * b2;
  for (int d : alg.degrees()) {
    std::size_t here = alg.dim(d);
    expected += here * here;
    expected += b2 * here * dim_at(alg.dims(), d + 2);
    expected += b2 * here * dim_at(alg.dims(), d - 2);
  }
  expected += b2 * b2;
  Json counted = j;
  counted.erase("schema");
  counted.erase("label");
  CHECK(count_rationals(counted) == expected);
}

TEST_CASE("malformed documents are schema errors") {
  Json good = Json::parse(slurp(fixture("sh_n2_b5.json")));
  {
    Json j = good;
    j["L_actions"][0]["blocks"][0]["matrix"][0][0] = "1/0";
    CHECK_THROWS_AS(load_module(j), SchemaError);
  }
  {
    Json j = good;
    j["L_actions"][0]["blocks"][0]["matrix"][0][0] = 1.5;
    CHECK_THROWS_AS(load_module(j), SchemaError);
  }
  {
    Json j = good;
    j["schema"] = "something-else/9";
    CHECK_THROWS_AS(load_module(j), SchemaError);
  }
  {
    Json j = good;
    j["degrees"][1]["dim"] = 4;
    CHECK_THROWS_AS(load_module(j), SchemaError);
  }
  {
    Json j = good;
    j.erase("h_action");
    try {
      load_module(j);
      FAIL("expected a schema error");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("h_action") != std::string::npos);
    }
  }
  std::string text = slurp(fixture("sh_n2_b5.json"));
  CHECK_THROWS_AS(load_module_file(temp_file("hklab_truncated.json", text.substr(0, text.size() / 2))),
                  SchemaError);
  CHECK_THROWS_AS(load_module_file("/nonexistent/hklab.json"), SchemaError);
}

TEST_CASE("the ladder loads and validates") {
  LLVModuleSpec spec = load_module_file(fixture("ladder3.json"));
  CHECK(spec.module.b2() == 1);
  CHECK(spec.module.dims == GradedDims{{0, 1}, {2, 1}, {4, 1}});
  CHECK(validate(spec).passed());
  CHECK(canonical_dump(to_json(ladder_module())) == slurp(fixture("ladder3.json")));
}

TEST_CASE("the corrupted fixture fails the commutation check with a witness") {
  LLVModuleSpec spec = load_module_file(fixture("corrupted.json"));
  ValidationReport r = validate(spec);
  CHECK_FALSE(r.passed());
  const ValidationCheck* first = r.first_failure();
  REQUIRE(first != nullptr);
  CHECK(first->name == "[L_x, L_y] = 0");
  CHECK_FALSE(first->witness.empty());
  CHECK(find(r, "h eigenvalues")->passed);
  CHECK(find(r, "[h, L] = 2L")->passed);
}

TEST_CASE("a shifted copy fails the grading check") {
  LLVModuleSpec spec = load_module_file(fixture("shifted_copy.json"));
  ValidationReport r = validate(spec);
  CHECK_FALSE(r.passed());
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->name == "h eigenvalues");
}

TEST_CASE("spinor fixtures validate") {
  for (const char* name : {"spinor_n2_b5.json", "spinor_tensor.json"}) {
    LLVModuleSpec spec = load_module_file(fixture(name));
    ValidationReport r = validate(spec);
    const ValidationCheck* f = r.first_failure();
    CHECK_MESSAGE(r.passed(), name << ": " << (f ? f->name + " " + f->witness : ""));
  }
  QuadraticSpace b4 = test::standard(4);
  LLVModuleSpec s = spinor_module(b4, 1);
  CHECK(s.module.dims == GradedDims{{1, 4}, {3, 4}});
  CHECK(validate(s).passed());
  CHECK_THROWS(spinor_module(make_standard_space(5, {Rational(2)}), 1));
}

TEST_CASE("validation of a wrong supplied Lambda") {
  LLVModuleSpec spec = load_module_file(fixture("sh_n2_b5.json"));
  spec.lambda_actions[0].action *= Rational(2);
  ValidationReport r = validate(spec);
  CHECK_FALSE(r.passed());
  CHECK(r.first_failure()->name == "supplied Λ match");
  Json j = to_json(r);
  CHECK(j["passed"] == false);
  CHECK(j["checks"].size() == r.checks.size());
}
