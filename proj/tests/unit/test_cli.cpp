#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hklab/json_io.hpp"

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  std::string cmd = std::string(HKLAB_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(HKLAB_FIXTURES_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("build is deterministic and reports the expected dimensions") {
  Result a = run("build --n 2 --b2 5 --seed 7");
  Result b = run("build --n 2 --b2 5 --seed 7");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  hklab::Json j = hklab::Json::parse(a.out);
  std::vector<std::size_t> dims;
  for (const auto& d : j["degrees"]) dims.push_back(d["dim"].get<std::size_t>());
  CHECK(dims == std::vector<std::size_t>{1, 5, 15, 5, 1});
}

TEST_CASE("verify exit codes") {
  Result ok = run("verify --n 1 --b2 5");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("RESULT PASS") != std::string::npos);
  Result json = run("verify --n 1 --b2 4 --format json");
  CHECK(json.status == 0);
  CHECK(hklab::Json::parse(json.out)["passed"] == true);
  Result bad = run("verify --module " + fixture("corrupted.json"));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("witness") != std::string::npos);
  CHECK(run("verify --n 1 --b2 3").status == 2);
  CHECK(run("verify --n 0 --b2 5").status == 2);
  CHECK(run("verify --b2 6 --tail 1").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("").status == 2);
}

TEST_CASE("build then verify from the file") {
  std::string path = temp_path("hklab_cli_alg.json");
  REQUIRE(run("build --n 1 --b2 6 --seed 2 --out " + path).status == 0);
  Result r = run("verify --in " + path + " --format json");
  CHECK(r.status == 0);
  CHECK(hklab::Json::parse(r.out)["instance"]["b2"] == 6);
}

TEST_CASE("diamond output") {
  Result t = run("diamond --n 1 --b2 6 --degree 2");
  REQUIRE(t.status == 0);
  CHECK(t.out.find("i\\q") != std::string::npos);
  Result j = run("diamond --n 1 --b2 6 --degree 2 --format json");
  REQUIRE(j.status == 0);
  std::map<std::pair<int, int>, std::size_t> cells;
  hklab::Json doc = hklab::Json::parse(j.out);
  for (const auto& c : doc["cells"])
    cells[{c["q"].get<int>(), c["i"].get<int>()}] = c["dim"].get<std::size_t>();
  CHECK(cells.at({1, 1}) == 2);
  CHECK(cells.at({1, 0}) == 1);
  CHECK(cells.at({1, 2}) == 1);
}

TEST_CASE("transport and its obstruction") {
  Result ok = run("transport --b2 4");
  REQUIRE(ok.status == 0);
  hklab::Json j = hklab::Json::parse(ok.out);
  CHECK(j["checks"]["special_orthogonal"] == true);
  CHECK(j["checks"]["maps_p1_onto_p2"] == true);
  CHECK(j["checks"]["inverse_round_trip"] == true);
  CHECK(run("transport --b2 4 --p1 '1,0,0,0;0,0,1,0' --p2 '1,0,0,0;0,0,0,1'").status == 1);
  CHECK(run("transport --b2 5 --p1 '1,0,0,0,0;0,0,1,0,0' --p2 '1,0,0,0,0;0,0,0,1,0'").status == 0);
  CHECK(run("transport --b2 4 --p1 '1,0,0,0;0,1,0,0'").status == 2);
}

TEST_CASE("export and validate") {
  std::string path = temp_path("hklab_cli_module.json");
  REQUIRE(run("export --n 1 --b2 5 --out " + path).status == 0);
  Result v = run("validate --in " + path);
  CHECK(v.status == 0);
  CHECK(v.out.find("RESULT PASS") != std::string::npos);
  CHECK(run("validate --in " + fixture("shifted_copy.json")).status == 1);
  std::ifstream in(fixture("sh_n2_b5.json"), std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string trunc = temp_path("hklab_cli_truncated.json");
  std::ofstream(trunc, std::ios::binary) << ss.str().substr(0, 500);
  CHECK(run("validate --in " + trunc).status == 3);
  CHECK(run("validate").status == 2);
}
