#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hklab/module_io.hpp"
#include "hklab/nagai_verifier.hpp"

using namespace hklab;

namespace {

enum Exit { kOk = 0, kChecksFailed = 1, kUsage = 2, kRuntime = 3 };

struct RunConfig {
  int n = 2;
  std::size_t b2 = 5;
  std::vector<std::string> tail;
  std::uint64_t seed = 0;
  std::uint64_t frame_seed = 0;
  std::size_t budget = 20000;
  int degree = 2;
  std::string in;
  std::string out;
  std::string module;
  std::string format = "text";
  std::string grid;
  std::string p1;
  std::string p2;
  unsigned threads = 0;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("HKLAB_SEED");
  if (!env) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw CLI::ValidationError("HKLAB_SEED", "not an unsigned integer");
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError(path + ": cannot open");
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

InstanceConfig instance_config(const RunConfig& c) {
  InstanceConfig ic;
  ic.n = c.n;
  ic.b2 = c.b2;
  for (const std::string& t : c.tail) ic.tail.push_back(parse_rational(t));
  if (!ic.tail.empty() && ic.tail.size() != c.b2 - 4)
    throw CLI::ValidationError("--tail", "expected b2 - 4 = " + std::to_string(c.b2 - 4) + " entries");
  ic.seed = c.seed;
  ic.frame_seed = c.frame_seed;
  ic.budget = c.budget;
  return ic;
}

GradedAlgebra obtain_algebra(const RunConfig& c) {
  if (!c.in.empty()) {
    Json j;
    try {
      j = Json::parse(read_file(c.in));
    } catch (const Json::parse_error& e) {
      throw SchemaError(c.in + ": " + e.what());
    }
    return graded_algebra_from_json(j);
  }
  InstanceConfig ic = instance_config(c);
  return build_verbitsky(instance_space(ic), ic.n, ic.budget, ic.seed);
}

std::vector<Rational> parse_row(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

IsotropicPlane parse_plane(const std::string& text, const std::string& flag, std::size_t b2) {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw CLI::ValidationError(flag, "expected two vectors separated by ';'");
  IsotropicPlane p{parse_row(text.substr(0, semi)), parse_row(text.substr(semi + 1))};
  if (p.v1.size() != b2 || p.v2.size() != b2)
    throw CLI::ValidationError(flag, "vectors must have b2 = " + std::to_string(b2) + " entries");
  return p;
}

std::string report_text(const Report& r, const std::string& format) {
  return format == "json" ? canonical_dump(to_json(r)) : render_text(r);
}

int cmd_build(const RunConfig& c) {
  write_output(c.out, canonical_dump(to_json(obtain_algebra(c))));
  return kOk;
}

int cmd_verify(const RunConfig& c) {
  if (!c.module.empty()) {
    Report r = run_module(load_module_file(c.module), c.frame_seed);
    write_output(c.out, report_text(r, c.format));
    return r.passed() ? kOk : kChecksFailed;
  }
  if (!c.grid.empty()) {
    std::vector<InstanceConfig> configs;
    if (c.grid == "default") {
      configs = default_grid(c.seed, c.budget);
    } else if (c.grid == "small") {
      for (const InstanceConfig& ic : default_grid(c.seed, c.budget))
        if (ic.n <= 2 && ic.b2 <= 5) configs.push_back(ic);
    } else {
      throw CLI::ValidationError("--grid", "expected 'default' or 'small'");
    }
    for (InstanceConfig& ic : configs) ic.frame_seed = c.frame_seed;
    unsigned threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<Report> reports = run_grid(configs, threads);
    bool ok = true;
    const std::string ext = c.format == "json" ? ".json" : ".txt";
    if (!c.out.empty()) std::filesystem::create_directories(c.out);
    Json all = Json::array();
    std::string text;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      ok = ok && reports[i].passed();
      const std::string body = report_text(reports[i], c.format);
      if (!c.out.empty()) {
        write_output((std::filesystem::path(c.out) / ("report_n" + std::to_string(configs[i].n) + "_b2" +
                                                      std::to_string(configs[i].b2) + ext))
                         .string(),
                     body);
      } else if (c.format == "json") {
        all.push_back(to_json(reports[i]));
      } else {
        text += body + "\n";
      }
      std::cerr << "n=" << configs[i].n << " b2=" << configs[i].b2 << ": "
                << (reports[i].passed() ? "PASS" : "FAIL") << "\n";
    }
    if (c.out.empty()) write_output("", c.format == "json" ? canonical_dump(all) : text);
    return ok ? kOk : kChecksFailed;
  }
  Report r = c.in.empty() ? run_instance(instance_config(c)) : run_algebra(obtain_algebra(c), instance_config(c));
  write_output(c.out, report_text(r, c.format));
  return r.passed() ? kOk : kChecksFailed;
}

int cmd_diamond(const RunConfig& c) {
  std::optional<LLVModuleSpec> spec;
  if (!c.module.empty()) {
    spec = load_module_file(c.module);
    ValidationReport vr = validate(*spec);
    if (const ValidationCheck* bad = vr.first_failure()) {
      std::cerr << "hklab: module fails validation: " << bad->name << ": " << bad->witness << "\n";
      return kChecksFailed;
    }
  } else {
    GradedAlgebra alg = obtain_algebra(c);
    spec = LLVModuleSpec{module_of(alg), {}, std::nullopt, ""};
  }
  const LLVModule& m = spec->module;
  HodgeFrame frame = spec->frame ? *spec->frame : build_frame(m.space, c.frame_seed);
  LambdaExtension lam(m);
  Bigrading big = bigrading(m, frame_operators(m, lam, frame));
  DiamondTable t = diamond_report(big, c.degree);
  write_output(c.out, c.format == "json" ? canonical_dump(to_json(t)) : render_diamond(t));
  return kOk;
}

int cmd_transport(const RunConfig& c) {
  InstanceConfig ic = instance_config(c);
  QuadraticSpace space = instance_space(ic);
  const std::size_t b = space.dim();
  auto standard = [&](std::size_t a, std::size_t d) { return IsotropicPlane{unit_vector(b, a), unit_vector(b, d)}; };
  IsotropicPlane p1 = c.p1.empty() ? standard(0, 2) : parse_plane(c.p1, "--p1", b);
  IsotropicPlane p2 = c.p2.empty() ? standard(1, 3) : parse_plane(c.p2, "--p2", b);
  Json j = {{"space", to_json(space)},
            {"p1", {vector_to_json(p1.v1), vector_to_json(p1.v2)}},
            {"p2", {vector_to_json(p2.v1), vector_to_json(p2.v2)}}};
  try {
    Isometry g = witt_transport(space, p1, p2);
    Matrix inv = *inverse(g.matrix);
    j["isometry"] = matrix_to_json(g.matrix);
    j["checks"] = {{"special_orthogonal", is_special_isometry(space, g.matrix)},
                   {"maps_p1_onto_p2", image_of(g.matrix, span_of(p1)) == span_of(p2)},
                   {"inverse_round_trip", g.matrix * inv == Matrix::identity(b)}};
  } catch (const TransportObstruction& e) {
    std::cerr << "hklab: transport obstruction: " << e.what() << "\n";
    return kChecksFailed;
  }
  write_output(c.out, canonical_dump(j));
  return kOk;
}

int cmd_export(const RunConfig& c) {
  GradedAlgebra alg = obtain_algebra(c);
  write_output(c.out, canonical_dump(export_module(alg, build_frame(alg.space(), c.frame_seed))));
  return kOk;
}

int cmd_validate(const RunConfig& c) {
  const std::string& path = c.in.empty() ? c.module : c.in;
  if (path.empty()) throw CLI::ValidationError("--in", "a module file is required");
  ValidationReport r = validate(load_module_file(path));
  if (c.format == "json") {
    write_output(c.out, canonical_dump(to_json(r)));
  } else {
    std::string text;
    for (const ValidationCheck& k : r.checks)
      text += std::string(k.passed ? "PASS " : "FAIL ") + k.name + (k.passed ? "" : ": " + k.witness) + "\n";
    text += r.passed() ? "RESULT PASS\n" : "RESULT FAIL\n";
    write_output(c.out, text);
  }
  return r.passed() ? kOk : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hklab: exact LLV-module computations and monodromy checks"};
  app.require_subcommand(1);
  RunConfig c;

  auto instance_flags = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "half the complex dimension")->check(CLI::Range(1, 64));
    sub->add_option("--b2", c.b2, "second Betti number")->check(CLI::Range(std::size_t{4}, std::size_t{64}));
    sub->add_option("--tail", c.tail, "diagonal entries after U ⊕ U (b2 - 4 rationals)");
    sub->add_option("--seed", c.seed, "random seed (default $HKLAB_SEED or 0)");
    sub->add_option("--frame-seed", c.frame_seed, "seed of the isotropic frame (0 = standard)");
    sub->add_option("--budget", c.budget, "isotropic sample budget")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output path (default stdout)");
  };
  auto format_flag = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App* build = app.add_subcommand("build", "build the Verbitsky component and write it as JSON");
  instance_flags(build);
  CLI::App* verify = app.add_subcommand("verify", "run every check and print a verdict report");
  instance_flags(verify);
  format_flag(verify);
  verify->add_option("--in", c.in, "algebra JSON written by build");
  verify->add_option("--module", c.module, "module JSON to analyse instead of SH");
  verify->add_option("--grid", c.grid, "run a grid of instances: default or small");
  verify->add_option("--threads", c.threads, "worker threads for --grid");
  CLI::App* diamond = app.add_subcommand("diamond", "print the (q, i) table of one degree");
  instance_flags(diamond);
  format_flag(diamond);
  diamond->add_option("--degree", c.degree, "cohomological degree");
  diamond->add_option("--in", c.in, "algebra JSON written by build");
  diamond->add_option("--module", c.module, "module JSON instead of SH");
  CLI::App* transport = app.add_subcommand("transport", "special isometry carrying one isotropic plane to another");
  instance_flags(transport);
  transport->add_option("--p1", c.p1, "first plane as 'v1;v2' with comma-separated rationals");
  transport->add_option("--p2", c.p2, "second plane, same format");
  CLI::App* exp = app.add_subcommand("export", "write SH as an LLV module document");
  instance_flags(exp);
  exp->add_option("--in", c.in, "algebra JSON written by build");
  CLI::App* val = app.add_subcommand("validate", "structural checks on an LLV module document");
  format_flag(val);
  val->add_option("--in", c.in, "module JSON")->required();
  val->add_option("--out", c.out, "output path (default stdout)");

  try {
    c.seed = default_seed();
    app.parse(argc, argv);
    if (!c.tail.empty() && c.tail.size() != c.b2 - 4)
      throw CLI::ValidationError("--tail", "expected b2 - 4 = " + std::to_string(c.b2 - 4) + " entries");
    if (*build) return cmd_build(c);
    if (*verify) return cmd_verify(c);
    if (*diamond) return cmd_diamond(c);
    if (*transport) return cmd_transport(c);
    if (*exp) return cmd_export(c);
    if (*val) return cmd_validate(c);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hklab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "hklab: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
