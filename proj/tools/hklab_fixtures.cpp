// Regenerates the committed module fixtures: hklab_fixtures <directory>.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "hklab/module_io.hpp"

using namespace hklab;

namespace {

void write(const std::filesystem::path& dir, const std::string& name, const LLVModuleSpec& spec) {
  std::ofstream f(dir / name, std::ios::binary);
  f << canonical_dump(to_json(spec));
  std::cout << name << "\n";
}

LLVModuleSpec sh(int n, const QuadraticSpace& space, const std::string& label) {
  GradedAlgebra alg = build_verbitsky(space, n, 20000, 1);
  return module_spec(alg, build_frame(space, 0), label);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hklab_fixtures <directory>\n";
    return 2;
  }
  std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);

  QuadraticSpace standard = make_standard_space(5, {Rational(2)});
  QuadraticSpace square_tail = make_standard_space(5, {Rational(1)});

  LLVModuleSpec sh2 = sh(2, standard, "Verbitsky component n=2 b2=5");
  write(dir, "sh_n2_b5.json", sh2);
  write(dir, "corrupted.json", zero_lefschetz_block(sh2, 0, 2));
  write(dir, "ladder3.json", ladder_module());

  LLVModuleSpec spinor = spinor_module(square_tail, 2);
  spinor.frame = build_frame(square_tail, 0);
  write(dir, "spinor_n2_b5.json", spinor);

  LLVModuleSpec sh1 = sh(1, square_tail, "Verbitsky component n=1 b2=5");
  write(dir, "spinor_tensor.json", tensor_modules(spinor_module(square_tail, 1), sh1));
  write(dir, "shifted_copy.json", shifted_copy(sh(1, standard, "Verbitsky component n=1 b2=5")));
  return 0;
}
