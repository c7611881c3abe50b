#include "hklab/module_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hklab {

namespace {

GradedDims dims_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("degrees: expected an array");
  GradedDims dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string w = "degrees[" + std::to_string(i) + "]";
    long d = require_int(j[i], "degree", w);
    long k = require_int(j[i], "dim", w);
    if (k < 0) throw SchemaError(w + ".dim: negative");
    if (!dims.emplace(static_cast<int>(d), static_cast<std::size_t>(k)).second)
      throw SchemaError(w + ".degree: repeated");
  }
  return dims;
}

Json dims_to_json(const GradedDims& dims) {
  Json out = Json::array();
  for (const auto& [d, k] : dims) out.push_back({{"degree", d}, {"dim", k}});
  return out;
}

std::string op_mismatch(const GradedOperator& a, const GradedOperator& b) {
  for (const auto& [d, k] : a.dims())
    if (!(a.block(d) == b.block(d))) return "degree " + std::to_string(d);
  return "";
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
          out(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
    }
  return out;
}

std::string format_vector(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_rational(v[i]);
  return out + ")";
}

bool rational_sqrt(const Rational& a, Rational& root) {
  if (sgn(a) <= 0) return false;
  mpz_class p = sqrt(mpz_class(a.get_num()));
  mpz_class q = sqrt(mpz_class(a.get_den()));
  if (p * p != a.get_num() || q * q != a.get_den()) return false;
  root = Rational(p, q);
  root.canonicalize();
  return true;
}

}  // namespace

LLVModuleSpec load_module(const Json& j) {
  if (!j.is_object()) throw SchemaError("module: expected an object");
  const Json& schema = require_member(j, "schema", "module");
  if (!schema.is_string() || schema.get<std::string>() != kModuleSchema)
    throw SchemaError(std::string("schema: expected \"") + kModuleSchema + "\"");
  long n = require_int(j, "n", "module");
  if (n < 1) throw SchemaError("n: must be at least 1");
  auto space = [&] {
    try {
      return quadratic_space_from_json(require_member(j, "space", "module"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("space: ") + e.what());
    }
  }();
  GradedDims dims = dims_from_json(require_member(j, "degrees", "module"));
  LLVModuleSpec spec{LLVModule{space, static_cast<int>(n), dims, {}, {}}, {}, std::nullopt, ""};
  LLVModule& m = spec.module;
  const Json& ls = require_member(j, "L_actions", "module");
  if (!ls.is_array() || ls.size() != m.space.dim())
    throw SchemaError("L_actions: expected one operator per basis vector of H²");
  for (std::size_t i = 0; i < ls.size(); ++i)
    m.L.push_back(graded_operator_from_json(ls[i], m.dims, 2, "L_actions[" + std::to_string(i) + "]"));
  m.h = graded_operator_from_json(require_member(j, "h_action", "module"), m.dims, 0, "h_action");
  if (auto it = j.find("Lambda_actions"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("Lambda_actions: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string w = "Lambda_actions[" + std::to_string(i) + "]";
      Vector v = vector_from_json(require_member((*it)[i], "vector", w), w + ".vector");
      if (v.size() != m.space.dim()) throw SchemaError(w + ".vector: length differs from b2");
      spec.lambda_actions.push_back(
          {v, graded_operator_from_json(require_member((*it)[i], "action", w), m.dims, -2, w + ".action")});
    }
  }
  if (auto it = j.find("frame"); it != j.end()) spec.frame = hodge_frame_from_json(*it, m.space);
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) throw SchemaError("label: expected a string");
    spec.label = it->get<std::string>();
  }
  return spec;
}

LLVModuleSpec load_module_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return load_module(j);
}

Json to_json(const LLVModuleSpec& spec) {
  const LLVModule& m = spec.module;
  Json j;
  j["schema"] = kModuleSchema;
  j["n"] = m.n;
  j["space"] = to_json(m.space);
  j["degrees"] = dims_to_json(m.dims);
  j["L_actions"] = Json::array();
  for (const GradedOperator& op : m.L) j["L_actions"].push_back(to_json(op));
  j["h_action"] = to_json(m.h);
  if (!spec.lambda_actions.empty()) {
    j["Lambda_actions"] = Json::array();
    for (const LambdaAction& a : spec.lambda_actions)
      j["Lambda_actions"].push_back({{"vector", vector_to_json(a.vector)}, {"action", to_json(a.action)}});
  }
  if (spec.frame) j["frame"] = to_json(*spec.frame);
  if (!spec.label.empty()) j["label"] = spec.label;
  return j;
}

LLVModuleSpec module_spec(const GradedAlgebra& alg, const HodgeFrame& frame,
                          const std::string& label) {
  LLVModuleSpec spec{module_of(alg), {}, frame, label};
  for (const Vector& x : anisotropic_basis(alg.space(), 0))
    spec.lambda_actions.push_back({x, dual_lefschetz(spec.module, x)});
  return spec;
}

Json export_module(const GradedAlgebra& alg, const HodgeFrame& frame) {
  return to_json(module_spec(alg, frame,
                             "Verbitsky component n=" + std::to_string(alg.n()) +
                                 " b2=" + std::to_string(alg.b2())));
}

bool ValidationReport::passed() const { return first_failure() == nullptr; }

const ValidationCheck* ValidationReport::first_failure() const {
  for (const ValidationCheck& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

ValidationReport validate(const LLVModuleSpec& spec) {
  const LLVModule& m = spec.module;
  ValidationReport r;
  auto add = [&](std::string name, std::string witness) {
    r.checks.push_back({std::move(name), witness.empty(), std::move(witness)});
  };

  std::string w;
  GradedOperator expected_h = GradedOperator::grading(m.dims, m.n);
  if (std::string d = op_mismatch(m.h, expected_h); !d.empty())
    w = d + ": h is not (degree - 2n)·id";
  add("h eigenvalues", w);

  w.clear();
  for (std::size_t i = 0; i < m.L.size() && w.empty(); ++i)
    if (std::string d = op_mismatch(commutator(m.h, m.L[i]), 2 * m.L[i]); !d.empty())
      w = "[h, L_" + std::to_string(i) + "] differs from 2L_" + std::to_string(i) + " at " + d;
  add("[h, L] = 2L", w);

  w.clear();
  for (std::size_t i = 0; i < m.L.size() && w.empty(); ++i)
    for (std::size_t j = i + 1; j < m.L.size() && w.empty(); ++j)
      if (std::string d = op_mismatch(commutator(m.L[i], m.L[j]), GradedOperator(m.dims, 4)); !d.empty())
        w = "[L_" + std::to_string(i) + ", L_" + std::to_string(j) + "] is nonzero at " + d;
  add("[L_x, L_y] = 0", w);

  std::vector<GradedOperator> lams;
  std::vector<Vector> xs;
  w.clear();
  try {
    xs = anisotropic_basis(m.space, 0);
    for (const Vector& x : xs) {
      try {
        lams.push_back(dual_lefschetz(m, x));
      } catch (const Error& e) {
        w = "x = " + format_vector(x) + ": " + e.what();
        break;
      }
    }
  } catch (const Error& e) {
    w = e.what();
  }
  const bool have_lambda = w.empty();
  add("sl2 completion exists", w);

  w.clear();
  if (!have_lambda) {
    w = "no completion to compare";
  } else {
    try {
      LambdaExtension ext(m);
      if (!ext.well_defined()) w = ext.witness();
    } catch (const Error& e) {
      w = e.what();
    }
  }
  add("Λ linear in x", w);

  w.clear();
  if (!have_lambda) w = "no completion to compare";
  for (std::size_t i = 0; i < lams.size() && w.empty(); ++i)
    if (std::string d = op_mismatch(commutator(m.h, lams[i]), Rational(-2) * lams[i]); !d.empty())
      w = "x = " + format_vector(xs[i]) + ": [h, Λ] differs from -2Λ at " + d;
  add("[h, Λ] = -2Λ", w);

  w.clear();
  for (const LambdaAction& a : spec.lambda_actions) {
    try {
      GradedOperator lam = dual_lefschetz(m, a.vector);
      if (std::string d = op_mismatch(a.action, lam); !d.empty())
        w = "x = " + format_vector(a.vector) + ": supplied Λ differs at " + d;
    } catch (const Error& e) {
      w = "x = " + format_vector(a.vector) + ": " + e.what();
    }
    if (!w.empty()) break;
  }
  add("supplied Λ match", w);
  return r;
}

Json to_json(const ValidationReport& r) {
  Json checks = Json::array();
  for (const ValidationCheck& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  return {{"passed", r.passed()}, {"checks", checks}};
}

LLVModuleSpec ladder_module() {
  Matrix gram(1, 1);
  gram(0, 0) = 2;
  LLVModule m{QuadraticSpace(gram), 1, {{0, 1}, {2, 1}, {4, 1}}, {}, {}};
  GradedOperator L(m.dims, 2);
  L.set_block(0, Matrix::identity(1));
  L.set_block(2, Matrix::identity(1));
  m.L = {L};
  m.h = GradedOperator::grading(m.dims, m.n);
  return {m, {}, std::nullopt, "synthetic sl2 ladder (not geometric)"};
}

LLVModuleSpec spinor_module(const QuadraticSpace& space, int n) {
  const std::size_t b = space.dim();
  if (n < 1) throw std::invalid_argument("spinor module needs n >= 1");
  if (b != 4 && b != 5) throw std::invalid_argument("spinor module needs b2 = 4 or 5");
  Rational t = 1;
  Matrix gram = space.gram();
  Matrix expected = make_standard_space(4, {}).gram();
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      if (i < 4 && j < 4) {
        if (gram(i, j) != expected(i, j)) throw std::invalid_argument("space is not U ⊕ U ⊕ tail");
      } else if (i != j && sgn(gram(i, j)) != 0) {
        throw std::invalid_argument("space is not U ⊕ U ⊕ tail");
      }
    }
  if (b == 5 && !rational_sqrt(gram(4, 4), t))
    throw std::invalid_argument("tail entry must be a positive rational square");

  // Exterior algebra on ε1, ε2; basis indexed by bitmask.
  auto wedge = [](int i) {
    Matrix m(4, 4);
    for (int s = 0; s < 4; ++s) {
      if (s & (1 << i)) continue;
      int sign = (i == 1 && (s & 1)) ? -1 : 1;
      m(static_cast<std::size_t>(s | (1 << i)), static_cast<std::size_t>(s)) = sign;
    }
    return m;
  };
  auto contract = [](int i) {
    Matrix m(4, 4);
    for (int s = 0; s < 4; ++s) {
      if (!(s & (1 << i))) continue;
      int sign = (i == 1 && (s & 1)) ? -1 : 1;
      m(static_cast<std::size_t>(s & ~(1 << i)), static_cast<std::size_t>(s)) = sign;
    }
    return m;
  };
  Matrix parity(4, 4);
  for (int s = 0; s < 4; ++s)
    parity(static_cast<std::size_t>(s), static_cast<std::size_t>(s)) = __builtin_popcount(s) % 2 ? -1 : 1;
  std::vector<Matrix> c{Rational(2) * wedge(0), contract(0), Rational(2) * wedge(1), contract(1)};
  if (b == 5) c.push_back(t * parity);

  LLVModule m{space, n, {{2 * n - 1, 4}, {2 * n + 1, 4}}, {}, {}};
  for (const Matrix& ci : c) {
    GradedOperator L(m.dims, 2);
    L.set_block(2 * n - 1, ci);
    m.L.push_back(L);
  }
  m.h = GradedOperator::grading(m.dims, n);
  return {m, {}, std::nullopt, "synthetic spinor module (not geometric)"};
}

LLVModuleSpec tensor_modules(const LLVModuleSpec& a, const LLVModuleSpec& b) {
  const LLVModule& ma = a.module;
  const LLVModule& mb = b.module;
  if (!(ma.space == mb.space)) throw std::invalid_argument("tensor factors live over different spaces");
  // Within a degree, pieces H^da ⊗ H^db are stacked by increasing da.
  std::map<std::pair<int, int>, std::size_t> offset;
  GradedDims dims;
  for (const auto& [da, ka] : ma.dims)
    for (const auto& [db, kb] : mb.dims) {
      if (ka * kb == 0) continue;
      offset[{da, db}] = dims[da + db];
      dims[da + db] += ka * kb;
    }
  auto combine = [&](const GradedOperator& x, const GradedOperator& y, int off) {
    GradedOperator out(dims, off);
    for (const auto& [key, start] : offset) {
      const auto [da, db] = key;
      const int d = da + db;
      Matrix block = out.block(d);
      auto place = [&](const std::pair<int, int>& target, const Matrix& piece) {
        auto it = offset.find(target);
        if (it == offset.end() || piece.rows() == 0) return;
        for (std::size_t r = 0; r < piece.rows(); ++r)
          for (std::size_t cc = 0; cc < piece.cols(); ++cc)
            block(it->second + r, start + cc) += piece(r, cc);
      };
      Matrix ia = Matrix::identity(dim_at(ma.dims, da));
      Matrix ib = Matrix::identity(dim_at(mb.dims, db));
      place({da + off, db}, kron(x.block(da), ib));
      place({da, db + off}, kron(ia, y.block(db)));
      out.set_block(d, block);
    }
    return out;
  };
  LLVModule m{ma.space, ma.n + mb.n, dims, {}, {}};
  for (std::size_t i = 0; i < ma.L.size(); ++i) m.L.push_back(combine(ma.L[i], mb.L[i], 2));
  m.h = combine(ma.h, mb.h, 0);
  return {m, {}, a.frame ? a.frame : b.frame,
          "synthetic tensor product (not geometric): " + a.label + " ⊗ " + b.label};
}

LLVModuleSpec shifted_copy(const LLVModuleSpec& s) {
  const LLVModule& src = s.module;
  GradedDims dims;
  for (const auto& [d, k] : src.dims) dims[d] += k;
  for (const auto& [d, k] : src.dims) dims[d + 1] += k;
  auto split = [&](const GradedOperator& op) {
    GradedOperator out(dims, op.offset());
    for (const auto& [d, k] : dims) {
      Matrix block = out.block(d);
      const std::size_t lower = dim_at(src.dims, d);
      const std::size_t lower_target = dim_at(src.dims, d + op.offset());
      if (lower > 0 && lower_target > 0) {
        const Matrix& a = op.block(d);
        for (std::size_t r = 0; r < a.rows(); ++r)
          for (std::size_t c = 0; c < a.cols(); ++c) block(r, c) = a(r, c);
      }
      if (dim_at(src.dims, d - 1) > 0 && dim_at(src.dims, d - 1 + op.offset()) > 0) {
        const Matrix& a = op.block(d - 1);
        for (std::size_t r = 0; r < a.rows(); ++r)
          for (std::size_t c = 0; c < a.cols(); ++c) block(lower_target + r, lower + c) = a(r, c);
      }
      out.set_block(d, block);
    }
    return out;
  };
  LLVModule m{src.space, src.n, dims, {}, {}};
  for (const GradedOperator& L : src.L) m.L.push_back(split(L));
  m.h = split(src.h);
  return {m, {}, s.frame,
          "synthetic formal odd copy (not geometric): h keeps the unshifted eigenvalues"};
}

LLVModuleSpec zero_lefschetz_block(const LLVModuleSpec& s, std::size_t index, int degree) {
  LLVModuleSpec out = s;
  GradedOperator& L = out.module.L.at(index);
  const Matrix& old = L.block(degree);
  L.set_block(degree, Matrix(old.rows(), old.cols()));
  out.lambda_actions.clear();
  out.label = s.label + " with the block of L_" + std::to_string(index) + " from degree " +
              std::to_string(degree) + " zeroed";
  return out;
}

}  // namespace hklab
