#include "hklab/llv_operators.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include "hklab/random.hpp"

namespace hklab {

GradedOperator LLVModule::lefschetz(const Vector& x) const {
  if (x.size() != L.size()) throw ShapeError("degree-2 vector has the wrong length");
  GradedOperator out(dims, 2);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (sgn(x[i]) != 0) out += x[i] * L[i];
  return out;
}

GradedOperator lefschetz(const GradedAlgebra& alg, const Vector& x) {
  GradedOperator op(alg.dims(), 2);
  for (int d : alg.degrees())
    if (d + 2 <= 4 * alg.n()) op.set_block(d, alg.multiplication_block(x, d));
  return op;
}

GradedOperator grading(const GradedAlgebra& alg) {
  return GradedOperator::grading(alg.dims(), alg.n());
}

LLVModule module_of(const GradedAlgebra& alg) {
  LLVModule m{alg.space(), alg.n(), alg.dims(), {}, grading(alg)};
  for (std::size_t i = 0; i < alg.b2(); ++i) m.L.push_back(lefschetz(alg, unit_vector(alg.b2(), i)));
  return m;
}

bool hard_lefschetz(const LLVModule& m, const GradedOperator& L) {
  for (const auto& [d, k] : m.dims) {
    if (d >= 2 * m.n || k == 0) continue;
    if (dim_at(m.dims, 4 * m.n - d) != k) return false;
    if (rank(block_power(L, d, 2 * m.n - d)) != k) return false;
  }
  for (const auto& [d, k] : m.dims)
    if (d > 2 * m.n && k != 0 && dim_at(m.dims, 4 * m.n - d) != k) return false;
  return true;
}

GradedOperator dual_lefschetz(const LLVModule& m, const GradedOperator& L) {
  if (L.offset() != 2 || L.dims() != m.dims) throw ShapeError("not a Lefschetz operator of the module");
  if (!hard_lefschetz(m, L)) throw NotLefschetz("hard Lefschetz fails");
  GradedOperator lam(m.dims, -2);
  for (const auto& [d, dd] : m.dims) {
    const std::size_t dp = dim_at(m.dims, d - 2);
    if (dd == 0 || dp == 0) continue;
    Matrix rhs(dp, dp);
    if (dim_at(m.dims, d - 4) > 0) rhs = L.block(d - 4) * lam.block(d - 2);
    rhs -= Matrix::scalar(dp, Rational(d - 2 - 2 * m.n));
    Matrix a = L.block(d - 2);
    if (d <= 2 * m.n) {
      Subspace prim = kernel_basis(block_power(L, d, 2 * m.n - d + 1));
      if (prim.dim() > 0) {
        a = a.hstack(prim.basis());
        rhs = rhs.hstack(Matrix(dp, prim.dim()));
      }
    }
    if (rank(a) != dd) throw NotLefschetz("Λ is not determined in degree " + std::to_string(d));
    auto xt = solve(a.transpose(), rhs.transpose());
    if (!xt) throw NotLefschetz("no Λ in degree " + std::to_string(d));
    lam.set_block(d, xt->transpose());
  }
  if (!(commutator(L, lam) == m.h)) throw NotLefschetz("[L, Λ] differs from h");
  return lam;
}

GradedOperator dual_lefschetz(const LLVModule& m, const Vector& x) {
  if (sgn(m.space.norm(x)) == 0) throw NotLefschetz("isotropic classes are not Lefschetz");
  return dual_lefschetz(m, m.lefschetz(x));
}

GradedOperator dual_lefschetz(const GradedAlgebra& alg, const Vector& x) {
  return dual_lefschetz(module_of(alg), x);
}

std::vector<Vector> anisotropic_basis(const QuadraticSpace& space, int variant) {
  const std::size_t b = space.dim();
  if (b == 1) return {Vector{Rational(variant + 1)}};
  std::vector<Vector> chosen;
  IncrementalRref span(b);
  auto offer = [&](const Vector& v) {
    if (sgn(space.norm(v)) == 0) return;
    if (span.add(v)) chosen.push_back(v);
  };
  for (int t = variant; t <= variant + 6 && chosen.size() < b; ++t) {
    for (std::size_t i = 0; i < b && chosen.size() < b; ++i) {
      if (t == 0) {
        offer(unit_vector(b, i));
        continue;
      }
      for (std::size_t j = 0; j < b && chosen.size() < b; ++j) {
        if (j == i) continue;
        Vector v = unit_vector(b, i);
        v[j] += t;
        offer(v);
      }
    }
  }
  if (chosen.size() < b) throw Error("no anisotropic basis found");
  return chosen;
}

namespace {

std::vector<GradedOperator> extension_on_units(const LLVModule& m, int variant) {
  const std::size_t b = m.b2();
  std::vector<Vector> xs = anisotropic_basis(m.space, variant);
  std::vector<GradedOperator> scaled;
  for (const Vector& x : xs) scaled.push_back((m.space.norm(x) / 2) * dual_lefschetz(m, x));
  Matrix inv = *inverse(Matrix::from_columns(xs, b));
  std::vector<GradedOperator> out;
  for (std::size_t j = 0; j < b; ++j) {
    GradedOperator op(m.dims, -2);
    for (std::size_t i = 0; i < b; ++i)
      if (sgn(inv(i, j)) != 0) op += inv(i, j) * scaled[i];
    out.push_back(std::move(op));
  }
  return out;
}

}  // namespace

LambdaExtension::LambdaExtension(const LLVModule& m) : dims_(m.dims) {
  per_basis_ = extension_on_units(m, 0);
  std::vector<GradedOperator> second = extension_on_units(m, 1);
  for (std::size_t j = 0; j < per_basis_.size() && well_defined_; ++j) {
    if (per_basis_[j] == second[j]) continue;
    well_defined_ = false;
    witness_ = "Λ of basis vector " + std::to_string(j) + " depends on the anisotropic basis";
  }
}

GradedOperator LambdaExtension::operator()(const Vector& y) const {
  if (y.size() != per_basis_.size()) throw ShapeError("degree-2 vector has the wrong length");
  GradedOperator out(dims_, -2);
  for (std::size_t i = 0; i < y.size(); ++i)
    if (sgn(y[i]) != 0) out += y[i] * per_basis_[i];
  return out;
}

namespace {

Subspace frame_span(const HodgeFrame& f) {
  std::vector<Vector> v{f.s, f.sbar, f.beta, f.eta};
  return Subspace::span(v, f.s.size());
}

}  // namespace

bool is_valid_frame(const QuadraticSpace& space, const HodgeFrame& f) {
  const std::size_t b = space.dim();
  for (const Vector* v : {&f.s, &f.sbar, &f.beta, &f.eta})
    if (v->size() != b || sgn(space.norm(*v)) != 0) return false;
  if (space.bilinear(f.s, f.sbar) != 1 || space.bilinear(f.beta, f.eta) != 1) return false;
  for (const Vector* a : {&f.s, &f.sbar})
    for (const Vector* c : {&f.beta, &f.eta})
      if (sgn(space.bilinear(*a, *c)) != 0) return false;
  return f.u_complement == orthogonal_complement(space, frame_span(f));
}

HodgeFrame transform_frame(const QuadraticSpace& space, const HodgeFrame& f, const Matrix& g) {
  HodgeFrame out{g.apply(f.s), g.apply(f.sbar), g.apply(f.beta), g.apply(f.eta), Subspace()};
  out.u_complement = orthogonal_complement(space, frame_span(out));
  return out;
}

HodgeFrame build_frame(const QuadraticSpace& space, std::uint64_t seed) {
  const std::size_t b = space.dim();
  HyperbolicPair first = find_hyperbolic_pair(space);
  std::vector<Vector> ef{first.e, first.f};
  HyperbolicPair second =
      find_hyperbolic_pair(space, orthogonal_complement(space, Subspace::span(ef, b)));
  HodgeFrame f{first.e, first.f, second.e, second.f, Subspace()};
  f.u_complement = orthogonal_complement(space, frame_span(f));
  if (seed == 0) return f;

  Rng rng(seed);
  Vector u = sample_isotropic(space, 1, rng.next())[0];
  Vector a;
  for (std::size_t i = 0; i < b && a.empty(); ++i)
    if (sgn(space.bilinear(unit_vector(b, i), u)) != 0) a = unit_vector(b, i);
  Vector w = zero_vector(b);
  for (auto& c : w) c = rng.uniform(-1, 1);
  Vector z = w - (space.bilinear(w, u) / space.bilinear(a, u)) * a;
  Matrix g = eichler_transformation(space, u, z);
  if (!is_special_isometry(space, g)) throw Error("frame randomization left SO(q)");
  return transform_frame(space, f, g);
}

bool verify_sl2(const SL2Triple& t) {
  return commutator(t.e, t.f) == t.h && commutator(t.h, t.e) == Rational(2) * t.e &&
         commutator(t.h, t.f) == Rational(-2) * t.f;
}

std::vector<std::pair<std::string, SL2Triple>> FrameOperators::triples() const {
  return {{"L_s", {L_s, Lam_sbar, H_s}},
          {"L_sbar", {L_sbar, Lam_s, H_sbar}},
          {"L_beta", {L_beta, Lam_eta, H_beta}},
          {"L_eta", {L_eta, Lam_beta, H_eta}},
          {"M", {M, F, H_M}}};
}

FrameOperators frame_operators(const LLVModule& m, const LambdaExtension& lam,
                               const HodgeFrame& frame) {
  FrameOperators o;
  o.L_s = m.lefschetz(frame.s);
  o.L_sbar = m.lefschetz(frame.sbar);
  o.L_beta = m.lefschetz(frame.beta);
  o.L_eta = m.lefschetz(frame.eta);
  o.Lam_s = lam(frame.s);
  o.Lam_sbar = lam(frame.sbar);
  o.Lam_beta = lam(frame.beta);
  o.Lam_eta = lam(frame.eta);
  o.H_s = commutator(o.L_s, o.Lam_sbar);
  o.H_sbar = commutator(o.L_sbar, o.Lam_s);
  o.H_beta = commutator(o.L_beta, o.Lam_eta);
  o.H_eta = commutator(o.L_eta, o.Lam_beta);
  o.M = commutator(o.L_beta, o.Lam_sbar);
  o.F = commutator(o.Lam_s, o.L_eta);
  o.H_M = o.H_beta - o.H_s;
  o.E_M = Rational(2) * o.M;
  o.F_M = Rational(2) * o.F;
  return o;
}

std::optional<Rational> commutator_scalar(const GradedOperator& a, const GradedOperator& b,
                                          const GradedOperator& h) {
  GradedOperator c = commutator(a, b);
  for (const auto& [d, k] : h.dims()) {
    const Matrix& hb = h.block(d);
    for (std::size_t i = 0; i < hb.rows(); ++i)
      for (std::size_t j = 0; j < hb.cols(); ++j) {
        if (sgn(hb(i, j)) == 0) continue;
        Rational s = c.block(d)(i, j) / hb(i, j);
        if (c == s * h) return s;
        return std::nullopt;
      }
  }
  return std::nullopt;
}

GradedOperator build_M(const LLVModule& m, const LambdaExtension& lam, const HodgeFrame& frame) {
  return commutator(m.lefschetz(frame.beta), lam(frame.sbar));
}

namespace {

std::optional<AlgebraElement> apply_op(const GradedAlgebra& alg, const GradedOperator& op,
                                       const AlgebraElement& a) {
  int target = a.degree + op.offset();
  if (target < 0 || target > 4 * alg.n()) return std::nullopt;
  return AlgebraElement{target, op.apply(a.degree, a.coords)};
}

std::optional<AlgebraElement> times(const GradedAlgebra& alg,
                                    const std::optional<AlgebraElement>& a,
                                    const std::optional<AlgebraElement>& b) {
  if (!a || !b || a->degree + b->degree > 4 * alg.n()) return std::nullopt;
  return alg.multiply(*a, *b);
}

bool same(const std::optional<AlgebraElement>& a, const std::optional<AlgebraElement>& b) {
  auto zero = [](const std::optional<AlgebraElement>& x) { return !x || is_zero(x->coords); };
  if (zero(a) || zero(b)) return zero(a) && zero(b);
  return a->degree == b->degree && a->coords == b->coords;
}

}  // namespace

DerivationReport verify_derivation(const GradedAlgebra& alg, const GradedOperator& op,
                                   std::size_t trials, std::uint64_t seed) {
  if (op.dims() != alg.dims()) throw ShapeError("operator does not act on the algebra");
  DerivationReport report;
  report.trials = trials;
  report.seed = seed;
  Rng rng(seed);
  const int top = 4 * alg.n();
  auto random_element = [&](int degree) {
    AlgebraElement e = alg.zero(degree);
    for (auto& c : e.coords) c = rng.uniform(-3, 3);
    return e;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    int da = 2 * static_cast<int>(rng.uniform(0, top / 2));
    int db = 2 * static_cast<int>(rng.uniform(0, (top - da) / 2));
    AlgebraElement a = random_element(da), b = random_element(db);
    auto lhs = apply_op(alg, op, alg.multiply(a, b));
    auto r1 = times(alg, apply_op(alg, op, a), b);
    auto r2 = times(alg, a, apply_op(alg, op, b));
    std::optional<AlgebraElement> rhs;
    if (r1 && r2) {
      rhs = *r1;
      rhs->coords = r1->coords + r2->coords;
    } else {
      rhs = r1 ? r1 : r2;
    }
    if (same(lhs, rhs)) continue;
    ++report.failures;
    if (report.witnesses.size() < 5)
      report.witnesses.push_back("trial " + std::to_string(t) + ": a in degree " +
                                 std::to_string(da) + ", b in degree " + std::to_string(db) +
                                 ": op(ab) != op(a)b + a op(b)");
  }
  return report;
}

std::size_t Bigrading::dim(const PQI& key) const {
  auto it = components.find(key);
  return it == components.end() ? 0 : it->second.dim();
}

Subspace Bigrading::hodge_piece(int p, int q) const {
  Subspace out(dim_at(dims, p + q));
  for (const auto& [key, space] : components)
    if (key[0] == p && key[1] == q) out = subspace_sum(out, space);
  return out;
}

Bigrading bigrading(const LLVModule& m, const FrameOperators& ops) {
  Bigrading b;
  b.n = m.n;
  b.dims = m.dims;
  for (const auto& [d, k] : m.dims) {
    if (k == 0) continue;
    std::vector<Matrix> cartan{ops.H_s.block(d), ops.H_sbar.block(d), ops.H_beta.block(d)};
    for (auto& js : joint_eigendecomposition(cartan)) {
      int p = static_cast<int>(js.values[0]) + m.n;
      int q = static_cast<int>(js.values[1]) + m.n;
      int i = p + q - m.n - static_cast<int>(js.values[2]);
      if (p + q != d)
        throw Error("H_s + H_sbar differs from h in degree " + std::to_string(d));
      b.components.emplace(PQI{p, q, i}, std::move(js.space));
    }
  }
  return b;
}

std::vector<PQI> bigrading_asymmetries(const Bigrading& b) {
  std::set<PQI> bad;
  for (const auto& [key, space] : b.components) {
    const auto [p, q, i] = key;
    for (const PQI& image : {PQI{q, p, i}, PQI{i, p + q - i, p}, PQI{p + q - i, i, p}}) {
      if (b.dim(image) != space.dim()) {
        bad.insert(key);
        bad.insert(image);
      }
    }
  }
  return {bad.begin(), bad.end()};
}

Json to_json(const HodgeFrame& f) {
  return {{"s", vector_to_json(f.s)},
          {"sbar", vector_to_json(f.sbar)},
          {"beta", vector_to_json(f.beta)},
          {"eta", vector_to_json(f.eta)}};
}

HodgeFrame hodge_frame_from_json(const Json& j, const QuadraticSpace& space) {
  HodgeFrame f;
  f.s = vector_from_json(require_member(j, "s", "frame"), "frame.s");
  f.sbar = vector_from_json(require_member(j, "sbar", "frame"), "frame.sbar");
  f.beta = vector_from_json(require_member(j, "beta", "frame"), "frame.beta");
  f.eta = vector_from_json(require_member(j, "eta", "frame"), "frame.eta");
  for (const Vector* v : {&f.s, &f.sbar, &f.beta, &f.eta})
    if (v->size() != space.dim()) throw SchemaError("frame: vector length differs from b2");
  f.u_complement = orthogonal_complement(space, frame_span(f));
  if (!is_valid_frame(space, f)) throw SchemaError("frame: q-relations do not hold");
  return f;
}

Json to_json(const Bigrading& b) {
  Json comps = Json::array();
  for (const auto& [key, space] : b.components)
    comps.push_back({{"p", key[0]}, {"q", key[1]}, {"i", key[2]}, {"dim", space.dim()}});
  return {{"n", b.n}, {"components", comps}};
}

}  // namespace hklab
