#include "hklab/verbitsky_algebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace hklab {

BudgetExhausted::BudgetExhausted(std::size_t achieved, std::size_t target, std::size_t samples)
    : Error("sample budget exhausted after " + std::to_string(samples) +
            " samples: quotient dimension " + std::to_string(achieved) + ", target " +
            std::to_string(target)),
      achieved_dim(achieved),
      target_dim(target) {}

namespace {

// a > b in graded reverse-lexicographic order, for equal total degree.
bool grevlex_greater(const Exponents& a, const Exponents& b) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

void enumerate(std::size_t var, int left, Exponents& cur, std::vector<Exponents>& out) {
  if (var + 1 == cur.size()) {
    cur[var] = left;
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[var] = e;
    enumerate(var + 1, left - e, cur, out);
  }
  cur[var] = 0;
}

Exponents add(const Exponents& a, const Exponents& b) {
  Exponents c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SymmetricAlgebra::SymmetricAlgebra(std::size_t vars, std::size_t max_degree) : vars_(vars) {
  if (vars == 0) throw std::invalid_argument("symmetric algebra needs at least one variable");
  monomials_.resize(max_degree + 1);
  index_.resize(max_degree + 1);
  for (std::size_t k = 0; k <= max_degree; ++k) {
    Exponents cur(vars, 0);
    enumerate(0, static_cast<int>(k), cur, monomials_[k]);
    std::sort(monomials_[k].begin(), monomials_[k].end(), grevlex_greater);
    for (std::size_t i = 0; i < monomials_[k].size(); ++i) index_[k].emplace(monomials_[k][i], i);
  }
}

std::size_t SymmetricAlgebra::index(const Exponents& e) const {
  int k = 0;
  for (int x : e) k += x;
  const auto& idx = index_.at(static_cast<std::size_t>(k));
  auto it = idx.find(e);
  if (it == idx.end()) throw std::invalid_argument("not a monomial of this algebra");
  return it->second;
}

Vector SymmetricAlgebra::multiply(std::size_t ka, const Vector& a, std::size_t kb,
                                  const Vector& b) const {
  if (a.size() != dim(ka) || b.size() != dim(kb)) throw ShapeError("polynomial length mismatch");
  Vector c = zero_vector(dim(ka + kb));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (sgn(b[j]) == 0) continue;
      c[index(add(monomials_[ka][i], monomials_[kb][j]))] += a[i] * b[j];
    }
  }
  return c;
}

Vector SymmetricAlgebra::power(const Vector& v, std::size_t k) const {
  Vector r{Rational(1)};
  for (std::size_t i = 0; i < k; ++i) r = multiply(i, r, 1, v);
  return r;
}

std::string monomial_label(const Exponents& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += "x" + std::to_string(i);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

std::size_t verbitsky_target_dim(std::size_t b2, int n, int k) {
  if (k < 0 || k > 2 * n) return 0;
  auto j = static_cast<std::size_t>(std::min(k, 2 * n - k));
  return binomial(b2 - 1 + j, j);
}

GradedAlgebra::GradedAlgebra(QuadraticSpace space, int n,
                             std::vector<std::vector<std::size_t>> basis,
                             std::vector<Matrix> projections)
    : space_(std::move(space)),
      n_(n),
      sym_(space_.dim(), static_cast<std::size_t>(2 * n)),
      basis_(std::move(basis)),
      projections_(std::move(projections)) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const auto slots = static_cast<std::size_t>(2 * n + 1);
  if (basis_.size() != slots || projections_.size() != slots)
    throw ShapeError("algebra needs a basis and projection for every even degree");
  for (std::size_t k = 0; k < slots; ++k) {
    const Matrix& p = projections_[k];
    if (p.rows() != basis_[k].size() || p.cols() != sym_.dim(k))
      throw ShapeError("projection shape mismatch in degree " + std::to_string(2 * k));
    for (std::size_t i = 0; i < basis_[k].size(); ++i) {
      if (basis_[k][i] >= sym_.dim(k)) throw ShapeError("basis index out of range");
      if (!(p.col(basis_[k][i]) == unit_vector(p.rows(), i)))
        throw ShapeError("projection is not a section on the basis monomials in degree " +
                         std::to_string(2 * k));
    }
  }
  build_tables();
}

std::size_t GradedAlgebra::slot(int degree) const {
  if (degree < 0 || degree > 4 * n_ || degree % 2 != 0)
    throw std::invalid_argument("no degree " + std::to_string(degree) + " in the algebra");
  return static_cast<std::size_t>(degree / 2);
}

std::vector<int> GradedAlgebra::degrees() const {
  std::vector<int> out;
  for (int d = 0; d <= 4 * n_; d += 2) out.push_back(d);
  return out;
}

std::size_t GradedAlgebra::dim(int degree) const { return basis_[slot(degree)].size(); }

GradedDims GradedAlgebra::dims() const {
  GradedDims out;
  for (int d : degrees()) out[d] = dim(d);
  return out;
}

const std::vector<std::size_t>& GradedAlgebra::basis_indices(int degree) const {
  return basis_[slot(degree)];
}

const Exponents& GradedAlgebra::basis_monomial(int degree, std::size_t i) const {
  std::size_t k = slot(degree);
  return sym_.monomials(k).at(basis_[k].at(i));
}

std::string GradedAlgebra::basis_label(int degree, std::size_t i) const {
  return monomial_label(basis_monomial(degree, i));
}

const Matrix& GradedAlgebra::projection(int degree) const { return projections_[slot(degree)]; }

void GradedAlgebra::build_tables() {
  for (int da : degrees()) {
    for (int db = da; da + db <= 4 * n_; db += 2) {
      const std::size_t ka = slot(da), kb = slot(db);
      const Matrix& target = projections_[ka + kb];
      Matrix t(target.rows(), dim(da) * dim(db));
      for (std::size_t i = 0; i < dim(da); ++i)
        for (std::size_t j = 0; j < dim(db); ++j) {
          std::size_t m = sym_.index(add(basis_monomial(da, i), basis_monomial(db, j)));
          for (std::size_t r = 0; r < target.rows(); ++r) t(r, i * dim(db) + j) = target(r, m);
        }
      tables_.emplace(std::make_pair(da, db), std::move(t));
    }
  }
}

const Matrix& GradedAlgebra::product_table(int da, int db) const {
  auto it = tables_.find({da, db});
  if (it == tables_.end())
    throw std::invalid_argument("no product table for degrees " + std::to_string(da) + ", " +
                                std::to_string(db));
  return it->second;
}

AlgebraElement GradedAlgebra::zero(int degree) const { return {degree, zero_vector(dim(degree))}; }

AlgebraElement GradedAlgebra::unit() const { return {0, Vector{Rational(1)}}; }

AlgebraElement GradedAlgebra::from_h2(const Vector& x) const {
  if (x.size() != b2()) throw ShapeError("degree-2 vector has the wrong length");
  return from_polynomial(2, x);
}

AlgebraElement GradedAlgebra::from_polynomial(int degree, const Vector& sym_coords) const {
  return {degree, projection(degree).apply(sym_coords)};
}

AlgebraElement GradedAlgebra::multiply(const AlgebraElement& a, const AlgebraElement& b) const {
  if (a.degree + b.degree > 4 * n_)
    throw std::invalid_argument("product degree " + std::to_string(a.degree + b.degree) +
                                " exceeds " + std::to_string(4 * n_));
  if (a.coords.size() != dim(a.degree) || b.coords.size() != dim(b.degree))
    throw ShapeError("element length does not match its degree");
  const AlgebraElement& lo = a.degree <= b.degree ? a : b;
  const AlgebraElement& hi = a.degree <= b.degree ? b : a;
  const Matrix& t = product_table(lo.degree, hi.degree);
  const std::size_t nh = hi.coords.size();
  AlgebraElement c = zero(a.degree + b.degree);
  for (std::size_t i = 0; i < lo.coords.size(); ++i) {
    if (sgn(lo.coords[i]) == 0) continue;
    for (std::size_t j = 0; j < nh; ++j) {
      if (sgn(hi.coords[j]) == 0) continue;
      Rational s = lo.coords[i] * hi.coords[j];
      for (std::size_t r = 0; r < t.rows(); ++r)
        if (sgn(t(r, i * nh + j)) != 0) c.coords[r] += s * t(r, i * nh + j);
    }
  }
  return c;
}

AlgebraElement GradedAlgebra::power(const Vector& x, int k) const {
  if (k < 0 || k > 2 * n_) throw std::invalid_argument("power exceeds the top degree");
  if (x.size() != b2()) throw ShapeError("degree-2 vector has the wrong length");
  return from_polynomial(2 * k, sym_.power(x, static_cast<std::size_t>(k)));
}

Rational GradedAlgebra::top_functional(const AlgebraElement& a) const {
  if (a.degree != 4 * n_) throw std::invalid_argument("top functional needs a top-degree element");
  return a.coords.at(0);
}

Matrix GradedAlgebra::multiplication_block(const Vector& x, int degree) const {
  if (x.size() != b2()) throw ShapeError("degree-2 vector has the wrong length");
  const std::size_t k = slot(degree);
  if (degree + 2 > 4 * n_) return Matrix(0, dim(degree));
  const Matrix& target = projections_[k + 1];
  Matrix out(target.rows(), dim(degree));
  for (std::size_t i = 0; i < dim(degree); ++i) {
    const Exponents& m = basis_monomial(degree, i);
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (sgn(x[v]) == 0) continue;
      Exponents e = m;
      ++e[v];
      std::size_t col = sym_.index(e);
      for (std::size_t r = 0; r < target.rows(); ++r) out(r, i) += x[v] * target(r, col);
    }
  }
  return out;
}

namespace {

// Chooses basis monomials among the columns of `images` (quotient
// coordinates of every monomial), preferring monomials late in the order, and
// returns the indices together with the projection normalized to them.
std::pair<std::vector<std::size_t>, Matrix> normalize_projection(const Matrix& images) {
  const std::size_t cols = images.cols();
  std::vector<std::size_t> reversed(cols);
  for (std::size_t c = 0; c < cols; ++c) reversed[c] = cols - 1 - c;
  RrefResult r = rref(images.columns(reversed));
  std::vector<std::size_t> chosen;
  for (std::size_t p : r.pivot_cols) chosen.push_back(cols - 1 - p);
  std::sort(chosen.begin(), chosen.end());
  auto inv = inverse(images.columns(chosen));
  if (!inv) throw Error("quotient images do not span the quotient");
  return {chosen, *inv * images};
}

}  // namespace

GradedAlgebra build_verbitsky(const QuadraticSpace& space, int n, std::size_t sample_budget,
                              std::uint64_t seed, BuildStats* stats) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (sample_budget < 1) throw std::invalid_argument("sample budget must be at least 1");
  const std::size_t b2 = space.dim();
  const SymmetricAlgebra sym(b2, static_cast<std::size_t>(2 * n));
  const auto top = static_cast<std::size_t>(2 * n);

  std::vector<std::vector<std::size_t>> basis(top + 1);
  std::vector<Matrix> proj(top + 1);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) {
    basis[k].resize(sym.dim(k));
    for (std::size_t i = 0; i < sym.dim(k); ++i) basis[k][i] = i;
    proj[k] = Matrix::identity(sym.dim(k));
  }

  // Degree n+1: the ideal is spanned by isotropic (n+1)-st powers.
  const auto kn = static_cast<std::size_t>(n + 1);
  const std::size_t want = verbitsky_target_dim(b2, n, n + 1);
  const std::size_t target_rank = sym.dim(kn) - want;
  constexpr std::size_t kConfirm = 8;
  IncrementalRref ideal(sym.dim(kn));
  IsotropicSampler sampler(space, seed);
  std::size_t drawn = 0, stable = 0;
  while (stable < kConfirm || ideal.rank() < target_rank) {
    if (drawn == sample_budget)
      throw BudgetExhausted(sym.dim(kn) - ideal.rank(), want, drawn);
    ++drawn;
    bool grew = ideal.add(sym.power(sampler.next(), kn));
    if (ideal.rank() > target_rank)
      throw Error("ideal in degree " + std::to_string(2 * kn) + " exceeds the expected rank " +
                  std::to_string(target_rank));
    stable = grew ? 0 : stable + 1;
    if (ideal.rank() < target_rank) stable = 0;
  }
  if (stats) {
    stats->samples_drawn = drawn;
    stats->ideal_rank = ideal.rank();
  }
  {
    auto [chosen, p] = normalize_projection(ideal.cokernel_map());
    basis[kn] = std::move(chosen);
    proj[kn] = std::move(p);
  }

  // Higher degrees: SH^{2k} = (SH^{2k-2} ⊗ V) / Koszul relations, valid since
  // the ideal is generated in degree n+1.
  for (std::size_t k = kn + 1; k <= top; ++k) {
    const Matrix& prev = proj[k - 1];
    const std::size_t dp = prev.rows();
    IncrementalRref rel(dp * b2);
    for (std::size_t bi : basis[k - 2]) {
      const Exponents& m = sym.monomials(k - 2)[bi];
      for (std::size_t i = 0; i < b2; ++i)
        for (std::size_t j = i + 1; j < b2; ++j) {
          Exponents mi = m, mj = m;
          ++mi[i];
          ++mj[j];
          Vector ci = prev.col(sym.index(mi)), cj = prev.col(sym.index(mj));
          Vector row = zero_vector(dp * b2);
          for (std::size_t r = 0; r < dp; ++r) {
            row[r * b2 + j] += ci[r];
            row[r * b2 + i] -= cj[r];
          }
          rel.add(std::move(row));
        }
    }
    const std::size_t expect = verbitsky_target_dim(b2, n, static_cast<int>(k));
    if (dp * b2 - rel.rank() != expect)
      throw Error("quotient in degree " + std::to_string(2 * k) + " has dimension " +
                  std::to_string(dp * b2 - rel.rank()) + ", expected " + std::to_string(expect));
    const Matrix q = rel.cokernel_map();
    Matrix images(q.rows(), sym.dim(k));
    for (std::size_t c = 0; c < sym.dim(k); ++c) {
      Exponents m = sym.monomials(k)[c];
      std::size_t last = b2;
      while (m[--last] == 0) {
      }
      --m[last];
      Vector pc = prev.col(sym.index(m));
      for (std::size_t r = 0; r < dp; ++r) {
        if (sgn(pc[r]) == 0) continue;
        for (std::size_t s = 0; s < q.rows(); ++s) images(s, c) += pc[r] * q(s, r * b2 + last);
      }
    }
    auto [chosen, p] = normalize_projection(images);
    basis[k] = std::move(chosen);
    proj[k] = std::move(p);
  }

  return GradedAlgebra(space, n, std::move(basis), std::move(proj));
}

namespace {

Json sparse_matrix(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) out.push_back({i, j, rational_to_json(m(i, j))});
  return out;
}

Matrix sparse_matrix_from_json(const Json& j, std::size_t rows, std::size_t cols,
                               const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of [row, col, value]");
  Matrix m(rows, cols);
  for (std::size_t e = 0; e < j.size(); ++e) {
    const Json& t = j[e];
    std::string w = where + "[" + std::to_string(e) + "]";
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_unsigned() || !t[1].is_number_unsigned())
      throw SchemaError(w + ": expected [row, col, value]");
    auto r = t[0].get<std::size_t>(), c = t[1].get<std::size_t>();
    if (r >= rows || c >= cols) throw SchemaError(w + ": index out of range");
    m(r, c) = rational_from_json(t[2], w);
  }
  return m;
}

}  // namespace

Json to_json(const GradedAlgebra& alg) {
  Json j;
  j["n"] = alg.n();
  j["space"] = to_json(alg.space());
  Json degrees = Json::array();
  for (int d : alg.degrees()) {
    Json basis = Json::array(), labels = Json::array();
    for (std::size_t i = 0; i < alg.dim(d); ++i) {
      basis.push_back(alg.basis_monomial(d, i));
      labels.push_back(alg.basis_label(d, i));
    }
    degrees.push_back({{"degree", d},
                       {"dim", alg.dim(d)},
                       {"basis", basis},
                       {"labels", labels},
                       {"projection", sparse_matrix(alg.projection(d))}});
  }
  j["degrees"] = degrees;
  Json products = Json::array();
  for (int da : alg.degrees())
    for (int db = da; da + db <= 4 * alg.n(); db += 2) {
      const Matrix& t = alg.product_table(da, db);
      const std::size_t nb = alg.dim(db);
      Json entries = Json::array();
      for (std::size_t r = 0; r < t.rows(); ++r)
        for (std::size_t c = 0; c < t.cols(); ++c)
          if (sgn(t(r, c)) != 0) entries.push_back({c / nb, c % nb, r, rational_to_json(t(r, c))});
      products.push_back({{"left", da}, {"right", db}, {"entries", entries}});
    }
  j["products"] = products;
  return j;
}

GradedAlgebra graded_algebra_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("algebra: expected an object");
  long n = require_int(j, "n", "algebra");
  if (n < 1) throw SchemaError("algebra.n: must be at least 1");
  QuadraticSpace space = quadratic_space_from_json(require_member(j, "space", "algebra"));
  SymmetricAlgebra sym(space.dim(), static_cast<std::size_t>(2 * n));
  const Json& degrees = require_member(j, "degrees", "algebra");
  if (!degrees.is_array() || degrees.size() != static_cast<std::size_t>(2 * n + 1))
    throw SchemaError("algebra.degrees: expected one entry per even degree 0.." +
                      std::to_string(4 * n));
  std::vector<std::vector<std::size_t>> basis(degrees.size());
  std::vector<Matrix> proj(degrees.size());
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    std::string w = "algebra.degrees[" + std::to_string(k) + "]";
    const Json& e = degrees[k];
    if (require_int(e, "degree", w) != static_cast<long>(2 * k))
      throw SchemaError(w + ".degree: expected " + std::to_string(2 * k));
    long dim = require_int(e, "dim", w);
    const Json& b = require_member(e, "basis", w);
    if (dim < 0 || !b.is_array() || b.size() != static_cast<std::size_t>(dim))
      throw SchemaError(w + ".basis: expected " + std::to_string(dim) + " monomials");
    for (std::size_t i = 0; i < b.size(); ++i) {
      Exponents ex;
      try {
        ex = b[i].get<Exponents>();
      } catch (const nlohmann::json::exception&) {
        throw SchemaError(w + ".basis[" + std::to_string(i) + "]: expected exponent list");
      }
      int total = 0;
      for (int x : ex) total += x;
      if (ex.size() != space.dim() || total != static_cast<int>(k) ||
          std::any_of(ex.begin(), ex.end(), [](int x) { return x < 0; }))
        throw SchemaError(w + ".basis[" + std::to_string(i) + "]: not a monomial of degree " +
                          std::to_string(2 * k));
      basis[k].push_back(sym.index(ex));
    }
    proj[k] = sparse_matrix_from_json(require_member(e, "projection", w),
                                      static_cast<std::size_t>(dim), sym.dim(k),
                                      w + ".projection");
  }
  GradedAlgebra alg = [&] {
    try {
      return GradedAlgebra(space, static_cast<int>(n), std::move(basis), std::move(proj));
    } catch (const ShapeError& e) {
      throw SchemaError(std::string("algebra: ") + e.what());
    }
  }();
  const Json& products = require_member(j, "products", "algebra");
  if (!products.is_array()) throw SchemaError("algebra.products: expected an array");
  Json expected = to_json(alg)["products"];
  if (products != expected)
    throw SchemaError("algebra.products: structure constants disagree with the projections");
  return alg;
}

}  // namespace hklab
