#include "hklab/quadratic_space.hpp"

#include <algorithm>
#include <numeric>

#include "hklab/random.hpp"

namespace hklab {

QuadraticSpace::QuadraticSpace(Matrix gram) : gram_(std::move(gram)) {
  if (!gram_.is_square()) throw std::invalid_argument("gram matrix must be square");
  if (!(gram_ == gram_.transpose())) throw std::invalid_argument("gram matrix must be symmetric");
  if (gram_.rows() == 0 || sgn(determinant(gram_)) == 0)
    throw std::invalid_argument("gram matrix must be nondegenerate");
}

Rational QuadraticSpace::bilinear(const Vector& v, const Vector& w) const {
  if (v.size() != dim() || w.size() != dim()) throw ShapeError("bilinear: dimension mismatch");
  return dot(v, gram_.apply(w));
}

Vector QuadraticSpace::pairing(const Vector& v) const { return gram_.apply(v); }

QuadraticSpace make_standard_space(std::size_t b2, const std::vector<Rational>& tail) {
  if (b2 < 4)
    throw std::invalid_argument("b2 must be at least 4: an isotropic plane requires b2 >= 4");
  if (tail.size() != b2 - 4)
    throw std::invalid_argument("tail must have b2 - 4 = " + std::to_string(b2 - 4) + " entries");
  Matrix g(b2, b2);
  g(0, 1) = g(1, 0) = 1;
  g(2, 3) = g(3, 2) = 1;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (sgn(tail[i]) == 0) throw std::invalid_argument("tail entries must be nonzero");
    g(4 + i, 4 + i) = tail[i];
  }
  return QuadraticSpace(std::move(g));
}

QuadraticSpace mukai_extension(const QuadraticSpace& space) {
  const std::size_t d = space.dim();
  Matrix g(d + 2, d + 2);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) g(i, j) = space.gram()(i, j);
  g(d, d + 1) = g(d + 1, d) = 1;
  return QuadraticSpace(std::move(g));
}

std::pair<std::size_t, std::size_t> signature(const QuadraticSpace& space) {
  Matrix a = space.gram();
  const std::size_t n = a.rows();
  auto swap_index = [&](std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
  };
  std::size_t pos = 0, neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t j = k + 1;
      while (j < n && sgn(a(j, j)) == 0) ++j;
      if (j < n) {
        swap_index(k, j);
      } else {
        j = k + 1;
        while (j < n && sgn(a(k, j)) == 0) ++j;
        if (j == n) continue;
        // x_k <- x_k + x_j makes the diagonal entry 2 a_kj
        for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
        for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
      }
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t c = 0; c < n; ++c) a(i, c) -= f * a(k, c);
      for (std::size_t r = 0; r < n; ++r) a(r, i) -= f * a(r, k);
    }
    if (sgn(a(k, k)) > 0) ++pos;
    if (sgn(a(k, k)) < 0) ++neg;
  }
  return {pos, neg};
}

Subspace orthogonal_complement(const QuadraticSpace& space, const Subspace& s) {
  if (s.ambient_dim() != space.dim()) throw ShapeError("orthogonal_complement: ambient mismatch");
  if (s.dim() == 0) return Subspace::full(space.dim());
  return kernel_basis(s.basis().transpose() * space.gram());
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& x) {
  if (sgn(x) < 0) return std::nullopt;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t()))
    return std::nullopt;
  return Rational(sqrt(x.get_num()), sqrt(x.get_den()));
}

// Isotropic coordinate vector c for the form g with g·c != 0.
std::optional<Vector> find_isotropic_coordinates(const Matrix& g) {
  const std::size_t n = g.rows();
  auto good = [&](const Vector& c) { return sgn(dot(c, g.apply(c))) == 0 && !is_zero(g.apply(c)); };
  for (std::size_t i = 0; i < n; ++i) {
    Vector c = unit_vector(n, i);
    if (good(c)) return c;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sgn(g(j, j)) == 0) continue;
      auto root = rational_sqrt(g(i, j) * g(i, j) - g(i, i) * g(j, j));
      if (!root) continue;
      for (int sign : {1, -1}) {
        Rational t = (-g(i, j) + sign * *root) / g(j, j);
        Vector c = unit_vector(n, i);
        c[j] = t;
        if (good(c)) return c;
      }
    }
  }
  if (n > 8) return std::nullopt;
  // Small exhaustive search over coordinates in [-2, 2].
  std::vector<long> digits(n, -2);
  while (true) {
    Vector c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = digits[k];
    if (!is_zero(c) && good(c)) return c;
    std::size_t k = 0;
    while (k < n && digits[k] == 2) digits[k++] = -2;
    if (k == n) break;
    ++digits[k];
  }
  return std::nullopt;
}

Vector primitive_integer(Vector v) {
  mpz_class l = 1;
  for (const auto& x : v) l = lcm(l, mpz_class(x.get_den()));
  mpz_class g = 0;
  for (auto& x : v) {
    x *= l;
    g = gcd(g, mpz_class(x.get_num()));
  }
  if (g != 0 && g != 1)
    for (auto& x : v) x /= g;
  return v;
}

}  // namespace

HyperbolicPair find_hyperbolic_pair(const QuadraticSpace& space, const Subspace& within) {
  const Matrix& b = within.basis();
  Matrix g = b.transpose() * space.gram() * b;
  auto c = find_isotropic_coordinates(g);
  if (!c) throw Error("no isotropic vector found: the space may not contain a hyperbolic plane");
  Vector e = b.apply(*c);
  for (std::size_t k = 0; k < within.dim(); ++k) {
    Vector w = within.basis_vector(k);
    Rational p = space.bilinear(e, w);
    if (sgn(p) == 0) continue;
    Vector f = (1 / p) * w - (space.norm(w) / (2 * p * p)) * e;
    return {std::move(e), std::move(f)};
  }
  throw Error("isotropic vector lies in the radical of the subspace");
}

HyperbolicPair find_hyperbolic_pair(const QuadraticSpace& space) {
  return find_hyperbolic_pair(space, Subspace::full(space.dim()));
}

IsotropicSampler::IsotropicSampler(const QuadraticSpace& space, std::uint64_t seed)
    : space_(&space), pair_(find_hyperbolic_pair(space)), state_(seed) {
  std::vector<Vector> ef{pair_.e, pair_.f};
  rest_ = orthogonal_complement(space, Subspace::span(ef, space.dim()));
}

Vector IsotropicSampler::next() {
  Rng rng(state_);
  state_ = rng.next();
  Vector z = zero_vector(space_->dim());
  for (std::size_t k = 0; k < rest_.dim(); ++k) {
    if (rng.uniform(0, 1) == 0) continue;
    z = z + Rational(rng.nonzero(-2, 2)) * rest_.basis_vector(k);
  }
  Rational lambda = rng.nonzero(-3, 3);
  Rational mu = -space_->norm(z) / (2 * lambda);
  return primitive_integer(z + lambda * pair_.e + mu * pair_.f);
}

std::vector<Vector> sample_isotropic(const QuadraticSpace& space, std::size_t count,
                                     std::uint64_t seed) {
  IsotropicSampler sampler(space, seed);
  std::vector<Vector> out;
  out.reserve(count);
  while (out.size() < count) out.push_back(sampler.next());
  return out;
}

bool is_isotropic_plane(const QuadraticSpace& space, const IsotropicPlane& p) {
  if (p.v1.size() != space.dim() || p.v2.size() != space.dim()) return false;
  if (sgn(space.norm(p.v1)) != 0 || sgn(space.norm(p.v2)) != 0 ||
      sgn(space.bilinear(p.v1, p.v2)) != 0)
    return false;
  return span_of(p).dim() == 2;
}

Subspace span_of(const IsotropicPlane& p) {
  std::vector<Vector> v{p.v1, p.v2};
  return Subspace::span(v, p.v1.size());
}

bool preserves_form(const QuadraticSpace& space, const Matrix& g) {
  if (!g.is_square() || g.rows() != space.dim()) return false;
  return g.transpose() * space.gram() * g == space.gram();
}

bool is_special_isometry(const QuadraticSpace& space, const Matrix& g) {
  return preserves_form(space, g) && determinant(g) == 1;
}

Matrix reflection(const QuadraticSpace& space, const Vector& r) {
  Rational qr = space.norm(r);
  if (sgn(qr) == 0) throw std::invalid_argument("reflection in an isotropic vector");
  Vector pr = space.pairing(r);
  const std::size_t n = space.dim();
  Matrix m = Matrix::identity(n);
  Rational c = 2 / qr;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) -= c * r[i] * pr[j];
  return m;
}

Matrix eichler_transformation(const QuadraticSpace& space, const Vector& u, const Vector& z) {
  if (sgn(space.norm(u)) != 0) throw std::invalid_argument("Eichler: u must be isotropic");
  if (sgn(space.bilinear(u, z)) != 0) throw std::invalid_argument("Eichler: z must be orthogonal to u");
  // x -> x + q(x,u) z - q(x,z) u - q(z)/2 q(x,u) u
  const std::size_t n = space.dim();
  Vector pu = space.pairing(u);
  Vector pz = space.pairing(z);
  Rational half_qz = space.norm(z) / 2;
  Matrix m = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) += z[i] * pu[j] - u[i] * pz[j] - half_qz * u[i] * pu[j];
  return m;
}

namespace {

// A vector w in `within` pairing nontrivially with every vector of `targets`.
Vector generic_vector(const QuadraticSpace& space, const Subspace& within,
                      const std::vector<Vector>& targets) {
  auto ok = [&](const Vector& w) {
    return std::all_of(targets.begin(), targets.end(),
                       [&](const Vector& t) { return sgn(space.bilinear(w, t)) != 0; });
  };
  const std::size_t d = within.dim();
  for (std::size_t i = 0; i < d; ++i)
    if (ok(within.basis_vector(i))) return within.basis_vector(i);
  for (long t = 1; t <= static_cast<long>(targets.size()) + 2; ++t)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j) continue;
        Vector w = within.basis_vector(i) + Rational(t) * within.basis_vector(j);
        if (ok(w)) return w;
      }
  throw Error("no generic vector found");
}

// Element of O(q) fixing `fixed` pointwise with g(from) = to, for isotropic
// from/to that are orthogonal to `fixed` (with q(from, f) = q(to, f) = 0).
Matrix map_isotropic(const QuadraticSpace& space, const Vector& from, const Vector& to,
                     const std::vector<Vector>& fixed) {
  const std::size_t n = space.dim();
  if (from == to) return Matrix::identity(n);
  if (sgn(space.bilinear(from, to)) != 0) return reflection(space, from - to);
  Subspace allowed = fixed.empty() ? Subspace::full(n)
                                   : orthogonal_complement(space, Subspace::span(fixed, n));
  Vector w = generic_vector(space, allowed, {from, to});
  // z = w + a·from is isotropic and pairs nontrivially with from and to.
  Rational a = -space.norm(w) / (2 * space.bilinear(w, from));
  Vector z = w + a * from;
  return reflection(space, z - to) * reflection(space, from - z);
}

}  // namespace

Isometry witt_transport(const QuadraticSpace& space, const IsotropicPlane& p1,
                        const IsotropicPlane& p2) {
  if (!is_isotropic_plane(space, p1)) throw std::invalid_argument("p1 is not an isotropic plane");
  if (!is_isotropic_plane(space, p2)) throw std::invalid_argument("p2 is not an isotropic plane");
  const std::size_t n = space.dim();
  Subspace s1 = span_of(p1);
  Subspace s2 = span_of(p2);
  if (s1 == s2) return {Matrix::identity(n)};

  Matrix g = map_isotropic(space, p1.v1, p2.v1, {});
  Vector u2 = g.apply(p1.v2);
  g = map_isotropic(space, u2, p2.v2, {p2.v1}) * g;

  if (determinant(g) != 1) {
    Subspace perp = orthogonal_complement(space, s2);
    std::optional<Vector> r;
    for (std::size_t i = 0; i < perp.dim() && !r; ++i)
      if (sgn(space.norm(perp.basis_vector(i))) != 0) r = perp.basis_vector(i);
    for (std::size_t i = 0; i < perp.dim() && !r; ++i)
      for (std::size_t j = i + 1; j < perp.dim() && !r; ++j) {
        Vector w = perp.basis_vector(i) + perp.basis_vector(j);
        if (sgn(space.norm(w)) != 0) r = w;
      }
    if (!r) {
      throw TransportObstruction(
          "no special isometry maps p1 onto p2: in dimension 4 the isotropic planes form two "
          "SO-orbits (two families of lines on the quadric) and these planes meet in a line");
    }
    g = reflection(space, *r) * g;
  }
  if (!is_special_isometry(space, g) || !(image_of(g, s1) == s2))
    throw Error("witt_transport: internal verification failed");
  return {std::move(g)};
}

Json to_json(const QuadraticSpace& space) {
  Json j;
  j["dim"] = space.dim();
  j["gram"] = matrix_to_json(space.gram());
  return j;
}

QuadraticSpace quadratic_space_from_json(const Json& j, const std::string& where) {
  long dim = require_int(j, "dim", where);
  if (dim <= 0) throw SchemaError(where + ".dim: must be positive");
  auto d = static_cast<std::size_t>(dim);
  Matrix g = matrix_from_json(require_member(j, "gram", where), d, d, where + ".gram");
  try {
    return QuadraticSpace(std::move(g));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

}  // namespace hklab
