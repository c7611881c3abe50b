#include "hklab/filtrations.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hklab {

Subspace WeightFiltration::at(int i) const {
  if (i < 0) return Subspace(ambient);
  if (i >= static_cast<int>(steps.size())) return Subspace::full(ambient);
  return steps[static_cast<std::size_t>(i)];
}

namespace {

// Columns of `target` completing a basis of `base` to one of base + target.
std::vector<Vector> complement(const Subspace& base, const Subspace& target) {
  std::vector<Vector> out;
  if (target.dim() == 0) return out;
  Matrix cols = base.dim() > 0 ? base.basis().hstack(target.basis()) : target.basis();
  for (std::size_t p : rref(cols).pivot_cols)
    if (p >= base.dim()) out.push_back(target.basis_vector(p - base.dim()));
  return out;
}

}  // namespace

WeightFiltration weight_filtration(const Matrix& nilp, int centre) {
  if (!nilp.is_square()) throw ShapeError("weight filtration of a non-square matrix");
  const std::size_t dim = nilp.rows();
  const auto s = static_cast<int>(nilpotence_index(nilp));
  if (s > centre)
    throw std::invalid_argument("nilpotence index " + std::to_string(s) + " exceeds centre " +
                                std::to_string(centre));
  // kernels[j] = ker N^j for j = 0..s+2
  std::vector<Subspace> kernels{Subspace(dim)};
  Matrix power = Matrix::identity(dim);
  for (int j = 1; j <= s + 2; ++j) {
    power = nilp * power;
    kernels.push_back(kernel_basis(power));
  }
  std::vector<std::pair<Vector, int>> chain;
  for (int j = s + 1; j >= 1; --j) {
    Subspace base = subspace_sum(kernels[j - 1], image_of(nilp, kernels[j + 1]));
    for (Vector v : complement(base, kernels[j])) {
      for (int t = 0; t < j; ++t) {
        chain.emplace_back(v, centre + (j - 1) - 2 * t);
        v = nilp.apply(v);
      }
    }
  }
  if (chain.size() != dim) throw Error("Jordan chains do not fill the space");
  WeightFiltration w{centre, dim, {}};
  for (int i = 0; i <= 2 * centre; ++i) {
    std::vector<Vector> vs;
    for (const auto& [v, wt] : chain)
      if (wt <= i) vs.push_back(v);
    w.steps.push_back(Subspace::span(vs, dim));
  }
  if (!verify_weight_filtration(nilp, w)) throw Error("constructed filtration fails its axioms");
  return w;
}

WeightFiltration weight_filtration(const GradedOperator& nilp, int centre) {
  return weight_filtration(nilp.total_matrix(), centre);
}

bool verify_weight_filtration(const Matrix& nilp, const WeightFiltration& w) {
  const int c = w.centre;
  if (!nilp.is_square() || nilp.rows() != w.ambient) return false;
  if (w.steps.size() != static_cast<std::size_t>(2 * c + 1)) return false;
  for (const Subspace& s : w.steps)
    if (s.ambient_dim() != w.ambient) return false;
  for (int i = 0; i <= 2 * c; ++i)
    if (!w.at(i).contains(w.at(i - 1))) return false;
  if (w.at(2 * c).dim() != w.ambient) return false;
  for (int i = 0; i <= 2 * c; ++i)
    if (!w.at(i - 2).contains(image_of(nilp, w.at(i)))) return false;
  Matrix power = Matrix::identity(w.ambient);
  for (int i = 1; i <= c; ++i) {
    power = nilp * power;
    if (w.gr_dim(c + i) != w.gr_dim(c - i)) return false;
    Subspace lower = w.at(c - i - 1);
    Subspace img = subspace_sum(image_of(power, w.at(c + i)), lower);
    if (!w.at(c - i).contains(img)) return false;
    if (img.dim() - lower.dim() != w.gr_dim(c + i)) return false;
  }
  return true;
}

Subspace slice_degree(const Subspace& s, const GradedDims& dims, int degree) {
  const std::size_t k = dim_at(dims, degree);
  const std::size_t off = total_offset(dims, degree);
  Matrix block(s.ambient_dim(), k);
  for (std::size_t i = 0; i < k; ++i) block(off + i, i) = 1;
  Subspace part = subspace_intersection(s, Subspace::span(block));
  Matrix local(k, part.dim());
  for (std::size_t c = 0; c < part.dim(); ++c)
    for (std::size_t i = 0; i < k; ++i) local(i, c) = part.basis()(off + i, c);
  return Subspace::span(local);
}

Subspace PerverseChain::at(int i) const {
  if (i < first) return Subspace(ambient);
  if (i >= first + static_cast<int>(steps.size())) return Subspace::full(ambient);
  return steps[static_cast<std::size_t>(i - first)];
}

PerverseChain perverse_filtration(const LLVModule& m, const GradedOperator& L_beta, int degree) {
  const int n = m.n;
  PerverseChain chain{degree, degree - 2 * n - 1, dim_at(m.dims, degree), {}};
  const int lowest = m.dims.empty() ? 0 : m.dims.begin()->first;
  for (int i = chain.first; i <= degree + 1; ++i) {
    Subspace p(chain.ambient);
    for (int j = 0; degree - 2 * j >= lowest; ++j) {
      const int src = degree - 2 * j;
      const int e = n - src + i + 1;
      if (e <= 0 || dim_at(m.dims, src) == 0) continue;
      Subspace ker = kernel_basis(block_power(L_beta, src, e));
      p = subspace_sum(p, image_of(block_power(L_beta, src, j), ker));
    }
    chain.steps.push_back(std::move(p));
  }
  return chain;
}

CheckResult crosscheck_perverse_weight(const LLVModule& m, const GradedOperator& L_beta) {
  CheckResult r;
  WeightFiltration w = weight_filtration(L_beta, m.n);
  for (const auto& [d, k] : m.dims) {
    if (k == 0) continue;
    PerverseChain p = perverse_filtration(m, L_beta, d);
    for (int i = -1; i <= 2 * m.n + 1; ++i) {
      if (slice_degree(w.at(i), m.dims, d) == p.at(d + i - 2 * m.n)) continue;
      r.fail("degree " + std::to_string(d) + ": W_" + std::to_string(i) + " differs from P_" +
             std::to_string(d + i - 2 * m.n));
    }
  }
  return r;
}

CheckResult conjugate_hodge_check(const LLVModule& m, const GradedOperator& L_sbar,
                                  const Bigrading& big) {
  CheckResult r;
  WeightFiltration w = weight_filtration(L_sbar, m.n);
  for (const auto& [d, k] : m.dims) {
    if (k == 0) continue;
    for (int i = -1; i <= 2 * m.n + 1; ++i) {
      Subspace expected(k);
      for (const auto& [key, space] : big.components)
        if (key[0] + key[1] == d && key[1] >= 2 * m.n - i) expected = subspace_sum(expected, space);
      if (slice_degree(w.at(i), m.dims, d) == expected) continue;
      r.fail("degree " + std::to_string(d) + ": W_" + std::to_string(i) +
             " differs from the sum over q >= " + std::to_string(2 * m.n - i));
    }
  }
  return r;
}

std::map<int, WeightFiltration> monodromy_filtrations(const GradedOperator& M, int n) {
  std::map<int, WeightFiltration> out;
  for (const auto& [d, k] : M.dims())
    if (k > 0) out.emplace(d, weight_filtration(M.block(d), n));
  return out;
}

GrComparison compare_gr_dims(const std::map<int, WeightFiltration>& m_filt, const Bigrading& big,
                             const LLVModule& m, const GradedOperator& L_beta) {
  GrComparison out;
  const int n = m.n;
  const int span = 4 * n + 2;
  for (const auto& [d, w] : m_filt)
    for (int j = -span; j <= span; ++j)
      if (std::size_t g = w.gr_dim(n + j); g > 0) out.monodromy[{d, j}] = g;
  std::set<std::pair<int, int>> pq;
  for (const auto& [key, space] : big.components) pq.insert({key[0], key[1]});
  std::map<int, PerverseChain> chains;
  for (const auto& [p, q] : pq) {
    const int d = p + q;
    if (!chains.count(d)) chains.emplace(d, perverse_filtration(m, L_beta, d));
    const PerverseChain& chain = chains.at(d);
    Subspace h = big.hodge_piece(p, q);
    for (int j = -span; j <= span; ++j) {
      std::size_t hi = subspace_intersection(chain.at(j + q), h).dim();
      std::size_t lo = subspace_intersection(chain.at(j + q - 1), h).dim();
      if (hi > lo) out.perverse[{d, j}] += hi - lo;
    }
  }
  out.agree = out.monodromy == out.perverse;
  return out;
}

Json to_json(const GradedDimTable& t) {
  Json out = Json::array();
  for (const auto& [key, dim] : t)
    out.push_back({{"degree", key.first}, {"index", key.second}, {"dim", dim}});
  return out;
}

std::string render_table(const GradedDimTable& t, const std::string& row_label,
                         const std::string& col_label) {
  std::set<int> rows, cols;
  for (const auto& [key, dim] : t) {
    rows.insert(key.first);
    cols.insert(key.second);
  }
  std::size_t width = std::max<std::size_t>(4, row_label.size() + col_label.size() + 1);
  std::ostringstream os;
  os << std::setw(static_cast<int>(width)) << (row_label + "\\" + col_label);
  for (int c : cols) os << std::setw(5) << c;
  os << "\n";
  for (int r : rows) {
    os << std::setw(static_cast<int>(width)) << r;
    for (int c : cols) {
      auto it = t.find({r, c});
      os << std::setw(5) << (it == t.end() ? std::string(".") : std::to_string(it->second));
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace hklab
