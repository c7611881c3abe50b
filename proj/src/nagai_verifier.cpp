#include "hklab/nagai_verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

namespace hklab {

namespace {

constexpr const char* kNote =
    "M = [L_beta, Lambda(sbar)] represents the conjugacy class of type II logarithmic "
    "monodromy; no degeneration is computed";

std::string str(std::size_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }

std::string profile_string(const NilpotenceProfile& p) {
  std::string out;
  for (const auto& [d, k] : p) out += (out.empty() ? "" : " ") + str(d) + ":" + str(k);
  return out;
}

std::size_t nilp_at(const NilpotenceProfile& p, int d) {
  auto it = p.find(d);
  return it == p.end() ? 0 : it->second;
}

std::string pqi_string(const PQI& k) {
  return "(" + str(k[0]) + "," + str(k[1]) + "," + str(k[2]) + ")";
}

std::string sl2_failure(const SL2Triple& t) {
  if (!(commutator(t.e, t.f) == t.h)) return "[e, f] differs from h";
  if (!(commutator(t.h, t.e) == Rational(2) * t.e)) return "[h, e] differs from 2e";
  if (!(commutator(t.h, t.f) == Rational(-2) * t.f)) return "[h, f] differs from -2f";
  return "";
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  return a.transpose().hstack(b.transpose()).transpose();
}

template <class F>
Verdict guarded(const std::string& claim, const std::string& expected, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return make_verdict(claim, expected, std::string("error: ") + e.what(), false);
  }
}

}  // namespace

Verdict make_verdict(std::string claim, std::string expected, std::string observed, bool passed,
                     bool asserted, std::vector<std::string> witnesses) {
  if (!passed && witnesses.empty()) witnesses.push_back(observed);
  return {std::move(claim), std::move(expected), std::move(observed), passed, asserted,
          std::move(witnesses)};
}

Json to_json(const Verdict& v) {
  return {{"claim", v.claim},       {"expected", v.expected}, {"observed", v.observed},
          {"passed", v.passed},     {"asserted", v.asserted}, {"witnesses", v.witnesses}};
}

NilpotenceProfile nilpotence_profile(const GradedOperator& M) {
  if (M.offset() != 0) throw ShapeError("nilpotence profile of an operator of nonzero degree");
  NilpotenceProfile p;
  for (const auto& [d, k] : M.dims()) p[d] = nilpotence_index(M.block(d));
  return p;
}

std::vector<Verdict> check_even_nagai(const NilpotenceProfile& profile, int n, bool asserted) {
  std::vector<Verdict> out;
  const std::string obs = profile_string(profile);
  std::vector<std::string> w;
  for (int k = 0; k <= n; ++k)
    if (profile.count(2 * k) && nilp_at(profile, 2 * k) != static_cast<std::size_t>(k))
      w.push_back("degree " + str(2 * k) + ": nilp " + str(nilp_at(profile, 2 * k)) + ", expected " + str(k));
  out.push_back(make_verdict("nagai.even.nilp_2k_is_k", "nilp(M_2k) = k for 0 <= k <= n", obs,
                             w.empty(), asserted, w));

  const std::size_t top = nilp_at(profile, 2 * n);
  out.push_back(make_verdict("nagai.even.nilp_2n_is_n", "nilp(M_2n) = " + str(n),
                             "nilp(M_" + str(2 * n) + ") = " + str(top),
                             !profile.count(2 * n) || top == static_cast<std::size_t>(n), asserted));

  w.clear();
  for (int k = 0; k < n; ++k)
    if (nilp_at(profile, 2 * k) > static_cast<std::size_t>(n - 1))
      w.push_back("degree " + str(2 * k) + ": nilp " + str(nilp_at(profile, 2 * k)));
  out.push_back(make_verdict("nagai.even.below_n_bound", "nilp(M_2k) <= n-1 for k < n", obs,
                             w.empty(), asserted, w));

  w.clear();
  for (const auto& [d, k] : profile)
    if (d % 2 == 0 && k > static_cast<std::size_t>(n)) w.push_back("degree " + str(d) + ": nilp " + str(k));
  out.push_back(make_verdict("nagai.even.M_pow_n_plus_1_zero", "M^(n+1) = 0 on every even degree",
                             obs, w.empty(), asserted, w));

  w.clear();
  for (const auto& [d, k] : profile)
    if (d % 2 == 0 && d < 2 * n && k >= static_cast<std::size_t>(n))
      w.push_back("degree " + str(d) + ": nilp " + str(k));
  out.push_back(make_verdict("nagai.even.M_pow_n_zero_below_2n", "M^n = 0 on H^2k for 2k < 2n", obs,
                             w.empty(), asserted, w));
  return out;
}

Verdict check_profile_duality(const NilpotenceProfile& profile, int n, bool asserted) {
  std::vector<std::string> w;
  for (const auto& [d, k] : profile)
    if (nilp_at(profile, 4 * n - d) != k)
      w.push_back("degree " + str(d) + ": " + str(k) + " vs degree " + str(4 * n - d) + ": " +
                  str(nilp_at(profile, 4 * n - d)));
  return make_verdict("profile.duality", "nilp(M_d) = nilp(M_(4n-d))", profile_string(profile),
                      w.empty(), asserted, w);
}

std::vector<KernelConditionEntry> kernel_condition_table(const LLVModule& m,
                                                         const FrameOperators& ops,
                                                         const Bigrading& big) {
  std::set<std::pair<int, int>> pq;
  for (const auto& [key, space] : big.components)
    if (key[0] + key[1] <= 2 * m.n - 2 && space.dim() > 0) pq.insert({key[0], key[1]});
  std::vector<KernelConditionEntry> out;
  for (const auto& [p, q] : pq) {
    const int d = p + q;
    Subspace piece = big.hodge_piece(p, q);
    Matrix both = vstack(ops.L_beta.block(d), ops.L_sbar.block(d));
    std::size_t r = both.rows() == 0 ? 0 : rank(both * piece.basis());
    out.push_back({p, q, piece.dim(), piece.dim() - r});
  }
  return out;
}

std::vector<Verdict> check_kernel_condition(const std::vector<KernelConditionEntry>& table, int n) {
  std::vector<Verdict> out;
  if (table.empty()) {
    out.push_back(make_verdict("kernel_condition", "no bidegree with p+q <= 2n-2", "empty table", true, false));
    return out;
  }
  for (const KernelConditionEntry& e : table) {
    const bool asserted = e.q < n;
    out.push_back(make_verdict(
        "kernel_condition.(" + str(e.p) + "," + str(e.q) + ")",
        asserted ? "no class killed by both L_beta and L_sbar (q < n)" : "recorded only",
        "common kernel " + str(e.kernel_dim) + " of " + str(e.piece_dim), e.holds(), asserted));
  }
  return out;
}

namespace {

bool level_bound_ok(const PQI& key) {
  const int d = key[0] + key[1];
  const int k = d / 2;
  return std::abs(key[0] - key[1]) <= 2 * k - 2 * std::abs(key[2] - k);
}

}  // namespace

Verdict check_level_reformulation(const Bigrading& big, bool asserted) {
  std::vector<std::string> w;
  std::size_t seen = 0;
  for (const auto& [key, space] : big.components) {
    if ((key[0] + key[1]) % 2 != 0 || space.dim() == 0) continue;
    ++seen;
    if (!level_bound_ok(key)) w.push_back(pqi_string(key) + " has dim " + str(space.dim()));
  }
  return make_verdict("level.reformulation", "|p-q| <= 2k - 2|i-k| on every nonzero V^{p,q,i}, p+q = 2k",
                      str(seen - w.size()) + " of " + str(seen) + " components within the bound",
                      w.empty(), asserted, w);
}

Verdict check_level_gr_consistency(const Bigrading& big,
                                   const std::map<int, WeightFiltration>& m_filt) {
  std::vector<std::string> w;
  std::size_t both = 0;
  for (const auto& [d, filt] : m_filt) {
    if (d % 2 != 0) continue;
    const int k = d / 2;
    bool level_ok = true;
    for (const auto& [key, space] : big.components)
      if (key[0] + key[1] == d && space.dim() > 0 && !level_bound_ok(key)) level_ok = false;
    bool gr_ok = true;
    for (int j = -4 * big.n - 2; j <= 4 * big.n + 2; ++j)
      if (std::abs(j) > k && filt.gr_dim(big.n + j) > 0) gr_ok = false;
    if (level_ok != gr_ok)
      w.push_back("degree " + str(d) + ": level bound " + (level_ok ? "holds" : "fails") +
                  ", Gr^M vanishing " + (gr_ok ? "holds" : "fails"));
    if (level_ok && gr_ok) ++both;
  }
  return make_verdict("level.gr_consistency", "level bound in degree 2k iff Gr^M_(n+j) = 0 for |j| > k",
                      str(both) + " even degrees where both hold", w.empty(), true, w);
}

int hodge_level(const Bigrading& big, int degree) {
  int level = -1;
  for (const auto& [key, space] : big.components)
    if (key[0] + key[1] == degree && space.dim() > 0) level = std::max(level, std::abs(key[0] - key[1]));
  return level;
}

std::vector<Verdict> check_odd(const Bigrading& big, const NilpotenceProfile& profile,
                               const std::vector<KernelConditionEntry>& kernel_cond) {
  std::vector<Verdict> out;
  const int n = big.n;
  std::vector<int> odd;
  for (const auto& [d, k] : big.dims)
    if (d % 2 != 0 && k > 0) odd.push_back(d);
  if (odd.empty()) {
    out.push_back(make_verdict("odd.bounds", "no odd degrees", "no odd degrees", true));
    return out;
  }
  const bool cond_holds =
      std::all_of(kernel_cond.begin(), kernel_cond.end(),
                  [](const KernelConditionEntry& e) { return e.holds(); });
  for (int d : odd) {
    const int k = (d + 1) / 2;
    if (k < 1 || k > n) continue;
    const std::string tag = ".d=" + str(d);
    const std::size_t nilp = nilp_at(profile, d);
    const int level = hodge_level(big, d);
    bool premise = true;
    for (const auto& [key, space] : big.components)
      if (key[0] + key[1] == d && space.dim() > 0 && (key[0] == 0 || key[1] == 0)) premise = false;
    const std::string premise_note = premise ? "" : " (H^{d,0} or H^{0,d} nonzero: bound not applicable)";

    out.push_back(make_verdict("odd.upper_2k_minus_3" + tag, "nilp <= " + str(2 * k - 3),
                               "nilp " + str(nilp) + ", level " + str(level) + premise_note,
                               static_cast<int>(nilp) <= 2 * k - 3, premise));
    out.push_back(make_verdict("odd.upper_n_minus_1" + tag, "nilp <= " + str(n - 1),
                               "nilp " + str(nilp) + premise_note,
                               static_cast<int>(nilp) <= n - 1, premise));

    if (level > 0 && level % 2 == 1) {
      const int ell = (level + 1) / 2;
      int formula = -1;
      for (const auto& [key, space] : big.components) {
        if (key[0] != k - ell || key[1] != k + ell - 1 || space.dim() == 0) continue;
        const int i = key[2];
        const int v = std::max(std::abs(k - ell - i), std::abs(k + ell - 1 - i));
        formula = formula < 0 ? v : std::min(formula, v);
      }
      const bool ok = formula >= ell && static_cast<int>(nilp) >= formula;
      out.push_back(make_verdict("odd.lower_level" + tag,
                                 "ell <= min_i max{|k-ell-i|, |k+ell-1-i|} <= nilp",
                                 "ell " + str(ell) + ", formula " + str(formula) + ", nilp " + str(nilp),
                                 ok, false));
    }

    out.push_back(make_verdict(
        "odd.kernel_condition_bound" + tag, "nilp <= " + str(k - 1) + " when the kernel condition holds",
        "nilp " + str(nilp) + ", the kernel condition " + (cond_holds ? "holds" : "fails"),
        !cond_holds || static_cast<int>(nilp) <= k - 1, false));
  }
  if (dim_at(big.dims, 3) > 0 && n >= 2) {
    std::vector<std::string> w;
    for (int k = 2; k <= n; ++k) {
      const int level = hodge_level(big, 2 * k - 1);
      if (level != 2 * k - 3) w.push_back("degree " + str(2 * k - 1) + ": level " + str(level));
    }
    out.push_back(make_verdict("odd.h3.levels", "level of H^(2k-1) is 2k-3 for 2 <= k <= n",
                               w.empty() ? "as expected" : "differs", w.empty(), false, w));
    out.push_back(make_verdict("odd.h3.nilp3", "nilp(M_3) = 1", "nilp " + str(nilp_at(profile, 3)),
                               nilp_at(profile, 3) == 1, false));
    out.push_back(make_verdict("odd.h3.nilp_2n_minus_1", "nilp(M_(2n-1)) = " + str(n - 1),
                               "nilp " + str(nilp_at(profile, 2 * n - 1)),
                               nilp_at(profile, 2 * n - 1) == static_cast<std::size_t>(n - 1), false));
  }
  return out;
}

std::vector<Verdict> check_betti_mod4(const Bigrading& big) {
  std::vector<Verdict> out;
  std::vector<int> odd;
  for (const auto& [d, k] : big.dims)
    if (d % 2 != 0 && k > 0) odd.push_back(d);
  if (odd.empty()) {
    out.push_back(make_verdict("betti.symmetry", "no odd degrees", "no odd degrees", true));
    out.push_back(make_verdict("betti.mod4", "no odd degrees", "no odd degrees", true));
    return out;
  }
  std::vector<PQI> asym = bigrading_asymmetries(big);
  std::vector<std::string> w;
  for (const PQI& k : asym) w.push_back(pqi_string(k) + " dim " + str(big.dim(k)));
  const bool symmetric = asym.empty();
  out.push_back(make_verdict("betti.symmetry",
                             "dim V^{p,q,i} = dim V^{q,p,i} = dim V^{i,p+q-i,p} = dim V^{p+q-i,i,p}",
                             str(asym.size()) + " asymmetric keys", symmetric, true, w));
  w.clear();
  std::string obs;
  for (int d : odd) {
    const int k = (d + 1) / 2;
    std::size_t sum = 0;
    for (const auto& [key, space] : big.components)
      if (key[0] + key[1] == d && key[0] < k && key[2] < k) sum += space.dim();
    const std::size_t dim = dim_at(big.dims, d);
    obs += (obs.empty() ? "" : ", ") + ("b_" + str(d) + " = " + str(dim));
    if (dim != 4 * sum || dim % 4 != 0)
      w.push_back("degree " + str(d) + ": dim " + str(dim) + ", four times the fundamental domain " +
                  str(4 * sum));
  }
  out.push_back(make_verdict("betti.mod4",
                             "dim H^(2k-1) = 4·Σ_{p<k, i<k} dim V^{p,q,i}" +
                                 std::string(symmetric ? "" : " (not asserted: symmetry fails)"),
                             obs, w.empty(), symmetric, w));
  return out;
}

DiamondTable diamond_report(const Bigrading& big, int degree) {
  DiamondTable t;
  t.degree = degree;
  for (const auto& [key, space] : big.components)
    if (key[0] + key[1] == degree && space.dim() > 0) t.cells[{key[1], key[2]}] += space.dim();
  return t;
}

std::string render_diamond(const DiamondTable& t) {
  std::ostringstream os;
  os << "degree " << t.degree << "\n";
  if (t.cells.empty()) return os.str() + "(empty)\n";
  int qmin = t.cells.begin()->first.first, qmax = qmin, imin = t.cells.begin()->first.second,
      imax = imin;
  for (const auto& [key, dim] : t.cells) {
    qmin = std::min(qmin, key.first);
    qmax = std::max(qmax, key.first);
    imin = std::min(imin, key.second);
    imax = std::max(imax, key.second);
  }
  os << std::setw(6) << "i\\q";
  for (int q = qmin; q <= qmax; ++q) os << std::setw(5) << q;
  os << "\n";
  for (int i = imax; i >= imin; --i) {
    os << std::setw(6) << i;
    for (int q = qmin; q <= qmax; ++q) {
      auto it = t.cells.find({q, i});
      os << std::setw(5) << (it == t.cells.end() ? std::string(".") : str(it->second));
    }
    os << "\n";
  }
  return os.str();
}

Json to_json(const DiamondTable& t) {
  Json cells = Json::array();
  for (const auto& [key, dim] : t.cells)
    cells.push_back({{"p", t.degree - key.first}, {"q", key.first}, {"i", key.second}, {"dim", dim}});
  return {{"degree", t.degree}, {"cells", cells}};
}

Verdict check_degree2_diamond(const Bigrading& big, std::size_t b2) {
  DiamondTable t = diamond_report(big, 2);
  std::map<std::pair<int, int>, std::size_t> expected{{{1, 0}, 1}, {{1, 2}, 1}, {{0, 1}, 1}, {{2, 1}, 1}};
  if (b2 > 4) expected[{1, 1}] = b2 - 4;
  std::vector<std::string> w;
  std::set<std::pair<int, int>> keys;
  for (const auto& [k, v] : expected) keys.insert(k);
  for (const auto& [k, v] : t.cells) keys.insert(k);
  for (const auto& k : keys) {
    std::size_t want = expected.count(k) ? expected.at(k) : 0;
    std::size_t got = t.cells.count(k) ? t.cells.at(k) : 0;
    if (want != got)
      w.push_back("(q,i) = (" + str(k.first) + "," + str(k.second) + "): " + str(got) + ", expected " + str(want));
  }
  std::map<int, std::size_t> rows;
  for (const auto& [k, v] : t.cells) rows[k.second] += v;
  std::string obs = "row sums i=0,1,2: " + str(rows[0]) + " / " + str(rows[1]) + " / " + str(rows[2]);
  return make_verdict("diamond.degree2", "beta at (1,0), eta at (1,2), (1, " + str(b2 - 4) + ", 1) along i=1",
                      obs, w.empty(), true, w);
}

QuadraticSpace instance_space(const InstanceConfig& c) {
  std::vector<Rational> tail = c.tail;
  if (tail.empty() && c.b2 > 4) tail.assign(c.b2 - 4, Rational(2));
  return make_standard_space(c.b2, tail);
}

bool Report::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.passed || !v.asserted; });
}

Json to_json(const Report& r) {
  Json verdicts = Json::array();
  for (const Verdict& v : r.verdicts) verdicts.push_back(to_json(v));
  Json profile = Json::array();
  for (const auto& [d, k] : r.profile) profile.push_back({{"degree", d}, {"nilp", k}});
  return {{"instance", r.instance}, {"seeds", r.seeds},   {"note", kNote},
          {"profiles", profile},    {"verdicts", verdicts}, {"tables", r.tables},
          {"passed", r.passed()}};
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "instance " << r.instance.dump() << "\n";
  os << "seeds " << r.seeds.dump() << "\n";
  os << "note: " << kNote << "\n";
  os << "profile " << profile_string(r.profile) << "\n";
  for (const Verdict& v : r.verdicts) {
    os << (v.passed ? "PASS " : "FAIL ") << (v.asserted ? "" : "(recorded) ") << v.claim << ": "
       << v.observed << "  [expected " << v.expected << "]\n";
    for (const std::string& w : v.witnesses) os << "    witness: " << w << "\n";
  }
  if (r.tables.contains("diamonds"))
    for (const Json& d : r.tables["diamonds"]) {
      DiamondTable t;
      t.degree = d["degree"].get<int>();
      for (const Json& c : d["cells"])
        t.cells[{c["q"].get<int>(), c["i"].get<int>()}] = c["dim"].get<std::size_t>();
      os << render_diamond(t);
    }
  os << (r.passed() ? "RESULT PASS" : "RESULT FAIL") << "\n";
  return os.str();
}

namespace {

Json tail_json(const QuadraticSpace& space) {
  Json t = Json::array();
  for (std::size_t i = 4; i < space.dim(); ++i) t.push_back(rational_to_json(space.gram()(i, i)));
  return t;
}

Json kernel_cond_json(const std::vector<KernelConditionEntry>& t) {
  Json out = Json::array();
  for (const KernelConditionEntry& e : t)
    out.push_back({{"p", e.p}, {"q", e.q}, {"piece_dim", e.piece_dim},
                   {"kernel_dim", e.kernel_dim}, {"holds", e.holds()}});
  return out;
}

// Checks shared by built and ingested modules once operators and the
// bigrading exist. `geometric` marks statements asserted only on SH.
void common_checks(Report& r, const LLVModule& m, const FrameOperators& ops, const Bigrading& big,
                   bool geometric) {
  const int n = m.n;
  r.profile = nilpotence_profile(ops.M);
  for (Verdict& v : check_even_nagai(r.profile, n, geometric)) r.verdicts.push_back(std::move(v));
  r.verdicts.push_back(check_profile_duality(r.profile, n, geometric));

  std::vector<PQI> asym = bigrading_asymmetries(big);
  std::vector<std::string> w;
  for (const PQI& k : asym) w.push_back(pqi_string(k));
  r.verdicts.push_back(make_verdict("bigrading.symmetry", "four-fold symmetry of dim V^{p,q,i}",
                                    str(asym.size()) + " asymmetric keys", asym.empty(), true, w));

  std::map<int, WeightFiltration> m_filt;
  r.verdicts.push_back(guarded("weight.axioms", "every weight filtration satisfies its axioms", [&] {
    std::vector<std::string> fails;
    std::size_t count = 0;
    m_filt = monodromy_filtrations(ops.M, n);
    for (const auto& [d, wf] : m_filt) {
      ++count;
      if (!verify_weight_filtration(ops.M.block(d), wf)) fails.push_back("M on degree " + str(d));
    }
    for (const auto& [name, op] : {std::pair<std::string, const GradedOperator*>{"L_beta", &ops.L_beta},
                                   {"L_sbar", &ops.L_sbar}}) {
      ++count;
      if (!verify_weight_filtration(op->total_matrix(), weight_filtration(*op, n)))
        fails.push_back(name);
    }
    return make_verdict("weight.axioms", "every weight filtration satisfies its axioms",
                        str(count - fails.size()) + " of " + str(count) + " filtrations", fails.empty(),
                        true, fails);
  }));

  r.verdicts.push_back(guarded("perverse.weight_crosscheck", "W^{L_beta}_i ∩ H^d = P_(d+i-2n) H^d", [&] {
    CheckResult c = crosscheck_perverse_weight(m, ops.L_beta);
    return make_verdict("perverse.weight_crosscheck", "W^{L_beta}_i ∩ H^d = P_(d+i-2n) H^d",
                        c.passed ? "equal in every degree" : "differs", c.passed, true, c.witnesses);
  }));
  r.verdicts.push_back(guarded("perverse.conjugate_hodge", "W^{L_sbar}_i = Σ_{q >= 2n-i} V^{p,q,•}", [&] {
    CheckResult c = conjugate_hodge_check(m, ops.L_sbar, big);
    return make_verdict("perverse.conjugate_hodge", "W^{L_sbar}_i = Σ_{q >= 2n-i} V^{p,q,•}",
                        c.passed ? "equal in every degree" : "differs", c.passed, true, c.witnesses);
  }));

  if (!m_filt.empty()) {
    r.verdicts.push_back(guarded("gr.compare", "dim Gr^M_(n+j) H^l = Σ_{p+q=l} dim Gr^P_(j+q) V^{p,q}", [&] {
      GrComparison g = compare_gr_dims(m_filt, big, m, ops.L_beta);
      std::vector<std::string> diff;
      std::set<std::pair<int, int>> keys;
      for (const auto& [k, v] : g.monodromy) keys.insert(k);
      for (const auto& [k, v] : g.perverse) keys.insert(k);
      for (const auto& k : keys) {
        std::size_t a = g.monodromy.count(k) ? g.monodromy.at(k) : 0;
        std::size_t b = g.perverse.count(k) ? g.perverse.at(k) : 0;
        if (a != b)
          diff.push_back("(l,j) = (" + str(k.first) + "," + str(k.second) + "): " + str(a) + " vs " + str(b));
      }
      r.tables["gr_monodromy"] = to_json(g.monodromy);
      r.tables["gr_perverse"] = to_json(g.perverse);
      return make_verdict("gr.compare", "dim Gr^M_(n+j) H^l = Σ_{p+q=l} dim Gr^P_(j+q) V^{p,q}",
                          str(keys.size()) + " (l,j) entries compared", g.agree, true, diff);
    }));
    r.verdicts.push_back(check_level_gr_consistency(big, m_filt));
  }
  r.verdicts.push_back(check_level_reformulation(big, geometric));

  std::vector<KernelConditionEntry> cond = kernel_condition_table(m, ops, big);
  for (Verdict& v : check_kernel_condition(cond, n)) r.verdicts.push_back(std::move(v));
  r.tables["kernel_condition"] = kernel_cond_json(cond);

  for (Verdict& v : check_odd(big, r.profile, cond)) r.verdicts.push_back(std::move(v));
  for (Verdict& v : check_betti_mod4(big)) r.verdicts.push_back(std::move(v));

  Json diamonds = Json::array();
  for (const auto& [d, k] : m.dims)
    if (k > 0) diamonds.push_back(to_json(diamond_report(big, d)));
  r.tables["diamonds"] = diamonds;
  r.tables["bigrading"] = to_json(big);
}

void sl2_checks(Report& r, const FrameOperators& ops) {
  for (const auto& [name, t] : ops.triples()) {
    std::string f = sl2_failure(t);
    r.verdicts.push_back(make_verdict("sl2." + name, "sl2 relations hold exactly",
                                      f.empty() ? "sl2 relations hold" : f, f.empty()));
  }
  std::optional<Rational> c = commutator_scalar(ops.E_M, ops.F_M, ops.H_M);
  std::string f = sl2_failure(ops.scaled_m_triple());
  r.verdicts.push_back(make_verdict(
      "sl2.M_scaled", "(2M, 2[Lambda(s), L_eta], H_beta - H_s) is an sl2 triple",
      (f.empty() ? std::string("sl2 relations hold") : f) + "; [E_M, F_M] = " +
          (c ? format_rational(*c) : std::string("?")) + "·(H_beta - H_s)",
      f.empty(), false));
}

}  // namespace

namespace {

void algebra_checks(Report& r, const GradedAlgebra& alg, const InstanceConfig& c) {
  const QuadraticSpace& space = alg.space();
  std::vector<std::string> w;
  std::string dims;
  for (int k = 0; k <= 2 * c.n; ++k) {
    std::size_t want = verbitsky_target_dim(c.b2, c.n, k);
    dims += (k ? " " : "") + str(alg.dim(2 * k));
    if (alg.dim(2 * k) != want)
      w.push_back("degree " + str(2 * k) + ": " + str(alg.dim(2 * k)) + ", expected " + str(want));
  }
  r.verdicts.push_back(make_verdict("dims.oracle", "dim SH^2k = dim Sym^min(k,2n-k)(Q^b2)", dims,
                                    w.empty(), true, w));

  LLVModule m = module_of(alg);
  LambdaExtension lam(m);
  r.verdicts.push_back(make_verdict("lambda.well_defined", "Λ(x) linear in x on the anisotropic cone",
                                    lam.well_defined() ? "two bases agree" : lam.witness(),
                                    lam.well_defined()));
  HodgeFrame frame = build_frame(space, c.frame_seed);
  r.tables["frame"] = to_json(frame);
  FrameOperators ops = frame_operators(m, lam, frame);
  sl2_checks(r, ops);

  // M on H² against q(beta,·)sbar - q(sbar,·)beta.
  {
    const std::size_t b = space.dim();
    Matrix actual(alg.dim(2), b), form(alg.dim(2), b);
    for (std::size_t j = 0; j < b; ++j) {
      Vector e = unit_vector(b, j);
      actual.set_col(j, ops.M.apply(2, alg.from_h2(e).coords));
      Vector y = space.bilinear(frame.beta, e) * frame.sbar - space.bilinear(frame.sbar, e) * frame.beta;
      form.set_col(j, alg.from_h2(y).coords);
    }
    std::optional<Rational> scale;
    for (std::size_t i = 0; i < form.rows() && !scale; ++i)
      for (std::size_t j = 0; j < b && !scale; ++j)
        if (sgn(form(i, j)) != 0) scale = actual(i, j) / form(i, j);
    const bool prop = scale && sgn(*scale) != 0 && actual == *scale * form;
    r.verdicts.push_back(make_verdict("rank2.proportional",
                                      "M on H^2 is a nonzero multiple of q(beta,·)sbar - q(sbar,·)beta",
                                      prop ? "scalar " + format_rational(*scale) : "not proportional", prop));
    Subspace img = Subspace::span(actual);
    Subspace plane = Subspace::span(
        std::vector<Vector>{alg.from_h2(frame.beta).coords, alg.from_h2(frame.sbar).coords}, alg.dim(2));
    const bool iso = is_isotropic_plane(space, {frame.beta, frame.sbar});
    r.verdicts.push_back(make_verdict("rank2.image", "image of M on H^2 = <beta, sbar>, isotropic, dim 2",
                                      "dim " + str(img.dim()) + (img == plane ? ", equals <beta, sbar>" : ", differs") +
                                          (iso ? ", isotropic" : ", not isotropic"),
                                      img == plane && img.dim() == 2 && iso));
    const Matrix& m2 = ops.M.block(2);
    const bool type2 = !m2.is_zero() && (m2 * m2).is_zero();
    r.verdicts.push_back(make_verdict("rank2.type_II", "M_2 != 0 and M_2^2 = 0",
                                      type2 ? "holds" : "fails", type2));
  }

  DerivationReport dr = verify_derivation(alg, ops.M, c.derivation_trials, c.seed);
  r.verdicts.push_back(make_verdict("derivation.M", "M(ab) = M(a)b + aM(b)",
                                    str(dr.trials - dr.failures) + " of " + str(dr.trials) + " pairs",
                                    dr.passed() && dr.trials >= 100, true, dr.witnesses));
  DerivationReport ctl = verify_derivation(alg, ops.L_s, 20, c.seed);
  r.verdicts.push_back(make_verdict("derivation.control", "the test rejects L_s",
                                    str(ctl.failures) + " of " + str(ctl.trials) + " pairs rejected",
                                    !ctl.passed()));

  Bigrading big = bigrading(m, ops);
  r.verdicts.push_back(check_degree2_diamond(big, c.b2));
  {
    std::vector<std::string> cw;
    auto expect = [&](PQI key, const Vector& v, const char* name) {
      Subspace line = Subspace::span(std::vector<Vector>{alg.from_h2(v).coords}, alg.dim(2));
      auto it = big.components.find(key);
      if (it == big.components.end() || !(it->second == line))
        cw.push_back(std::string(name) + " does not span V" + pqi_string(key));
    };
    expect({1, 1, 0}, frame.beta, "beta");
    expect({1, 1, 2}, frame.eta, "eta");
    expect({2, 0, 1}, frame.s, "s");
    expect({0, 2, 1}, frame.sbar, "sbar");
    r.verdicts.push_back(make_verdict("diamond.degree2_classes",
                                      "V(1,1,0) = <beta>, V(1,1,2) = <eta>, V(2,0,1) = <s>, V(0,2,1) = <sbar>",
                                      cw.empty() ? "as expected" : "differs", cw.empty(), true, cw));
  }
  common_checks(r, m, ops, big, true);
}

Report instance_report(const QuadraticSpace& space, const InstanceConfig& c) {
  Report r;
  r.instance = {{"kind", "verbitsky"}, {"n", c.n}, {"b2", c.b2}, {"tail", tail_json(space)}};
  r.seeds = {{"build", c.seed}, {"frame", c.frame_seed}, {"derivation", c.seed},
             {"budget", c.budget}, {"derivation_trials", c.derivation_trials}};
  return r;
}

void record_error(Report& r, const std::exception& e) {
  r.verdicts.push_back(
      make_verdict("run", "instance runs to completion", std::string("error: ") + e.what(), false));
}

}  // namespace

Report run_instance(const InstanceConfig& c) {
  QuadraticSpace space = instance_space(c);
  Report r = instance_report(space, c);
  try {
    BuildStats stats;
    GradedAlgebra alg = build_verbitsky(space, c.n, c.budget, c.seed, &stats);
    r.tables["build"] = {{"samples_drawn", stats.samples_drawn}, {"ideal_rank", stats.ideal_rank}};
    algebra_checks(r, alg, c);
  } catch (const std::exception& e) {
    record_error(r, e);
  }
  return r;
}

Report run_algebra(const GradedAlgebra& alg, InstanceConfig c) {
  c.n = alg.n();
  c.b2 = alg.b2();
  Report r = instance_report(alg.space(), c);
  r.seeds.erase("build");
  r.seeds.erase("budget");
  try {
    algebra_checks(r, alg, c);
  } catch (const std::exception& e) {
    record_error(r, e);
  }
  return r;
}

Report run_module(const LLVModuleSpec& spec, std::uint64_t frame_seed) {
  Report r;
  const LLVModule& m = spec.module;
  Json dims = Json::array();
  for (const auto& [d, k] : m.dims) dims.push_back({{"degree", d}, {"dim", k}});
  r.instance = {{"kind", "module"}, {"label", spec.label}, {"n", m.n}, {"b2", m.b2()}, {"dims", dims}};
  r.seeds = {{"frame", spec.frame ? Json("supplied") : Json(frame_seed)}};
  ValidationReport vr = validate(spec);
  for (const ValidationCheck& c : vr.checks)
    r.verdicts.push_back(make_verdict("validation." + c.name, "holds", c.passed ? "holds" : c.witness, c.passed));
  if (const ValidationCheck* bad = vr.first_failure()) {
    r.verdicts.push_back(make_verdict("analysis", "runs on a validated module",
                                      "refused: validation check '" + bad->name + "' failed", false, true,
                                      {bad->name + ": " + bad->witness}));
    return r;
  }
  try {
    HodgeFrame frame = spec.frame ? *spec.frame : build_frame(m.space, frame_seed);
    r.tables["frame"] = to_json(frame);
    LambdaExtension lam(m);
    FrameOperators ops = frame_operators(m, lam, frame);
    sl2_checks(r, ops);
    Bigrading big = bigrading(m, ops);
    common_checks(r, m, ops, big, false);
  } catch (const std::exception& e) {
    r.verdicts.push_back(make_verdict("run", "module analysis runs to completion", std::string("error: ") + e.what(), false));
  }
  return r;
}

std::vector<InstanceConfig> default_grid(std::uint64_t seed, std::size_t budget) {
  std::vector<InstanceConfig> out;
  for (int n = 1; n <= 3; ++n)
    for (std::size_t b2 = 4; b2 <= 7; ++b2) {
      InstanceConfig c;
      c.n = n;
      c.b2 = b2;
      c.seed = seed;
      c.budget = budget;
      out.push_back(c);
    }
  return out;
}

std::vector<Report> run_grid(const std::vector<InstanceConfig>& configs, unsigned threads) {
  std::vector<Report> out(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) out[i] = run_instance(configs[i]);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return out;
}

}  // namespace hklab
