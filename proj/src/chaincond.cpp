#include "ndep/chaincond.hpp"

#include <random>
#include <string>
#include <utility>

namespace ndep {
namespace chaincond {

namespace {

int mod_pow(int base, int e, int p) {
  long long r = 1, b = ((base % p) + p) % p;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<int>(r);
}

int mod_inv(int a, int p) { return mod_pow(a, p - 2, p); }

/* Gauss-Jordan over F_p; rows come back in pivot order with unit pivots and
   zeroed pivot columns elsewhere, so equal row spaces yield equal outputs. */
std::vector<std::vector<int>> rref(std::vector<std::vector<int>> rows, int p) {
  for (auto& row : rows)
    for (auto& x : row) x = ((x % p) + p) % p;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    int inv = mod_inv(rows[r][c], p);
    for (auto& x : rows[r]) x = x * inv % p;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      int f = rows[i][c];
      for (size_t j = 0; j < cols; ++j)
        rows[i][j] = ((rows[i][j] - f * rows[r][j]) % p + p) % p;
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

void check_ambient(const SubspaceSubgroup& a, const SubspaceSubgroup& b) {
  if (a.p != b.p || a.k != b.k) throw DomainError("subspace ambients differ");
}

std::vector<int> coeff_vector(const algebra::GFElem& x) {
  std::vector<int> v = x.coeffs();
  v.resize(static_cast<size_t>(x.field()->k()), 0);
  return v;
}

}  // namespace

bool SubspaceSubgroup::contains(const std::vector<int>& v) const {
  if (static_cast<int>(v.size()) != k) throw DomainError("vector length must equal k");
  std::vector<int> w(v);
  for (auto& x : w) x = ((x % p) + p) % p;
  for (const auto& row : basis) {
    size_t pc = 0;
    while (pc < row.size() && row[pc] == 0) ++pc;
    if (pc == row.size() || w[pc] == 0) continue;
    int f = w[pc];
    for (size_t j = 0; j < w.size(); ++j) w[j] = ((w[j] - f * row[j]) % p + p) % p;
  }
  for (int x : w)
    if (x != 0) return false;
  return true;
}

bool SubspaceSubgroup::contains(const algebra::GFElem& x) const {
  if (x.field()->p() != p || x.field()->k() != k)
    throw DomainError("element lives in a different field than the subspace");
  return contains(coeff_vector(x));
}

SubspaceSubgroup span_of(int p, int k, const std::vector<std::vector<int>>& vectors) {
  if (!algebra::is_prime(p)) throw DomainError("subspace characteristic must be prime");
  if (k < 1) throw DomainError("subspace ambient dimension must be positive");
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != k) throw DomainError("vector length must equal k");
  return SubspaceSubgroup{p, k, rref(vectors, p)};
}

SubspaceSubgroup whole_space(int p, int k) {
  std::vector<std::vector<int>> rows(static_cast<size_t>(k), std::vector<int>(k, 0));
  for (int i = 0; i < k; ++i) rows[i][i] = 1;
  return span_of(p, k, rows);
}

SubspaceSubgroup complement(const SubspaceSubgroup& s) {
  /* The basis is already reduced, so the nullspace has the textbook
     free-column generators; one more reduction makes them canonical. */
  std::vector<int> pivot_of_col(static_cast<size_t>(s.k), -1);
  for (size_t r = 0; r < s.basis.size(); ++r) {
    size_t pc = 0;
    while (pc < s.basis[r].size() && s.basis[r][pc] == 0) ++pc;
    if (pc < s.basis[r].size()) pivot_of_col[pc] = static_cast<int>(r);
  }
  std::vector<std::vector<int>> gens;
  for (int f = 0; f < s.k; ++f) {
    if (pivot_of_col[f] >= 0) continue;
    std::vector<int> v(static_cast<size_t>(s.k), 0);
    v[f] = 1;
    for (int c = 0; c < s.k; ++c)
      if (pivot_of_col[c] >= 0) v[c] = (s.p - s.basis[pivot_of_col[c]][f] % s.p) % s.p;
    gens.push_back(std::move(v));
  }
  return span_of(s.p, s.k, gens);
}

SubspaceSubgroup intersect(const SubspaceSubgroup& u, const SubspaceSubgroup& w) {
  check_ambient(u, w);
  SubspaceSubgroup du = complement(u), dw = complement(w);
  std::vector<std::vector<int>> both = du.basis;
  both.insert(both.end(), dw.basis.begin(), dw.basis.end());
  return complement(span_of(u.p, u.k, both));
}

SubspaceSubgroup wp_image_subgroup(const algebra::GFElem& b) {
  if (b.is_zero()) throw DomainError("wp image subgroup requires a nonzero multiplier");
  const algebra::FieldPtr& f = b.field();
  std::vector<std::vector<int>> gens;
  for (int i = 0; i < f->k(); ++i) {
    std::vector<int> e(static_cast<size_t>(f->k()), 0);
    e[i] = 1;
    gens.push_back(coeff_vector(b * algebra::wp(f->from_coeffs(std::move(e)))));
  }
  return span_of(f->p(), f->k(), gens);
}

SubspaceSubgroup FamilyArray::subgroup(int t, const std::vector<int>& eta) const {
  if (t < 0 || t >= static_cast<int>(families.size())) throw DomainError("family index out of range");
  if (static_cast<int>(eta.size()) != n) throw DomainError("eta must have one entry per row");
  if (families[static_cast<size_t>(t)] == FamilyKind::kAmbient)
    return whole_space(field->p(), field->k());
  algebra::GFElem prod = field->one();
  for (int i = 0; i < n; ++i) {
    int j = eta[static_cast<size_t>(i)];
    if (j < 0 || j >= d) throw DomainError("eta entry out of range");
    prod = prod * params[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  if (families[static_cast<size_t>(t)] == FamilyKind::kFrobeniusTwist) prod = prod.frobenius(1);
  return wp_image_subgroup(prod);
}

void FamilyArray::validate() const {
  if (!field) throw DomainError("family array needs a field");
  if (n < 1 || d < 1) throw DomainError("family array needs n >= 1 and d >= 1");
  if (static_cast<int>(params.size()) != n) throw DomainError("parameter array must have n rows");
  for (const auto& row : params) {
    if (static_cast<int>(row.size()) != d) throw DomainError("parameter rows must have d entries");
    for (const auto& b : row) {
      if (!b.field() || !b.field()->same_as(*field))
        throw DomainError("parameters must live in the array's field");
      if (b.is_zero()) throw DomainError("parameters must be nonzero");
    }
  }
  int t = static_cast<int>(families.size());
  if (t < 1 || t >= field->k())
    throw DomainError("family count must satisfy 1 <= t < k");
}

std::optional<std::vector<int>> find_redundant(const FamilyArray& fa) {
  fa.validate();
  int t = static_cast<int>(fa.families.size());
  std::vector<std::vector<int>> etas;
  std::vector<int> eta(static_cast<size_t>(fa.n), 0);
  for (;;) {
    etas.push_back(eta);
    int pos = fa.n - 1;
    while (pos >= 0 && ++eta[static_cast<size_t>(pos)] == fa.d) eta[static_cast<size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  SubspaceSubgroup full = whole_space(fa.field->p(), fa.field->k());
  size_t count = etas.size();
  /* Prefix/suffix intersections per family make each leave-one-out check a
     single intersect instead of a rescan. */
  std::vector<std::vector<SubspaceSubgroup>> pre(static_cast<size_t>(t)), suf(static_cast<size_t>(t));
  for (int s = 0; s < t; ++s) {
    auto& ps = pre[static_cast<size_t>(s)];
    auto& ss = suf[static_cast<size_t>(s)];
    ps.assign(count + 1, full);
    ss.assign(count + 1, full);
    for (size_t e = 0; e < count; ++e) ps[e + 1] = intersect(ps[e], fa.subgroup(s, etas[e]));
    for (size_t e = count; e-- > 0;) ss[e] = intersect(fa.subgroup(s, etas[e]), ss[e + 1]);
  }
  for (size_t skip = 0; skip < count; ++skip) {
    bool ok = true;
    for (int s = 0; s < t && ok; ++s)
      ok = intersect(pre[static_cast<size_t>(s)][skip], suf[static_cast<size_t>(s)][skip + 1]) ==
           pre[static_cast<size_t>(s)][count];
    if (ok) return etas[skip];
  }
  return std::nullopt;
}

ThresholdResult baldwin_saxl_threshold(const algebra::FieldPtr& field, int n,
                                       const std::vector<FamilyKind>& families, int trials,
                                       uint64_t seed, int max_d) {
  if (!field) throw DomainError("threshold search needs a field");
  if (n < 1) throw DomainError("threshold search needs n >= 1");
  if (trials < 1) throw DomainError("threshold search needs at least one trial");
  if (max_d < 1) throw DomainError("threshold search needs max_d >= 1");
  uint64_t q = field->size();
  int last_fail_d = 0;
  std::vector<std::vector<algebra::GFElem>> last_fail;
  for (int d = 1; d <= max_d; ++d) {
    bool all_ok = true;
    for (int trial = 0; trial < trials && all_ok; ++trial) {
      /* Splitmix-style per-trial seed so the trial order never matters. */
      uint64_t mix = seed + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(d) * 65537u +
                                                     static_cast<uint64_t>(trial) + 1);
      std::mt19937_64 rng(mix);
      std::vector<std::vector<algebra::GFElem>> params(static_cast<size_t>(n));
      for (auto& row : params)
        for (int j = 0; j < d; ++j) row.push_back(field->from_int(1 + rng() % (q - 1)));
      FamilyArray fa{field, n, d, params, families};
      if (!find_redundant(fa)) {
        all_ok = false;
        last_fail_d = d;
        last_fail = std::move(params);
      }
    }
    if (all_ok) {
      bool cert = last_fail_d == d - 1 && d > 1;
      return ThresholdResult{d, cert, cert ? last_fail : decltype(last_fail){}};
    }
  }
  throw BudgetExceeded("no width up to max_d had every trial admit a redundant index",
                       "{\"max_d\":" + std::to_string(max_d) +
                           ",\"last_failing_d\":" + std::to_string(last_fail_d) + "}");
}

}  // namespace chaincond
}  // namespace ndep
