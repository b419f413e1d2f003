#include "ndep/valo.hpp"

#include <algorithm>
#include <numeric>

namespace ndep {
namespace valo {

namespace {

std::vector<int> rank_order(const std::vector<PExp>& vals) {
  std::vector<int> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return vals[static_cast<size_t>(a)] < vals[static_cast<size_t>(b)]; });
  std::vector<int> rank(vals.size());
  for (size_t r = 0; r < idx.size(); ++r) rank[static_cast<size_t>(idx[r])] = static_cast<int>(r);
  return rank;
}

std::vector<PExp> direct_alpha_vals(const moore::IsoData<TruncatedSeries>& iso) {
  std::vector<PExp> out;
  out.reserve(iso.alpha.size());
  for (const auto& al : iso.alpha) out.push_back(al.valuation_or_throw());
  return out;
}

bool strictly_increasing(const std::vector<PExp>& v) {
  for (size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i] < v[i + 1])) return false;
  return true;
}

}  // namespace

ValProfile::ValProfile(std::vector<PExp> vals) : vals_(std::move(vals)) {
  if (vals_.empty()) throw DomainError("valuation profile must be nonempty");
  for (size_t i = 1; i < vals_.size(); ++i)
    if (vals_[i].p() != vals_[0].p())
      throw DomainError("valuation profile mixes characteristics");
  for (const auto& v : vals_)
    if (!v.is_positive()) throw DomainError("valuation profile entries must be positive");
  for (size_t i = 0; i < vals_.size(); ++i)
    for (size_t j = i + 1; j < vals_.size(); ++j)
      if (vals_[i] == vals_[j])
        throw DomainError("valuation profile entries must be pairwise distinct");
}

ValProfile ValProfile::of_series_tuple(const std::vector<TruncatedSeries>& a) {
  if (a.empty()) throw DomainError("valuation profile must be nonempty");
  std::vector<PExp> vals;
  vals.reserve(a.size());
  for (const auto& ai : a) vals.push_back(ai.valuation_or_throw());
  return ValProfile(std::move(vals));
}

bool ValProfile::sorted_ascending() const { return strictly_increasing(vals_); }

std::vector<PExp> alpha_val_closed_form(const ValProfile& profile, bool sorted_ascending) {
  const auto& vals = profile.vals();
  int m = profile.m();
  int p = profile.p();
  if (sorted_ascending) {
    if (!profile.sorted_ascending())
      throw DomainError("closed form requires the profile sorted strictly ascending");
    std::vector<PExp> out;
    out.reserve(vals.size());
    for (int i = 0; i <= m; ++i) {
      PExp acc = vals[static_cast<size_t>(i)].div_pow_p(m - i);
      for (int j = i; j < m; ++j)
        acc = acc + vals[static_cast<size_t>(j + 1)].times(p - 1).div_pow_p(m - j);
      out.push_back(acc);
    }
    return out;
  }
  std::vector<PExp> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  std::vector<PExp> closed = alpha_val_closed_form(ValProfile(sorted), true);
  std::vector<int> rank = rank_order(vals);
  std::vector<PExp> out;
  out.reserve(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) out.push_back(closed[static_cast<size_t>(rank[i])]);
  return out;
}

AlphaValReport verify_alpha_vals(const std::vector<TruncatedSeries>& a) {
  ValProfile profile = ValProfile::of_series_tuple(a);
  auto iso = moore::build_iso(a);
  AlphaValReport rep;
  rep.a_vals = profile.vals();
  rep.direct = direct_alpha_vals(iso);
  rep.closed_form = alpha_val_closed_form(profile, profile.sorted_ascending());
  rep.match = rep.direct == rep.closed_form;

  std::vector<PExp> sorted = profile.vals();
  std::sort(sorted.begin(), sorted.end());
  std::vector<PExp> closed_sorted = alpha_val_closed_form(ValProfile(sorted), true);
  rep.increasing_when_sorted = strictly_increasing(closed_sorted) &&
                               std::all_of(closed_sorted.begin(), closed_sorted.end(),
                                           [](const PExp& v) { return v.is_positive(); });

  if (profile.m() <= 2) {
    rep.permutation_rule_checked = true;
    rep.permutation_rule_ok = true;
    std::vector<int> sigma(a.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
      std::vector<TruncatedSeries> perm;
      perm.reserve(a.size());
      for (int s : sigma) perm.push_back(a[static_cast<size_t>(s)]);
      auto iso_perm = moore::build_iso(perm);
      std::vector<PExp> direct_perm = direct_alpha_vals(iso_perm);
      for (size_t i = 0; i < a.size(); ++i)
        if (!(direct_perm[i] == rep.direct[static_cast<size_t>(sigma[i])]))
          rep.permutation_rule_ok = false;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
  return rep;
}

bool min_val_check(const std::vector<TruncatedSeries>& a, int l) {
  ValProfile profile = ValProfile::of_series_tuple(a);
  const auto& vals = profile.vals();
  if (l < 0 || l > profile.m()) throw DomainError("index out of range");
  for (int s = 0; s <= profile.m(); ++s)
    if (s != l && !(vals[static_cast<size_t>(s)] < vals[static_cast<size_t>(l)]))
      throw DomainError("index is not the strictly maximal valuation position");
  auto iso = moore::build_iso(a);
  std::vector<PExp> direct = direct_alpha_vals(iso);
  if (!(direct[static_cast<size_t>(l)] == vals[static_cast<size_t>(l)])) return false;
  for (int s = 0; s <= profile.m(); ++s)
    if (s != l && !(direct[static_cast<size_t>(s)] < vals[static_cast<size_t>(l)])) return false;
  return true;
}

PreimageReport preimage_valuations(const std::vector<TruncatedSeries>& a,
                                   const TruncatedSeries& y) {
  ValProfile profile = ValProfile::of_series_tuple(a);
  const auto& vals = profile.vals();
  PExp y_val = y.valuation_or_throw();
  for (const auto& v : vals)
    if (!(v < y_val)) throw DomainError("hypothesis val(a_j) < val(y) fails");

  auto iso = moore::build_iso(a);
  auto tuple = moore::f_inv_apply(iso, y);

  PreimageReport rep{.tuple = std::move(tuple),
                     .a_vals = vals,
                     .alpha_vals = direct_alpha_vals(iso),
                     .y_val = y_val};
  rep.x_vals.reserve(a.size());
  for (const auto& xi : rep.tuple.x) rep.x_vals.push_back(xi.valuation_or_throw());

  rep.all_positive = std::all_of(rep.x_vals.begin(), rep.x_vals.end(),
                                 [](const PExp& v) { return v.is_positive(); });

  int m = profile.m();
  rep.xn0_checked = profile.sorted_ascending();
  if (rep.xn0_checked) {
    rep.xn0_expected = y_val - vals[static_cast<size_t>(m)];
    rep.xn0_ok = rep.x_vals[static_cast<size_t>(m)] == rep.xn0_expected;
  }

  rep.ofe_ok = true;
  for (int i = 0; i <= m; ++i) {
    PExp cur = vals[static_cast<size_t>(i)] +
               algebra::wp(rep.tuple.x[static_cast<size_t>(i)]).valuation_or_throw();
    if (i == 0)
      rep.ofe_value = cur;
    else if (!(cur == rep.ofe_value))
      rep.ofe_ok = false;
  }

  int l = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
  rep.ordxi1_ok = true;
  if (!rep.x_vals[static_cast<size_t>(l)].is_negative()) {
    for (int s = 0; s <= m; ++s) {
      if (s == l || !rep.x_vals[static_cast<size_t>(s)].is_positive()) continue;
      ++rep.ordxi1_pairs;
      PExp lhs = rep.alpha_vals[static_cast<size_t>(s)] + rep.x_vals[static_cast<size_t>(s)];
      PExp rhs = rep.alpha_vals[static_cast<size_t>(l)] + rep.x_vals[static_cast<size_t>(l)];
      if (!(lhs > rhs)) rep.ordxi1_ok = false;
    }
  }
  rep.ordxi2_ok = true;
  for (int s = 0; s <= m; ++s) {
    for (int t = 0; t <= m; ++t) {
      if (s == t || !(vals[static_cast<size_t>(s)] < vals[static_cast<size_t>(t)])) continue;
      if (!rep.x_vals[static_cast<size_t>(s)].is_zero()) continue;
      if (rep.x_vals[static_cast<size_t>(t)].is_negative()) continue;
      ++rep.ordxi2_pairs;
      PExp lhs = rep.alpha_vals[static_cast<size_t>(s)];
      PExp rhs = rep.alpha_vals[static_cast<size_t>(t)] + rep.x_vals[static_cast<size_t>(t)];
      if (!(lhs < rhs)) rep.ordxi2_ok = false;
    }
  }
  return rep;
}

SmallValResult preimage_small_val(const std::vector<TruncatedSeries>& a,
                                  const TruncatedSeries& u) {
  if (a.size() < 2)
    throw DomainError("the small-valuation preimage needs a tuple of length at least 2");
  ValProfile profile = ValProfile::of_series_tuple(a);
  const auto& vals = profile.vals();
  size_t m = a.size() - 1;
  for (size_t i = 0; i + 2 < a.size(); ++i)
    if (!(vals[i] < vals[i + 1]))
      throw DomainError("prefix (a_0, ..., a_{m-1}) must have strictly ascending valuations");
  PExp u_val = u.valuation_or_throw();
  if (!(u_val > vals[m - 1] && u_val > vals[m]))
    throw DomainError("hypothesis val(u) > max(val(a_{m-1}), val(a_m)) fails");

  auto fit = rho_prime_fit(a);
  auto isop = moore::build_iso(fit.a_prime);
  auto prefix = moore::f_inv_apply(isop, u);

  // Last coordinate: a_m wp(x_m) = a_0 wp(x_0) with a positive-valuation
  // right side, solved by the convergent root.
  TruncatedSeries z = a[0] * algebra::wp(prefix.x[0]) * a[m].inverse();
  TruncatedSeries xm = algebra::wp_root_pos(z);

  std::vector<TruncatedSeries> x = prefix.x;
  x.push_back(xm);
  auto iso = moore::build_iso(a);
  TruncatedSeries w = iso.alpha[m].inverse() * moore::f_apply(iso, x);

  PExp w_val = w.valuation_or_throw();
  SmallValResult res{.w = std::move(w),
                     .tuple = moore::GaTuple<TruncatedSeries>{a, std::move(x)},
                     .fit = std::move(fit),
                     .u_val = u_val,
                     .w_val = w_val};
  res.val_ok = w_val.is_positive() && w_val < u_val;
  res.rho_ok = substrate_eq(rho_prime_eval(res.fit, res.w), u);
  return res;
}

RootResult as_root_in_maximal_ideal(const std::vector<TruncatedSeries>& a,
                                    const TruncatedSeries& y) {
  PExp y_val = y.valuation_or_throw();
  SmallValResult first = preimage_small_val(a, y);
  TruncatedSeries c = y * algebra::wp(first.w).inverse();
  PExp c_val = c.valuation_or_throw();
  bool c_val_ok = c_val == y_val - first.w_val && c_val.is_positive();
  SmallValResult second = preimage_small_val(a, c * y);
  RootResult res{.first = std::move(first),
                 .c = std::move(c),
                 .second = std::move(second),
                 .y_val = y_val,
                 .c_val = c_val,
                 .c_val_ok = c_val_ok};
  res.root_ok = substrate_eq(algebra::wp(res.second.w), y);
  res.wprime_positive = res.second.w_val.is_positive();
  return res;
}

BGrid build_b_grid(int n, int ell, const TruncatedSeries& y, int gap) {
  if (n < 1 || ell < 1) throw DomainError("grid dimensions must be positive");
  PExp y_val = y.valuation_or_throw();
  if (!y_val.is_positive()) throw DomainError("reference value must have positive valuation");
  int p = y.field()->p();
  if (gap < 1) throw DomainError("schedule gap must satisfy p^gap > n");
  long long pg = 1;
  for (int i = 0; i < gap && pg <= n; ++i) pg *= p;
  if (pg <= n) throw DomainError("schedule gap must satisfy p^gap > n");

  BGrid grid;
  grid.n = n;
  grid.ell = ell;
  grid.gap = gap;
  grid.y_val = y_val;

  /* Row-nested scales: the flattened order (j outer, l inner) carries strictly
     growing valuations, so every entry of row j+1 sits above all of row j.
     Each product takes one factor per row, hence the row-(n-1) column choice
     dominates, then row n-2, ...: exactly the reversed-lex law. */
  algebra::GFElem one = y.field()->one();
  PExp b_prec = y_val.times(n + 1);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < ell; ++l) {
      int s = (n * ell - (j * ell + l)) * gap;
      PExp v = y_val.div_pow_p(s);
      grid.b.push_back(TruncatedSeries::monomial(y.field(), y.cap(), one, v, b_prec));
      grid.b_vals.push_back(v);
    }
  }

  auto bval = [&](int j, int l) { return grid.b_vals[static_cast<size_t>(j * ell + l)]; };
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < ell; ++l)
      if (!bval(j, l).is_positive())
        throw DomainError("grid constraint violated: 0 < (j+1) val(b_{j,l})");
  for (int j = 0; j + 1 < n; ++j)
    if (!(bval(j, ell - 1) < bval(j + 1, 0)))
      throw DomainError("grid constraint violated: val(b_{j,ell-1}) < val(b_{j+1,0})");
  for (int l = 0; l + 1 < ell; ++l)
    for (int j = 0; j < n; ++j)
      if (!(bval(j, l).times(j + 1) < bval(j, l + 1)))
        throw DomainError("grid constraint violated: (j+1) val(b_{j,l}) < val(b_{j,l+1})");
  if (!(bval(n - 1, ell - 1).times(n) < y_val))
    throw DomainError("grid constraint violated: n val(b_{n-1,ell-1}) < val(y)");
  grid.constraints_ok = true;

  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (;;) {
    TruncatedSeries prod = grid.at(0, idx[0]);
    for (int j = 1; j < n; ++j) prod = prod * grid.at(j, idx[static_cast<size_t>(j)]);
    grid.products.push_back(BGridProduct{idx, prod.valuation_or_throw()});
    int j = n - 1;
    while (j >= 0 && idx[static_cast<size_t>(j)] + 1 == ell) idx[static_cast<size_t>(j--)] = 0;
    if (j < 0) break;
    ++idx[static_cast<size_t>(j)];
  }

  grid.in_range_ok = std::all_of(grid.products.begin(), grid.products.end(),
                                 [&](const BGridProduct& pr) {
                                   return pr.val.is_positive() && pr.val < y_val;
                                 });

  auto rev_lex_less = [](const std::vector<int>& a_, const std::vector<int>& b_) {
    return std::lexicographical_compare(a_.rbegin(), a_.rend(), b_.rbegin(), b_.rend());
  };
  grid.lex_law_ok = true;
  for (size_t i = 0; i < grid.products.size(); ++i)
    for (size_t j = 0; j < grid.products.size(); ++j) {
      if (i == j) continue;
      bool by_val = grid.products[i].val < grid.products[j].val;
      bool by_lex = rev_lex_less(grid.products[i].idx, grid.products[j].idx);
      if (by_val != by_lex) grid.lex_law_ok = false;
    }
  return grid;
}

}  // namespace valo
}  // namespace ndep
