#pragma once

#include <vector>

#include "ndep/moore.hpp"
#include "ndep/pexp.hpp"
#include "ndep/series.hpp"

namespace ndep {
namespace valo {

using algebra::PExp;
using algebra::TruncatedSeries;

/* Valuation profile (val(a_0), ..., val(a_m)) of a coefficient tuple.
   Entries must be pairwise distinct and strictly positive. */
class ValProfile {
public:
  explicit ValProfile(std::vector<PExp> vals);
  static ValProfile of_series_tuple(const std::vector<TruncatedSeries>& a);

  int m() const { return static_cast<int>(vals_.size()) - 1; }
  int p() const { return vals_.front().p(); }
  const std::vector<PExp>& vals() const { return vals_; }
  bool sorted_ascending() const;

private:
  std::vector<PExp> vals_;
};

/* Closed form for the valuations of the isomorphism coefficients:
     val(alpha_i) = val(a_i)/p^{m-i} + sum_{j=i}^{m-1} (p-1)/p^{m-j} val(a_{j+1}).
   With sorted_ascending the profile must already be strictly increasing;
   otherwise the values are computed for the sorted profile and mapped back
   through the rank permutation (val(alpha'_i) = val(alpha_{sigma(i)})). */
std::vector<PExp> alpha_val_closed_form(const ValProfile& profile, bool sorted_ascending);

struct AlphaValReport {
  std::vector<PExp> a_vals;
  std::vector<PExp> direct;       // from build_iso on the series substrate
  std::vector<PExp> closed_form;  // rank-permuted closed form
  bool match = false;
  bool increasing_when_sorted = false;
  bool permutation_rule_checked = false;  // all sigma tried (only for m <= 2)
  bool permutation_rule_ok = false;
  bool passed() const {
    return match && increasing_when_sorted &&
           (!permutation_rule_checked || permutation_rule_ok);
  }
};

/* Computes alpha directly and checks it against the closed form; for short
   tuples additionally checks the permutation rule for every reordering. */
AlphaValReport verify_alpha_vals(const std::vector<TruncatedSeries>& a);

/* val(alpha_l) = val(a_l) and val(alpha_s) < val(a_l) for s != l, valid when
   val(a_l) is strictly maximal in the profile (error otherwise). */
bool min_val_check(const std::vector<TruncatedSeries>& a, int l);

struct PreimageReport {
  moore::GaTuple<TruncatedSeries> tuple;  // x = f_a^{-1}(y)
  std::vector<PExp> a_vals;
  std::vector<PExp> alpha_vals;
  PExp y_val;
  std::vector<PExp> x_vals;
  bool all_positive = false;  // val(x_j) > 0 for all j
  bool xn0_checked = false;   // only when the profile is sorted ascending
  PExp xn0_expected;          // val(y) - val(a_m)
  bool xn0_ok = false;
  PExp ofe_value;  // the common value val(a_i) + val(x_i^p - x_i)
  bool ofe_ok = false;
  int ordxi1_pairs = 0;
  bool ordxi1_ok = false;
  int ordxi2_pairs = 0;  // hypothesis demands val(x_s) = 0; may be vacuous
  bool ordxi2_ok = false;
  bool passed() const {
    return all_positive && (!xn0_checked || xn0_ok) && ofe_ok && ordxi1_ok && ordxi2_ok;
  }
};

/* Preimage x = f_a^{-1}(y) under the hypothesis val(a_j) < val(y) for all j,
   with the valuation facts checked on the computed data. */
PreimageReport preimage_valuations(const std::vector<TruncatedSeries>& a,
                                   const TruncatedSeries& y);

/* rho'(t) = f_{a'} (pi (f_a^{-1} (alpha_m t))) as an explicit additive
   polynomial sum_j gamma_j t^{p^j}; the shape gamma_1 = c, gamma_0 = -c,
   gamma_{>=2} = 0 is a theorem, so a violation throws (bug detector). */
template <class E>
struct RhoFit {
  std::vector<E> a;
  std::vector<E> a_prime;
  E alpha_m;             // mu(t) = alpha_m * t
  std::vector<E> gamma;  // rho'(t) = sum_j gamma_j t^{p^j}
  E c;                   // rho'(t) = c (t^p - t)
};

template <class E>
E rho_prime_eval(const RhoFit<E>& fit, const E& t) {
  E acc = zero_like(t);
  E v = t;
  for (size_t j = 0; j < fit.gamma.size(); ++j) {
    acc = acc + fit.gamma[j] * v;
    if (j + 1 < fit.gamma.size()) v = frobenius(v, 1);
  }
  return acc;
}

template <class E>
RhoFit<E> rho_prime_fit(const std::vector<E>& a) {
  if (a.size() < 2)
    throw DomainError("rho' needs a tuple of length at least 2 (the projection drops a coordinate)");
  auto iso = moore::build_iso(a);
  std::vector<E> ap(a.begin(), a.end() - 1);
  auto isop = moore::build_iso(ap);
  int n = static_cast<int>(a.size());
  E am = iso.alpha.back();
  // gamma_j = (sum_{i < m} alpha'_i beta_{i,j}) * alpha_m^{p^j}
  std::vector<E> gamma;
  gamma.reserve(a.size());
  E amp = am;
  for (int j = 0; j < n; ++j) {
    E s = zero_like(am);
    for (int i = 0; i + 1 < n; ++i) s = s + isop.alpha[static_cast<size_t>(i)] * iso.beta.at(i, j);
    gamma.push_back(s * amp);
    if (j + 1 < n) amp = frobenius(amp, 1);
  }
  E c = gamma[1];
  if (is_zero(c)) throw ShapeError("rho' degenerated: linear coefficient vanishes");
  if (!substrate_eq(gamma[0], -c))
    throw ShapeError("rho' is not of the shape c(t^p - t): constant-row coefficient mismatch");
  for (int j = 2; j < n; ++j)
    if (!substrate_eq(gamma[static_cast<size_t>(j)], zero_like(c)))
      throw ShapeError("rho' is not of the shape c(t^p - t): higher Frobenius coefficient survives");
  return RhoFit<E>{a, std::move(ap), std::move(am), std::move(gamma), std::move(c)};
}

struct SmallValResult {
  TruncatedSeries w;
  moore::GaTuple<TruncatedSeries> tuple;  // the lifted preimage of u under rho'
  RhoFit<TruncatedSeries> fit;
  PExp u_val;
  PExp w_val;
  bool val_ok = false;  // 0 < val(w) < val(u)
  bool rho_ok = false;  // rho'(w) = u up to precision
  bool passed() const { return val_ok && rho_ok; }
};

/* Small-valuation preimage under rho': lifts u through f_{a'}^{-1}, solves the
   remaining Artin-Schreier equation for the last coordinate, and pushes the
   full tuple back through f_a.  Requires (val(a_0), ..., val(a_{m-1})) sorted
   strictly ascending and val(u) > max(val(a_{m-1}), val(a_m)). */
SmallValResult preimage_small_val(const std::vector<TruncatedSeries>& a,
                                  const TruncatedSeries& u);

struct RootResult {
  SmallValResult first;   // w for u = y
  TruncatedSeries c;      // y / wp(w)
  SmallValResult second;  // w' for u = c y
  PExp y_val;
  PExp c_val;
  bool c_val_ok = false;  // val(c) = val(y) - val(w) > 0
  bool root_ok = false;   // wp(w') = y up to precision
  bool wprime_positive = false;
  const TruncatedSeries& wprime() const { return second.w; }
  bool passed() const {
    return first.passed() && second.passed() && c_val_ok && root_ok && wprime_positive;
  }
};

/* Artin-Schreier root inside the maximal ideal: w' with wp(w') = y and
   val(w') > 0, via two runs of preimage_small_val. */
RootResult as_root_in_maximal_ideal(const std::vector<TruncatedSeries>& a,
                                    const TruncatedSeries& y);

struct BGridProduct {
  std::vector<int> idx;  // (l_0, ..., l_{n-1})
  PExp val;
};

struct BGrid {
  int n = 0;
  int ell = 0;
  int gap = 0;
  PExp y_val;
  std::vector<TruncatedSeries> b;  // b_{j,l} at index j*ell + l
  std::vector<PExp> b_vals;
  std::vector<BGridProduct> products;  // all ell^n products, odometer order
  bool constraints_ok = false;
  bool in_range_ok = false;  // every product valuation lies in (0, val(y))
  bool lex_law_ok = false;   // valuation order == reversed-lex order of indices
  const TruncatedSeries& at(int j, int l) const {
    return b[static_cast<size_t>(j * ell + l)];
  }
  bool passed() const { return constraints_ok && in_range_ok && lex_law_ok; }
};

/* Grid b_{j,l} = t^{val(y)/p^{s(j,l)}} with the exponential schedule
   s(j,l) = (n*ell - (j*ell + l)) * gap, requiring p^gap > n.  Rows form
   nested scale blocks (all of row j below all of row j+1); the selection
   constraints and the reversed-lex product law are verified post-hoc, not
   trusted. */
BGrid build_b_grid(int n, int ell, const TruncatedSeries& y, int gap);

}  // namespace valo
}  // namespace ndep
