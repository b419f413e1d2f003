#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndep/gf.hpp"
#include "ndep/pexp.hpp"

namespace ndep {
namespace algebra {

struct SeriesTerm {
  PExp exp;
  GFElem coeff;
};

/* Truncated series over F_{p^k} with exponents in Z[1/p].  Invariants:
   terms are sorted by strictly increasing exponent, carry nonzero
   coefficients, lie strictly below `precision`, and have exponent
   denominatorLog <= cap.  The precision marker itself may exceed the cap
   (it is a bound, not a term).  Coefficients at exponents >= precision are
   unknown; comparisons there are errors, never silent truncations. */
class TruncatedSeries {
public:
  TruncatedSeries(FieldPtr field, int cap, std::vector<SeriesTerm> terms, PExp precision);

  static TruncatedSeries zero(const FieldPtr& field, int cap, const PExp& precision);
  static TruncatedSeries monomial(const FieldPtr& field, int cap, const GFElem& coeff,
                                  const PExp& exp, const PExp& precision);

  const FieldPtr& field() const { return field_; }
  int cap() const { return cap_; }
  const PExp& precision() const { return prec_; }
  const std::vector<SeriesTerm>& terms() const { return terms_; }
  bool has_terms() const { return !terms_.empty(); }

  /* Valuation; nullopt means "no terms below precision" (zero to precision). */
  std::optional<PExp> valuation() const;
  PExp valuation_or_throw() const;
  GFElem lead_coeff() const;

  TruncatedSeries operator-() const;
  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;

  /* Multiplicative inverse of a series with a visible leading term.  When
     `prec_limit` is given the result precision is clamped to it, bounding the
     work of the geometric expansion. */
  TruncatedSeries inverse(const std::optional<PExp>& prec_limit = std::nullopt) const;
  TruncatedSeries pow(long long e) const;

  /* phi^i termwise; i < 0 raises denominators and is a typed cap-overflow
     error if any term exponent would leave Z[1/p] at the cap. */
  TruncatedSeries frobenius(int i) const;

  /* Drop terms at or above `bound` and lower precision to min(precision, bound). */
  TruncatedSeries truncate_to(const PExp& bound) const;

  std::string str() const;

private:
  /* Trusted constructor for terms already sorted, nonzero, capped, and below
     precision (the arithmetic fast paths build them that way). */
  struct Normalized {};
  TruncatedSeries(FieldPtr field, int cap, std::vector<SeriesTerm> terms, PExp precision,
                  Normalized)
      : field_(std::move(field)), cap_(cap), prec_(precision), terms_(std::move(terms)) {}

  void normalize();
  void require_compatible(const TruncatedSeries& o) const;

  FieldPtr field_;
  int cap_;
  PExp prec_;
  std::vector<SeriesTerm> terms_;
};

/* The Artin-Schreier operator x^p - x. */
TruncatedSeries wp(const TruncatedSeries& x);

/* Root of wp(x) = z for val(z) > 0: x = -sum_{i>=0} z^{p^i}, truncated at the
   precision of z.  val(x) = val(z). */
TruncatedSeries wp_root_pos(const TruncatedSeries& z);

/* Root of wp(x) = u for val(u) < 0: x = sum_{j>=1} phi^{-j}(u) carried as far
   as the perfection cap allows; terms whose exponent denominator would exceed
   the cap are dropped and the precision lowered accordingly.
   val(x) = val(u)/p exactly. */
TruncatedSeries wp_root_neg(const TruncatedSeries& u);

/* Descent chain e_0 = y, e_{i+1} = 1/e with wp(e) = 1/e_i; returns
   (e_0, ..., e_steps) with val(e_i) = val(y)/p^i exactly. */
std::vector<TruncatedSeries> as_root_descent(const TruncatedSeries& y, int steps);

/* Substrate shims (same names as the finite-field overloads). */
TruncatedSeries zero_like(const TruncatedSeries& x);
TruncatedSeries one_like(const TruncatedSeries& x);
inline bool is_zero(const TruncatedSeries& x) { return !x.has_terms(); }
inline TruncatedSeries frobenius(const TruncatedSeries& x, int i) { return x.frobenius(i); }
/* Equality up to the joint precision of the two sides. */
bool substrate_eq(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace algebra
}  // namespace ndep
