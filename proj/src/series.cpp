#include "ndep/series.hpp"

#include <algorithm>
#include <map>

namespace ndep {
namespace algebra {

namespace {

/* Exponents with denomLog <= cap live on the lattice (1/p^cap) Z; the fast
   arithmetic paths index them by num * p^(cap - denomLog). */
constexpr __int128 kLatticeMax = static_cast<__int128>(4) * 1000 * 1000 * 1000 * 1000 * 1000 * 1000;

long long lattice_index(const PExp& e, int cap) {
  __int128 v = e.num();
  for (int i = e.denom_log(); i < cap; ++i) v *= e.p();
  return static_cast<long long>(v);
}

bool lattice_fits(const PExp& e, int cap) {
  __int128 v = e.num() < 0 ? -static_cast<__int128>(e.num()) : e.num();
  for (int i = e.denom_log(); i < cap; ++i) {
    v *= e.p();
    if (v > kLatticeMax) return false;
  }
  return true;
}

/* Smallest lattice index at or above `bound` (strictly-below-precision
   semantics: indices < the returned value are kept).  Precision markers may
   carry denomLog beyond the cap, hence the ceiling branch. */
__int128 lattice_strict_bound(const PExp& bound, int cap, int p) {
  if (bound.denom_log() <= cap) {
    __int128 v = bound.num();
    for (int i = bound.denom_log(); i < cap; ++i) v *= p;
    return v;
  }
  __int128 den = 1;
  for (int i = cap; i < bound.denom_log(); ++i) {
    den *= p;
    if (den > (static_cast<__int128>(1) << 100)) return bound.num() > 0 ? 1 : 0;
  }
  __int128 num = bound.num();
  if (num >= 0) return (num + den - 1) / den;  // ceil
  return -((-num) / den);
}

constexpr long long kDenseWindowMax = 1LL << 21;

}  // namespace

TruncatedSeries::TruncatedSeries(FieldPtr field, int cap, std::vector<SeriesTerm> terms,
                                 PExp precision)
    : field_(std::move(field)), cap_(cap), prec_(precision), terms_(std::move(terms)) {
  if (cap_ < 0) throw DomainError("perfection cap must be >= 0");
  if (prec_.p() != field_->p()) throw DomainError("precision characteristic mismatch");
  normalize();
}

void TruncatedSeries::normalize() {
  std::map<PExp, GFElem, std::less<PExp>> acc;
  for (auto& t : terms_) {
    if (t.exp.p() != field_->p()) throw DomainError("term exponent characteristic mismatch");
    if (t.exp.denom_log() > cap_)
      throw CapOverflow("term exponent " + t.exp.str() + " exceeds perfection cap " +
                        std::to_string(cap_));
    auto it = acc.find(t.exp);
    if (it == acc.end())
      acc.emplace(t.exp, t.coeff);
    else
      it->second = it->second + t.coeff;
  }
  terms_.clear();
  for (auto& [e, c] : acc) {
    if (c.is_zero() || !(e < prec_)) continue;
    terms_.push_back({e, c});
  }
}

TruncatedSeries TruncatedSeries::zero(const FieldPtr& field, int cap, const PExp& precision) {
  return TruncatedSeries(field, cap, {}, precision);
}

TruncatedSeries TruncatedSeries::monomial(const FieldPtr& field, int cap, const GFElem& coeff,
                                          const PExp& exp, const PExp& precision) {
  return TruncatedSeries(field, cap, {{exp, coeff}}, precision);
}

std::optional<PExp> TruncatedSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().exp;
}

PExp TruncatedSeries::valuation_or_throw() const {
  if (terms_.empty())
    throw PrecisionLoss("valuation requested of a series with no terms below precision " +
                        prec_.str());
  return terms_.front().exp;
}

GFElem TruncatedSeries::lead_coeff() const {
  if (terms_.empty()) throw PrecisionLoss("leading coefficient of a series with no visible terms");
  return terms_.front().coeff;
}

void TruncatedSeries::require_compatible(const TruncatedSeries& o) const {
  if (!field_->same_as(*o.field_)) throw DomainError("series over different fields");
  if (cap_ != o.cap_) throw DomainError("series with different perfection caps");
}

TruncatedSeries TruncatedSeries::operator-() const {
  std::vector<SeriesTerm> r;
  r.reserve(terms_.size());
  for (const auto& t : terms_) r.push_back({t.exp, -t.coeff});
  return TruncatedSeries(field_, cap_, std::move(r), prec_);
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  require_compatible(o);
  PExp prec = min(prec_, o.prec_);
  std::vector<SeriesTerm> r;
  r.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    bool left = j == o.terms_.size() ||
                (i < terms_.size() && terms_[i].exp < o.terms_[j].exp);
    bool right = i == terms_.size() ||
                 (j < o.terms_.size() && o.terms_[j].exp < terms_[i].exp);
    if (left) {
      if (!(terms_[i].exp < prec)) break;  // sorted: everything after is dropped too
      r.push_back(terms_[i]);
      ++i;
    } else if (right) {
      if (!(o.terms_[j].exp < prec)) {
        ++j;
        continue;
      }
      r.push_back(o.terms_[j]);
      ++j;
    } else {
      if (!(terms_[i].exp < prec)) break;
      GFElem c = terms_[i].coeff + o.terms_[j].coeff;
      if (!c.is_zero()) r.push_back({terms_[i].exp, c});
      ++i;
      ++j;
    }
  }
  return TruncatedSeries(field_, cap_, std::move(r), prec, Normalized{});
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  return *this + (-o);
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  require_compatible(o);
  /* Coefficients of the product are certified below
     min(prec(x) + val(y), prec(y) + val(x)); an empty factor contributes its
     precision as the valuation lower bound. */
  PExp vx = terms_.empty() ? prec_ : terms_.front().exp;
  PExp vy = o.terms_.empty() ? o.prec_ : o.terms_.front().exp;
  PExp prec = min(prec_ + vy, o.prec_ + vx);
  if (terms_.empty() || o.terms_.empty())
    return TruncatedSeries(field_, cap_, {}, prec);

  if (field_->has_tables() && lattice_fits(terms_.back().exp, cap_) &&
      lattice_fits(o.terms_.back().exp, cap_) && lattice_fits(terms_.front().exp, cap_) &&
      lattice_fits(o.terms_.front().exp, cap_)) {
    long long bx = lattice_index(terms_.front().exp, cap_);
    long long by = lattice_index(o.terms_.front().exp, cap_);
    __int128 base = static_cast<__int128>(bx) + by;
    __int128 w = lattice_strict_bound(prec, cap_, field_->p()) - base;
    if (w <= 0) return TruncatedSeries(field_, cap_, {}, prec);
    if (w <= kDenseWindowMax) {
      long long W = static_cast<long long>(w);
      std::vector<long long> ix, iy;
      std::vector<uint16_t> cx, cy;
      ix.reserve(terms_.size());
      cx.reserve(terms_.size());
      for (const auto& t : terms_) {
        long long rel = lattice_index(t.exp, cap_) - bx;
        if (rel >= W) break;
        ix.push_back(rel);
        cx.push_back(static_cast<uint16_t>(t.coeff.index()));
      }
      iy.reserve(o.terms_.size());
      cy.reserve(o.terms_.size());
      for (const auto& t : o.terms_) {
        long long rel = lattice_index(t.exp, cap_) - by;
        if (rel >= W) break;
        iy.push_back(rel);
        cy.push_back(static_cast<uint16_t>(t.coeff.index()));
      }
      std::vector<uint16_t> acc(static_cast<size_t>(W), 0);
      for (size_t i = 0; i < ix.size(); ++i)
        for (size_t j = 0; j < iy.size(); ++j) {
          long long d = ix[i] + iy[j];
          if (d >= W) break;
          acc[static_cast<size_t>(d)] =
              field_->add_idx(acc[static_cast<size_t>(d)], field_->mul_idx(cx[i], cy[j]));
        }
      std::vector<SeriesTerm> out;
      for (long long d = 0; d < W; ++d)
        if (acc[static_cast<size_t>(d)])
          out.push_back({PExp(static_cast<long long>(base + d), cap_, field_->p()),
                         field_->from_int(acc[static_cast<size_t>(d)])});
      return TruncatedSeries(field_, cap_, std::move(out), prec, Normalized{});
    }
  }
  std::vector<SeriesTerm> r;
  r.reserve(terms_.size() * o.terms_.size());
  for (const auto& s : terms_)
    for (const auto& t : o.terms_) r.push_back({s.exp + t.exp, s.coeff * t.coeff});
  return TruncatedSeries(field_, cap_, std::move(r), prec);
}

TruncatedSeries TruncatedSeries::inverse(const std::optional<PExp>& prec_limit) const {
  if (terms_.empty()) throw PrecisionLoss("inverse of a series with no visible terms");
  PExp e0 = terms_.front().exp;
  GFElem c0 = terms_.front().coeff;
  PExp out_prec = prec_ - e0 - e0;  // relative precision is preserved by inversion
  if (prec_limit.has_value()) out_prec = min(out_prec, *prec_limit);
  PExp rel = out_prec + e0;
  GFElem c0inv = c0.inverse();

  if (terms_.size() == 1) {
    std::vector<SeriesTerm> out;
    if (-e0 < out_prec) out.push_back({-e0, c0inv});
    return TruncatedSeries(field_, cap_, std::move(out), out_prec, Normalized{});
  }

  if (field_->has_tables() && lattice_fits(e0, cap_) && lattice_fits(terms_.back().exp, cap_)) {
    __int128 w = lattice_strict_bound(rel, cap_, field_->p());
    if (w <= 0) return TruncatedSeries(field_, cap_, {}, out_prec, Normalized{});
    if (w <= kDenseWindowMax) {
      /* x = c0 t^e0 (1 + u); solve (1 + u) b = 1 coefficient by coefficient
         on the lattice window, then scale by c0^{-1} t^{-e0}. */
      long long W = static_cast<long long>(w);
      long long b0 = lattice_index(e0, cap_);
      std::vector<long long> ui;
      std::vector<uint16_t> uc;
      for (size_t i = 1; i < terms_.size(); ++i) {
        long long relidx = lattice_index(terms_[i].exp, cap_) - b0;
        if (relidx >= W) break;
        ui.push_back(relidx);
        uc.push_back(static_cast<uint16_t>((terms_[i].coeff * c0inv).index()));
      }
      std::vector<uint16_t> b(static_cast<size_t>(W), 0);
      b[0] = 1;
      for (long long n = 1; n < W; ++n) {
        uint16_t s = 0;
        for (size_t i = 0; i < ui.size(); ++i) {
          if (ui[i] > n) break;
          uint16_t bn = b[static_cast<size_t>(n - ui[i])];
          if (bn) s = field_->add_idx(s, field_->mul_idx(uc[i], bn));
        }
        b[static_cast<size_t>(n)] = field_->neg_idx(s);
      }
      uint16_t c0i = static_cast<uint16_t>(c0inv.index());
      std::vector<SeriesTerm> out;
      for (long long n = 0; n < W; ++n)
        if (b[static_cast<size_t>(n)])
          out.push_back({PExp(n - b0, cap_, field_->p()),
                         field_->from_int(field_->mul_idx(b[static_cast<size_t>(n)], c0i))});
      return TruncatedSeries(field_, cap_, std::move(out), out_prec, Normalized{});
    }
  }

  /* x = c0 t^e0 (1 + u); 1/x = c0^{-1} t^{-e0} sum (-u)^j, carried to relative
     precision `rel`. */
  std::vector<SeriesTerm> uterms;
  for (size_t i = 1; i < terms_.size(); ++i)
    uterms.push_back({terms_[i].exp - e0, terms_[i].coeff * c0inv});
  TruncatedSeries u(field_, cap_, std::move(uterms), rel);
  TruncatedSeries acc = TruncatedSeries::monomial(field_, cap_, field_->one(),
                                                  PExp(0, 0, field_->p()), rel);
  TruncatedSeries powu = acc;
  while (u.has_terms()) {
    powu = (powu * (-u)).truncate_to(rel);
    if (!powu.has_terms()) break;
    acc = acc + powu;
  }
  std::vector<SeriesTerm> out;
  out.reserve(acc.terms().size());
  for (const auto& t : acc.terms()) out.push_back({t.exp - e0, t.coeff * c0inv});
  return TruncatedSeries(field_, cap_, std::move(out), out_prec);
}

TruncatedSeries TruncatedSeries::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  TruncatedSeries r = one_like(*this);
  TruncatedSeries b = *this;
  unsigned long long u = static_cast<unsigned long long>(e);
  while (u > 0) {
    if (u & 1) r = r * b;
    b = b * b;
    u >>= 1;
  }
  return r;
}

TruncatedSeries TruncatedSeries::frobenius(int i) const {
  std::vector<SeriesTerm> r;
  r.reserve(terms_.size());
  if (i >= 0) {
    for (const auto& t : terms_) r.push_back({t.exp.mul_pow_p(i), t.coeff.frobenius(i)});
    return TruncatedSeries(field_, cap_, std::move(r), prec_.mul_pow_p(i));
  }
  int e = -i;
  for (const auto& t : terms_) {
    PExp ex = t.exp.div_pow_p(e);
    if (ex.denom_log() > cap_)
      throw CapOverflow("inverse Frobenius pushes exponent " + t.exp.str() +
                        " beyond perfection cap " + std::to_string(cap_));
    r.push_back({ex, t.coeff.frobenius(i)});
  }
  return TruncatedSeries(field_, cap_, std::move(r), prec_.div_pow_p(e));
}

TruncatedSeries TruncatedSeries::truncate_to(const PExp& bound) const {
  return TruncatedSeries(field_, cap_, terms_, min(prec_, bound));
}

std::string TruncatedSeries::str() const {
  std::string s;
  for (const auto& t : terms_) {
    if (!s.empty()) s += " + ";
    std::string cs = t.coeff.str();
    if (t.exp.is_zero()) {
      s += cs;
      continue;
    }
    if (cs != "1") s += "(" + cs + ")*";
    s += "t^(" + t.exp.str() + ")";
  }
  if (s.empty()) s = "0";
  return s + " + O(t^(" + prec_.str() + "))";
}

TruncatedSeries wp(const TruncatedSeries& x) { return x.frobenius(1) - x; }

TruncatedSeries wp_root_pos(const TruncatedSeries& z) {
  auto v = z.valuation();
  if (!v.has_value() || !v->is_positive())
    throw DomainError("wp_root_pos requires a visible positive valuation");
  PExp prec = z.precision();
  TruncatedSeries acc = TruncatedSeries::zero(z.field(), z.cap(), prec);
  TruncatedSeries w = z.truncate_to(prec);
  while (w.has_terms()) {
    acc = acc + w;
    w = w.frobenius(1).truncate_to(prec);
  }
  return -acc;
}

namespace {

/* phi^{-j} that drops terms the cap cannot carry; the result precision is
   lowered to the smallest dropped exponent so nothing is silently certified. */
TruncatedSeries frobenius_inv_capped(const TruncatedSeries& x, int j) {
  std::vector<SeriesTerm> keep;
  std::optional<PExp> dropped;
  for (const auto& t : x.terms()) {
    PExp ex = t.exp.div_pow_p(j);
    if (ex.denom_log() > x.cap()) {
      if (!dropped.has_value() || ex < *dropped) dropped = ex;
      continue;
    }
    keep.push_back({ex, t.coeff.frobenius(-j)});
  }
  PExp prec = x.precision().div_pow_p(j);
  if (dropped.has_value()) prec = min(prec, *dropped);
  return TruncatedSeries(x.field(), x.cap(), std::move(keep), prec);
}

}  // namespace

TruncatedSeries wp_root_neg(const TruncatedSeries& u) {
  auto v = u.valuation();
  if (!v.has_value() || !v->is_negative())
    throw DomainError("wp_root_neg requires a visible negative valuation");
  int reach = u.cap() - v->denom_log();
  if (reach < 1)
    throw CapOverflow("perfection cap " + std::to_string(u.cap()) +
                      " cannot carry a root of valuation " + v->div_pow_p(1).str());
  TruncatedSeries acc = frobenius_inv_capped(u, 1);
  for (int j = 2; j <= reach; ++j) acc = acc + frobenius_inv_capped(u, j);
  /* The first wholly omitted summand phi^{-(reach+1)}(u) starts at
     val(u)/p^{reach+1}; precision markers may exceed the cap. */
  acc = acc.truncate_to(v->div_pow_p(reach + 1));
  if (!(acc.valuation_or_throw() == v->div_pow_p(1)))
    throw ShapeError("negative-valuation root lost its leading term");
  return acc;
}

std::vector<TruncatedSeries> as_root_descent(const TruncatedSeries& y, int steps) {
  auto v = y.valuation();
  if (!v.has_value() || !v->is_positive())
    throw DomainError("descent requires a start of visible positive valuation");
  if (steps < 0) throw DomainError("descent steps must be >= 0");
  std::vector<TruncatedSeries> chain = {y};
  for (int i = 1; i <= steps; ++i) {
    TruncatedSeries u = chain.back().inverse();
    TruncatedSeries e = wp_root_neg(u).inverse();
    if (!(e.valuation_or_throw() == v->div_pow_p(i)))
      throw ShapeError("descent valuation drifted at step " + std::to_string(i));
    chain.push_back(e);
  }
  return chain;
}

namespace {

/* Exact constants are known to every precision; carry a marker far above any
   exponent that arises in practice so that derived precisions come from the
   genuinely truncated operands alone. */
PExp exact_precision(int p) { return PExp::integer(1LL << 40, p); }

}  // namespace

TruncatedSeries zero_like(const TruncatedSeries& x) {
  return TruncatedSeries::zero(x.field(), x.cap(), exact_precision(x.field()->p()));
}

TruncatedSeries one_like(const TruncatedSeries& x) {
  return TruncatedSeries::monomial(x.field(), x.cap(), x.field()->one(),
                                   PExp(0, 0, x.field()->p()), exact_precision(x.field()->p()));
}

bool substrate_eq(const TruncatedSeries& a, const TruncatedSeries& b) {
  return !(a - b).has_terms();
}

}  // namespace algebra
}  // namespace ndep
