#include "ndep/ratfunc.hpp"

#include <algorithm>

namespace ndep {
namespace algebra {

GFPoly::GFPoly(FieldPtr field, std::vector<GFElem> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
  trim();
}

void GFPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

GFPoly GFPoly::t(const FieldPtr& field) {
  return GFPoly(field, {field->zero(), field->one()});
}

GFPoly GFPoly::constant(const GFElem& c) { return GFPoly(c.field(), {c}); }

GFElem GFPoly::lead() const {
  if (c_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return c_.back();
}

GFElem GFPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return field_->zero();
  return c_[static_cast<size_t>(i)];
}

GFPoly GFPoly::operator-() const {
  std::vector<GFElem> r;
  r.reserve(c_.size());
  for (const auto& v : c_) r.push_back(-v);
  return GFPoly(field_, std::move(r));
}

GFPoly GFPoly::operator+(const GFPoly& o) const {
  std::vector<GFElem> r;
  size_t n = std::max(c_.size(), o.c_.size());
  r.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    GFElem v = i < c_.size() ? c_[i] : field_->zero();
    if (i < o.c_.size()) v = v + o.c_[i];
    r.push_back(v);
  }
  return GFPoly(field_, std::move(r));
}

GFPoly GFPoly::operator-(const GFPoly& o) const { return *this + (-o); }

GFPoly GFPoly::operator*(const GFPoly& o) const {
  if (c_.empty() || o.c_.empty()) return GFPoly(field_);
  std::vector<GFElem> r(c_.size() + o.c_.size() - 1, field_->zero());
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
  }
  return GFPoly(field_, std::move(r));
}

bool GFPoly::operator==(const GFPoly& o) const { return (*this - o).is_zero(); }

std::pair<GFPoly, GFPoly> GFPoly::divmod(const GFPoly& d) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  GFPoly r = *this;
  GFPoly q(field_);
  GFElem lead_inv = d.lead().inverse();
  int dd = d.degree();
  while (r.degree() >= dd) {
    int shift = r.degree() - dd;
    GFElem c = r.lead() * lead_inv;
    std::vector<GFElem> mono(static_cast<size_t>(shift + 1), field_->zero());
    mono[static_cast<size_t>(shift)] = c;
    GFPoly m(field_, std::move(mono));
    q = q + m;
    r = r - m * d;
  }
  return {q, r};
}

GFPoly GFPoly::make_monic() const {
  if (is_zero()) return *this;
  return *this * GFPoly::constant(lead().inverse());
}

GFPoly GFPoly::pow(int e) const {
  if (e < 0) throw DomainError("negative polynomial power");
  GFPoly r = GFPoly::constant(field_->one());
  GFPoly b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::string GFPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const GFElem& v = c_[static_cast<size_t>(i)];
    if (v.is_zero()) continue;
    if (!s.empty()) s += " + ";
    std::string cs = v.str();
    if (i == 0) {
      s += cs;
    } else {
      if (cs != "1") s += "(" + cs + ")*";
      s += (i == 1) ? "t" : "t^" + std::to_string(i);
    }
  }
  return s;
}

GFPoly gf_poly_gcd(GFPoly a, GFPoly b) {
  while (!b.is_zero()) {
    GFPoly r = a % b;
    a = b;
    b = r;
  }
  return a.make_monic();
}

GFPoly gf_poly_invmod(const GFPoly& a, const GFPoly& m) {
  const FieldPtr& f = a.field();
  GFPoly r0 = m, r1 = a % m;
  GFPoly s0(f), s1 = GFPoly::constant(f->one());
  while (!r1.is_zero()) {
    GFPoly q = r0 / r1;
    GFPoly r2 = r0 - q * r1;
    GFPoly s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0.degree() != 0) throw DomainError("polynomial not invertible modulo m");
  return (s0 * GFPoly::constant(r0.lead().inverse())) % m;
}

namespace {

GFPoly poly_powmod(GFPoly base, unsigned __int128 e, const GFPoly& m) {
  GFPoly r = GFPoly::constant(base.field()->one());
  base = base % m;
  while (e > 0) {
    if (e & 1) r = (r * base) % m;
    base = (base * base) % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

bool gf_poly_irreducible(const GFPoly& f) {
  int k = f.degree();
  if (k <= 0) return false;
  if (k == 1) return true;
  unsigned __int128 q = f.field()->size();
  GFPoly x = GFPoly::t(f.field());
  unsigned __int128 qk = 1;
  for (int i = 0; i < k; ++i) qk *= q;
  if (!((poly_powmod(x, qk, f) - x) % f).is_zero()) return false;
  for (int r = 2; r <= k; ++r) {
    if (k % r != 0 || !is_prime(r)) continue;
    unsigned __int128 qr = 1;
    for (int i = 0; i < k / r; ++i) qr *= q;
    GFPoly g = gf_poly_gcd(f, poly_powmod(x, qr, f) - x);
    if (g.degree() != 0) return false;
  }
  return true;
}

RationalFunction::RationalFunction(FieldPtr field)
    : num_(field), den_(GFPoly::constant(field->one())) {}

RationalFunction::RationalFunction(GFPoly num, GFPoly den) : num_(num.field()), den_(num.field()) {
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = GFPoly(num.field());
    den_ = GFPoly::constant(num.field()->one());
    return;
  }
  GFPoly g = gf_poly_gcd(num, den);
  num = num / g;
  den = den / g;
  GFElem lead_inv = den.lead().inverse();
  num_ = num * GFPoly::constant(lead_inv);
  den_ = den * GFPoly::constant(lead_inv);
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return *this + (-o);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) throw DomainError("division by the zero rational function");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}

bool RationalFunction::operator==(const RationalFunction& o) const {
  return (*this - o).is_zero();
}

std::string RationalFunction::str() const {
  if (den_.degree() == 0) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

Place Place::finite(GFPoly pi) {
  pi = pi.make_monic();
  if (pi.degree() < 1) throw DomainError("finite place needs a non-constant polynomial");
  if (!gf_poly_irreducible(pi)) throw DomainError("finite place polynomial must be irreducible");
  FieldPtr f = pi.field();
  return Place(std::move(f), std::move(pi), false);
}

Place Place::infinite(FieldPtr field) { return Place(std::move(field), std::nullopt, true); }

const GFPoly& Place::pi() const {
  if (infinite_) throw DomainError("the degree place has no defining polynomial");
  return *pi_;
}

bool Place::operator==(const Place& o) const {
  if (infinite_ != o.infinite_) return false;
  if (infinite_) return true;
  return *pi_ == *o.pi_;
}

std::string Place::str() const { return infinite_ ? "infinity" : pi_->str(); }

namespace {

long long order_at(const GFPoly& f, const GFPoly& pi) {
  long long n = 0;
  GFPoly r = f;
  while (true) {
    auto [q, rem] = r.divmod(pi);
    if (!rem.is_zero()) return n;
    r = q;
    ++n;
  }
}

/* Residue of f at a finite place pi (val >= 0 required): num * den^{-1} in
   F_q[t]/(pi), lifted to the representative of degree < deg(pi). */
GFPoly residue_lift(const RationalFunction& f, const GFPoly& pi) {
  GFPoly deninv = gf_poly_invmod(f.den(), pi);
  return (f.num() % pi * deninv) % pi;
}

/* Limit of f at infinity (val >= 0 required): 0 if deg num < deg den, else
   ratio of leading coefficients. */
GFElem residue_at_infinity(const RationalFunction& f) {
  if (f.is_zero() || f.num().degree() < f.den().degree()) return f.field()->zero();
  return f.num().lead() / f.den().lead();
}

/* Smallest monic irreducible different from `avoid`, by degree then by the
   canonical coefficient enumeration. */
GFPoly first_irreducible_avoiding(const FieldPtr& field, const GFPoly& avoid) {
  for (int d = 1;; ++d) {
    uint64_t bound = 1;
    for (int i = 0; i < d; ++i) bound *= field->size();
    for (uint64_t v = 0; v < bound; ++v) {
      std::vector<GFElem> c;
      uint64_t t = v;
      for (int i = 0; i < d; ++i) {
        c.push_back(field->from_int(t % field->size()));
        t /= field->size();
      }
      c.push_back(field->one());
      GFPoly f(field, std::move(c));
      if (!(f == avoid) && gf_poly_irreducible(f)) return f;
    }
  }
}

}  // namespace

std::optional<long long> rf_valuation(const RationalFunction& f, const Place& v) {
  if (f.is_zero()) return std::nullopt;
  if (v.is_infinite()) return static_cast<long long>(f.den().degree() - f.num().degree());
  return order_at(f.num(), v.pi()) - order_at(f.den(), v.pi());
}

RationalFunction coset_intersect(const RationalFunction& a, const Place& v1,
                                 const RationalFunction& b, const Place& v2) {
  if (v1 == v2) throw DomainError("coset intersection requires distinct places");
  auto va = rf_valuation(a, v1);
  auto vb = rf_valuation(b, v2);
  if (va.has_value() && *va < 0) throw DomainError("center a must be v1-integral");
  if (vb.has_value() && *vb < 0) throw DomainError("center b must be v2-integral");

  const FieldPtr& field = a.field();
  RationalFunction w(field);
  if (!v1.is_infinite() && !v2.is_infinite()) {
    const GFPoly& p1 = v1.pi();
    const GFPoly& p2 = v2.pi();
    GFPoly a1 = residue_lift(a, p1);
    GFPoly a2 = residue_lift(b, p2);
    GFPoly m1 = gf_poly_invmod(p2, p1);  // p2 * m1 = 1 mod p1
    GFPoly m2 = gf_poly_invmod(p1, p2);
    GFPoly lift = (a1 * p2 * m1 + a2 * p1 * m2) % (p1 * p2);
    w = RationalFunction::from_poly(lift);
  } else {
    /* One place is the degree place; build w = r + M/pi'^s with r the limit of
       the infinite-side center and pi' an auxiliary irreducible prime to the
       finite place. */
    const RationalFunction& fin_center = v1.is_infinite() ? b : a;
    const RationalFunction& inf_center = v1.is_infinite() ? a : b;
    const Place& fin = v1.is_infinite() ? v2 : v1;
    GFElem r = residue_at_infinity(inf_center);
    GFPoly pi = fin.pi();
    GFPoly target = residue_lift(fin_center, pi) - GFPoly::constant(r);
    GFPoly aux = first_irreducible_avoiding(field, pi);
    int s = pi.degree();  // aux has degree >= 1, so deg(M) < deg(pi) <= s*deg(aux)
    GFPoly auxpow = aux.pow(s);
    GFPoly M = (target * auxpow) % pi;
    w = RationalFunction::from_poly(GFPoly::constant(r)) + RationalFunction(M, auxpow);
  }

  auto c1 = rf_valuation(w - a, v1);
  auto c2 = rf_valuation(w - b, v2);
  if ((c1.has_value() && *c1 <= 0) || (c2.has_value() && *c2 <= 0))
    throw ShapeError("coset intersection postcondition failed");
  return w;
}

}  // namespace algebra
}  // namespace ndep
