#include "ndep/gf.hpp"

#include <algorithm>

namespace ndep {
namespace algebra {

namespace {

/* Dense polynomials over Z_p, constant term first, used only for modulus
   selection and element arithmetic. */
using ZpPoly = std::vector<int>;

int zp_deg(const ZpPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

void zp_trim(ZpPoly& f) { f.resize(static_cast<size_t>(zp_deg(f) + 1)); }

int zp_inv_scalar(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw DomainError("inverse of zero in F_p");
  int r = 1;
  long long base = a, e = p - 2;
  while (e > 0) {
    if (e & 1) r = static_cast<int>(r * base % p);
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

ZpPoly zp_mul(const ZpPoly& a, const ZpPoly& b, int p) {
  if (a.empty() || b.empty()) return {};
  ZpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<int>((r[i + j] + static_cast<long long>(a[i]) * b[j]) % p);
  }
  zp_trim(r);
  return r;
}

ZpPoly zp_mod(ZpPoly a, const ZpPoly& m, int p) {
  int dm = zp_deg(m);
  int lead_inv = zp_inv_scalar(m[static_cast<size_t>(dm)], p);
  zp_trim(a);
  while (zp_deg(a) >= dm) {
    int da = zp_deg(a);
    int c = static_cast<int>(static_cast<long long>(a[static_cast<size_t>(da)]) * lead_inv % p);
    for (int i = 0; i <= dm; ++i) {
      long long v = a[static_cast<size_t>(da - dm + i)] -
                    static_cast<long long>(c) * m[static_cast<size_t>(i)] % p;
      a[static_cast<size_t>(da - dm + i)] = static_cast<int>(((v % p) + p) % p);
    }
    zp_trim(a);
  }
  return a;
}

ZpPoly zp_powmod(ZpPoly base, unsigned __int128 e, const ZpPoly& m, int p) {
  ZpPoly r = {1};
  base = zp_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) r = zp_mod(zp_mul(r, base, p), m, p);
    base = zp_mod(zp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

ZpPoly zp_gcd(ZpPoly a, ZpPoly b, int p) {
  zp_trim(a);
  zp_trim(b);
  while (!b.empty()) {
    ZpPoly r = zp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

ZpPoly zp_sub(ZpPoly a, const ZpPoly& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  zp_trim(a);
  return a;
}

/* Extended Euclid: returns u with u*a = gcd (mod m); used for inverses where
   gcd(a, m) = 1. */
ZpPoly zp_invmod(const ZpPoly& a, const ZpPoly& m, int p) {
  ZpPoly r0 = m, r1 = zp_mod(a, m, p);
  ZpPoly s0 = {}, s1 = {1};
  while (zp_deg(r1) >= 0) {
    int d0 = zp_deg(r0), d1 = zp_deg(r1);
    if (d0 < d1) {
      std::swap(r0, r1);
      std::swap(s0, s1);
      continue;
    }
    int c = static_cast<int>(static_cast<long long>(r0[static_cast<size_t>(d0)]) *
                             zp_inv_scalar(r1[static_cast<size_t>(d1)], p) % p);
    ZpPoly shift(static_cast<size_t>(d0 - d1 + 1), 0);
    shift[static_cast<size_t>(d0 - d1)] = c;
    r0 = zp_sub(std::move(r0), zp_mul(shift, r1, p), p);
    s0 = zp_sub(std::move(s0), zp_mul(shift, s1, p), p);
  }
  int d = zp_deg(r0);
  if (d != 0) throw DomainError("element not invertible");
  int c = zp_inv_scalar(r0[0], p);
  ZpPoly u = s0;
  for (auto& v : u) v = static_cast<int>(static_cast<long long>(v) * c % p);
  zp_trim(u);
  return zp_mod(u, m, p);
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool zp_poly_irreducible(const std::vector<int>& poly, int p) {
  int k = zp_deg(poly);
  if (k <= 0) return false;
  if (k == 1) return true;
  ZpPoly x = {0, 1};
  unsigned __int128 q = 1;
  for (int i = 0; i < k; ++i) q *= static_cast<unsigned>(p);
  ZpPoly xq = zp_powmod(x, q, poly, p);
  if (zp_deg(zp_sub(xq, x, p)) >= 0) return false;
  for (int r = 2; r <= k; ++r) {
    if (k % r != 0 || !is_prime(r)) continue;
    unsigned __int128 qr = 1;
    for (int i = 0; i < k / r; ++i) qr *= static_cast<unsigned>(p);
    ZpPoly xr = zp_powmod(x, qr, poly, p);
    ZpPoly g = zp_gcd(poly, zp_sub(xr, x, p), p);
    if (zp_deg(g) != 0) return false;
  }
  return true;
}

std::vector<int> smallest_irreducible(int p, int k) {
  if (k == 1) return {0, 1};  // x itself
  uint64_t bound = 1;
  for (int i = 0; i < k; ++i) bound *= static_cast<uint64_t>(p);
  for (uint64_t v = 0; v < bound; ++v) {
    std::vector<int> f(static_cast<size_t>(k + 1), 0);
    uint64_t t = v;
    for (int i = 0; i < k; ++i) {
      f[static_cast<size_t>(i)] = static_cast<int>(t % static_cast<uint64_t>(p));
      t /= static_cast<uint64_t>(p);
    }
    f[static_cast<size_t>(k)] = 1;
    if (zp_poly_irreducible(f, p)) return f;
  }
  throw ShapeError("no irreducible polynomial found");  // unreachable
}

GaloisField::GaloisField(int p, int k, std::vector<int> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
  size_ = 1;
  for (int i = 0; i < k; ++i) size_ *= static_cast<uint64_t>(p);
  build_tables();
}

void GaloisField::build_tables() {
  if (size_ > 512) return;
  int n = static_cast<int>(size_);
  std::vector<std::vector<int>> dig(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::vector<int> d(static_cast<size_t>(k_), 0);
    int t = v;
    for (int i = 0; i < k_; ++i) {
      d[static_cast<size_t>(i)] = t % p_;
      t /= p_;
    }
    dig[static_cast<size_t>(v)] = std::move(d);
  }
  auto index_of = [&](const std::vector<int>& c) {
    uint64_t v = 0;
    for (int i = k_ - 1; i >= 0; --i)
      v = v * static_cast<uint64_t>(p_) + static_cast<uint64_t>(c[static_cast<size_t>(i)]);
    return static_cast<uint16_t>(v);
  };
  add_tab_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  mul_tab_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
  neg_tab_.assign(static_cast<size_t>(n), 0);
  for (int a = 0; a < n; ++a) {
    std::vector<int> neg(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i)
      neg[static_cast<size_t>(i)] = (p_ - dig[static_cast<size_t>(a)][static_cast<size_t>(i)]) % p_;
    neg_tab_[static_cast<size_t>(a)] = index_of(neg);
    for (int b = 0; b < n; ++b) {
      std::vector<int> s(static_cast<size_t>(k_));
      for (int i = 0; i < k_; ++i)
        s[static_cast<size_t>(i)] = (dig[static_cast<size_t>(a)][static_cast<size_t>(i)] +
                                     dig[static_cast<size_t>(b)][static_cast<size_t>(i)]) %
                                    p_;
      add_tab_[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] = index_of(s);
      std::vector<int> m =
          reduce(zp_mul(dig[static_cast<size_t>(a)], dig[static_cast<size_t>(b)], p_));
      mul_tab_[static_cast<size_t>(a) * static_cast<size_t>(n) + static_cast<size_t>(b)] = index_of(m);
    }
  }
}

FieldPtr GaloisField::make(int p, int k) {
  if (!is_prime(p)) throw DomainError("field characteristic must be prime");
  if (k < 1 || k > 8) throw DomainError("extension degree must be in [1, 8]");
  return FieldPtr(new GaloisField(p, k, smallest_irreducible(p, k)));
}

GFElem GaloisField::zero() const {
  return GFElem(shared_from_this(), std::vector<int>(static_cast<size_t>(k_), 0));
}

GFElem GaloisField::one() const { return from_int(1); }

GFElem GaloisField::from_int(uint64_t value) const {
  if (value >= size_) throw DomainError("element index out of range");
  std::vector<int> c(static_cast<size_t>(k_), 0);
  for (int i = 0; i < k_; ++i) {
    c[static_cast<size_t>(i)] = static_cast<int>(value % static_cast<uint64_t>(p_));
    value /= static_cast<uint64_t>(p_);
  }
  return GFElem(shared_from_this(), std::move(c));
}

GFElem GaloisField::from_coeffs(std::vector<int> coeffs) const {
  if (coeffs.size() > static_cast<size_t>(k_)) coeffs = reduce(std::move(coeffs));
  coeffs.resize(static_cast<size_t>(k_), 0);
  for (auto& v : coeffs) v = ((v % p_) + p_) % p_;
  return GFElem(shared_from_this(), std::move(coeffs));
}

GFElem GaloisField::gen() const {
  if (k_ < 2) throw DomainError("prime field has no proper generator coordinate");
  std::vector<int> c(static_cast<size_t>(k_), 0);
  c[1] = 1;
  return GFElem(shared_from_this(), std::move(c));
}

bool GaloisField::same_as(const GaloisField& o) const {
  return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
}

std::vector<int> GaloisField::reduce(std::vector<int> poly) const {
  for (auto& v : poly) v = ((v % p_) + p_) % p_;
  poly = zp_mod(std::move(poly), modulus_, p_);
  poly.resize(static_cast<size_t>(k_), 0);
  return poly;
}

GFElem::GFElem(FieldPtr field, std::vector<int> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
  if (c_.size() != static_cast<size_t>(field_->k()))
    throw DomainError("coefficient vector length must equal the extension degree");
  for (auto& v : c_) v = ((v % field_->p()) + field_->p()) % field_->p();
}

void GFElem::require_same_field(const GFElem& o) const {
  if (!field_ || !o.field_ || !field_->same_as(*o.field_))
    throw DomainError("elements of different fields");
}

bool GFElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](int v) { return v == 0; });
}

uint64_t GFElem::index() const {
  uint64_t v = 0;
  for (int i = field_->k() - 1; i >= 0; --i)
    v = v * static_cast<uint64_t>(field_->p()) + static_cast<uint64_t>(c_[static_cast<size_t>(i)]);
  return v;
}

GFElem GFElem::operator-() const {
  std::vector<int> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = (field_->p() - c_[i]) % field_->p();
  return GFElem(field_, std::move(r));
}

GFElem GFElem::operator+(const GFElem& o) const {
  require_same_field(o);
  std::vector<int> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = (c_[i] + o.c_[i]) % field_->p();
  return GFElem(field_, std::move(r));
}

GFElem GFElem::operator-(const GFElem& o) const { return *this + (-o); }

GFElem GFElem::operator*(const GFElem& o) const {
  require_same_field(o);
  int p = field_->p();
  std::vector<int> prod(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      prod[i + j] = static_cast<int>((prod[i + j] + static_cast<long long>(c_[i]) * o.c_[j]) % p);
  }
  return GFElem(field_, field_->reduce(std::move(prod)));
}

GFElem GFElem::operator/(const GFElem& o) const { return *this * o.inverse(); }

bool GFElem::operator==(const GFElem& o) const {
  require_same_field(o);
  return c_ == o.c_;
}

GFElem GFElem::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  ZpPoly u = zp_invmod(c_, field_->modulus(), field_->p());
  u.resize(static_cast<size_t>(field_->k()), 0);
  return GFElem(field_, std::move(u));
}

GFElem GFElem::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  GFElem r = field_->one();
  GFElem b = *this;
  unsigned long long u = static_cast<unsigned long long>(e);
  while (u > 0) {
    if (u & 1) r = r * b;
    b = b * b;
    u >>= 1;
  }
  return r;
}

GFElem GFElem::frobenius(int i) const {
  int k = field_->k();
  int r = ((i % k) + k) % k;
  GFElem x = *this;
  for (int s = 0; s < r; ++s) x = x.pow(field_->p());
  return x;
}

int GFElem::trace_to_prime() const {
  GFElem t = field_->zero();
  for (int i = 0; i < field_->k(); ++i) t = t + frobenius(i);
  for (size_t i = 1; i < t.c_.size(); ++i)
    if (t.c_[i] != 0) throw ShapeError("trace landed outside the prime field");
  return t.c_[0];
}

std::string GFElem::str() const {
  std::string s;
  for (int i = field_->k() - 1; i >= 0; --i) {
    int v = c_[static_cast<size_t>(i)];
    if (v == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0) {
      s += std::to_string(v);
    } else {
      if (v != 1) s += std::to_string(v) + "*";
      s += (i == 1) ? "g" : "g^" + std::to_string(i);
    }
  }
  return s.empty() ? "0" : s;
}

GFElem wp(const GFElem& x) { return x.pow(x.field()->p()) - x; }

}  // namespace algebra
}  // namespace ndep
