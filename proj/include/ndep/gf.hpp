#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ndep/errors.hpp"

namespace ndep {
namespace algebra {

class GaloisField;
using FieldPtr = std::shared_ptr<const GaloisField>;

/* Element of F_{p^k}, stored as the coefficient vector (length k) of a
   polynomial in the modulus root g, constant term first. */
class GFElem {
public:
  GFElem() = default;
  GFElem(FieldPtr field, std::vector<int> coeffs);

  const FieldPtr& field() const { return field_; }
  const std::vector<int>& coeffs() const { return c_; }

  bool is_zero() const;
  uint64_t index() const;  // sum c_i p^i, the canonical enumeration index

  GFElem operator-() const;
  GFElem operator+(const GFElem& o) const;
  GFElem operator-(const GFElem& o) const;
  GFElem operator*(const GFElem& o) const;
  GFElem operator/(const GFElem& o) const;
  bool operator==(const GFElem& o) const;
  bool operator!=(const GFElem& o) const { return !(*this == o); }

  GFElem inverse() const;
  GFElem pow(long long e) const;
  /* phi^i with phi(x) = x^p; i may be negative (phi has order dividing k). */
  GFElem frobenius(int i) const;
  /* Absolute trace to F_p, returned as an integer in [0, p). */
  int trace_to_prime() const;

  std::string str() const;

private:
  void require_same_field(const GFElem& o) const;

  FieldPtr field_;
  std::vector<int> c_;
};

/* F_{p^k} presented as F_p[x] modulo the canonical modulus: the monic
   irreducible of degree k whose non-leading coefficient list, read from
   highest degree down, is lexicographically smallest (equivalently, smallest
   base-p integer encoding). */
class GaloisField : public std::enable_shared_from_this<GaloisField> {
public:
  static FieldPtr make(int p, int k);

  int p() const { return p_; }
  int k() const { return k_; }
  uint64_t size() const { return size_; }
  /* Length k+1, constant term first, leading coefficient 1. */
  const std::vector<int>& modulus() const { return modulus_; }

  GFElem zero() const;
  GFElem one() const;
  GFElem from_int(uint64_t value) const;  // base-p digits as coefficients
  GFElem from_coeffs(std::vector<int> coeffs) const;
  /* The modulus root g (requires k >= 2). */
  GFElem gen() const;

  bool same_as(const GaloisField& o) const;

  /* Index-keyed arithmetic tables, built eagerly for small fields; the series
     fast paths run on element indices through these to avoid per-term
     allocation. */
  bool has_tables() const { return !mul_tab_.empty(); }
  uint16_t add_idx(uint16_t a, uint16_t b) const {
    return add_tab_[static_cast<size_t>(a) * size_ + b];
  }
  uint16_t mul_idx(uint16_t a, uint16_t b) const {
    return mul_tab_[static_cast<size_t>(a) * size_ + b];
  }
  uint16_t neg_idx(uint16_t a) const { return neg_tab_[a]; }

private:
  GaloisField(int p, int k, std::vector<int> modulus);
  void build_tables();

  friend class GFElem;
  std::vector<int> reduce(std::vector<int> poly) const;

  int p_;
  int k_;
  uint64_t size_;
  std::vector<int> modulus_;
  std::vector<uint16_t> add_tab_, mul_tab_, neg_tab_;
};

bool is_prime(long long n);
/* Monic irreducibility over F_p via the Rabin criterion. `poly` is a
   coefficient list, constant term first, with nonzero lead. */
bool zp_poly_irreducible(const std::vector<int>& poly, int p);
std::vector<int> smallest_irreducible(int p, int k);

/* The Artin-Schreier operator x^p - x. */
GFElem wp(const GFElem& x);

/* Substrate shims shared with the series substrate. */
inline GFElem zero_like(const GFElem& x) { return x.field()->zero(); }
inline GFElem one_like(const GFElem& x) { return x.field()->one(); }
inline bool is_zero(const GFElem& x) { return x.is_zero(); }
inline GFElem frobenius(const GFElem& x, int i) { return x.frobenius(i); }
inline bool substrate_eq(const GFElem& a, const GFElem& b) { return a == b; }

}  // namespace algebra
}  // namespace ndep
