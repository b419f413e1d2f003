#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndep/gf.hpp"

namespace ndep {
namespace algebra {

/* Dense polynomial over a Galois field, constant term first; the zero
   polynomial has an empty coefficient list. */
class GFPoly {
public:
  explicit GFPoly(FieldPtr field) : field_(std::move(field)) {}
  GFPoly(FieldPtr field, std::vector<GFElem> coeffs);

  static GFPoly t(const FieldPtr& field);
  static GFPoly constant(const GFElem& c);

  const FieldPtr& field() const { return field_; }
  const std::vector<GFElem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  GFElem lead() const;
  GFElem coeff(int i) const;

  GFPoly operator-() const;
  GFPoly operator+(const GFPoly& o) const;
  GFPoly operator-(const GFPoly& o) const;
  GFPoly operator*(const GFPoly& o) const;
  bool operator==(const GFPoly& o) const;

  std::pair<GFPoly, GFPoly> divmod(const GFPoly& d) const;
  GFPoly operator%(const GFPoly& d) const { return divmod(d).second; }
  GFPoly operator/(const GFPoly& d) const { return divmod(d).first; }
  GFPoly make_monic() const;
  GFPoly pow(int e) const;

  std::string str() const;

private:
  void trim();

  FieldPtr field_;
  std::vector<GFElem> c_;
};

GFPoly gf_poly_gcd(GFPoly a, GFPoly b);
/* Inverse of a modulo m (gcd(a, m) = 1 required). */
GFPoly gf_poly_invmod(const GFPoly& a, const GFPoly& m);
bool gf_poly_irreducible(const GFPoly& f);

/* Quotient num/den in canonical form: den monic, gcd(num, den) = 1;
   zero is 0/1. */
class RationalFunction {
public:
  explicit RationalFunction(FieldPtr field);
  RationalFunction(GFPoly num, GFPoly den);

  static RationalFunction from_poly(GFPoly p) { return RationalFunction(p, GFPoly::constant(p.field()->one())); }

  const FieldPtr& field() const { return num_.field(); }
  const GFPoly& num() const { return num_; }
  const GFPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFunction operator-() const;
  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  bool operator==(const RationalFunction& o) const;

  std::string str() const;

private:
  GFPoly num_, den_;
};

/* Place of the rational function field F_q(t): either a finite place named by
   a monic irreducible polynomial, or the degree place at infinity. */
class Place {
public:
  static Place finite(GFPoly pi);
  static Place infinite(FieldPtr field);

  bool is_infinite() const { return infinite_; }
  const GFPoly& pi() const;
  const FieldPtr& field() const { return field_; }
  bool operator==(const Place& o) const;

  std::string str() const;

private:
  Place(FieldPtr field, std::optional<GFPoly> pi, bool infinite)
      : field_(std::move(field)), pi_(std::move(pi)), infinite_(infinite) {}

  FieldPtr field_;
  std::optional<GFPoly> pi_;
  bool infinite_;
};

/* Normalized valuation at v; nullopt encodes +infinity (only for f = 0). */
std::optional<long long> rf_valuation(const RationalFunction& f, const Place& v);

/* A rational function w with val_v1(w - a) > 0 and val_v2(w - b) > 0, for
   distinct places v1, v2 with val_v1(a) >= 0 and val_v2(b) >= 0.  Both
   postconditions are re-checked on every call. */
RationalFunction coset_intersect(const RationalFunction& a, const Place& v1,
                                 const RationalFunction& b, const Place& v2);

}  // namespace algebra
}  // namespace ndep
