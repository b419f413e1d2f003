#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "ndep/errors.hpp"

namespace ndep {
namespace algebra {

/* Exact exponent in Z[1/p]: num / p^denomLog, normalized so that p does not
   divide num unless denomLog == 0.  All arithmetic is exact; overflow of the
   64-bit numerator is a typed error, never silent wraparound. */
class PExp {
public:
  PExp() : num_(0), dlog_(0), p_(2) {}
  PExp(long long num, int denom_log, int p);

  static PExp integer(long long n, int p) { return PExp(n, 0, p); }

  long long num() const { return num_; }
  int denom_log() const { return dlog_; }
  int p() const { return p_; }

  bool is_zero() const { return num_ == 0; }
  bool is_positive() const { return num_ > 0; }
  bool is_negative() const { return num_ < 0; }

  PExp operator-() const { return PExp(-num_, dlog_, p_); }
  PExp operator+(const PExp& o) const;
  PExp operator-(const PExp& o) const { return *this + (-o); }

  /* Multiply by the integer n (n may contain factors of p). */
  PExp times(long long n) const;
  /* Multiply by p^e, e >= 0. */
  PExp mul_pow_p(int e) const;
  /* Divide by p^e, e >= 0 (raises denomLog; caller enforces any cap). */
  PExp div_pow_p(int e) const;

  bool operator==(const PExp& o) const;
  bool operator<(const PExp& o) const;
  bool operator<=(const PExp& o) const { return *this < o || *this == o; }
  bool operator>(const PExp& o) const { return o < *this; }
  bool operator>=(const PExp& o) const { return o <= *this; }

  std::string str() const;

private:
  void normalize();
  static long long checked(__int128 v);
  void require_same_p(const PExp& o) const;

  long long num_;
  int dlog_;
  int p_;
};

inline PExp min(const PExp& a, const PExp& b) { return a < b ? a : b; }
inline PExp max(const PExp& a, const PExp& b) { return a < b ? b : a; }

}  // namespace algebra
}  // namespace ndep
