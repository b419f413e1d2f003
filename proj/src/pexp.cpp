#include "ndep/pexp.hpp"

#include <limits>

namespace ndep {
namespace algebra {

PExp::PExp(long long num, int denom_log, int p) : num_(num), dlog_(denom_log), p_(p) {
  if (p < 2) throw DomainError("PExp: p must be >= 2");
  if (denom_log < 0) throw DomainError("PExp: denominatorLog must be >= 0");
  normalize();
}

void PExp::normalize() {
  if (num_ == 0) {
    dlog_ = 0;
    return;
  }
  while (dlog_ > 0 && num_ % p_ == 0) {
    num_ /= p_;
    --dlog_;
  }
}

long long PExp::checked(__int128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw DomainError("PExp: numerator overflow");
  return static_cast<long long>(v);
}

void PExp::require_same_p(const PExp& o) const {
  if (p_ != o.p_) throw DomainError("PExp: mixed characteristics");
}

PExp PExp::operator+(const PExp& o) const {
  require_same_p(o);
  int d = dlog_ > o.dlog_ ? dlog_ : o.dlog_;
  __int128 a = num_;
  for (int i = dlog_; i < d; ++i) a *= p_;
  __int128 b = o.num_;
  for (int i = o.dlog_; i < d; ++i) b *= p_;
  return PExp(checked(a + b), d, p_);
}

PExp PExp::times(long long n) const {
  return PExp(checked(static_cast<__int128>(num_) * n), dlog_, p_);
}

PExp PExp::mul_pow_p(int e) const {
  if (e < 0) throw DomainError("PExp: mul_pow_p expects e >= 0");
  __int128 v = num_;
  int d = dlog_;
  for (int i = 0; i < e; ++i) {
    if (d > 0)
      --d;
    else
      v *= p_;
  }
  return PExp(checked(v), d, p_);
}

PExp PExp::div_pow_p(int e) const {
  if (e < 0) throw DomainError("PExp: div_pow_p expects e >= 0");
  return PExp(num_, dlog_ + e, p_);
}

bool PExp::operator==(const PExp& o) const {
  require_same_p(o);
  return num_ == o.num_ && dlog_ == o.dlog_;
}

bool PExp::operator<(const PExp& o) const {
  require_same_p(o);
  int d = dlog_ > o.dlog_ ? dlog_ : o.dlog_;
  __int128 a = num_;
  for (int i = dlog_; i < d; ++i) a *= p_;
  __int128 b = o.num_;
  for (int i = o.dlog_; i < d; ++i) b *= p_;
  return a < b;
}

std::string PExp::str() const {
  if (dlog_ == 0) return std::to_string(num_);
  long long den = 1;
  for (int i = 0; i < dlog_; ++i) den *= p_;
  return std::to_string(num_) + "/" + std::to_string(den);
}

}  // namespace algebra
}  // namespace ndep
