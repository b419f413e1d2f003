#pragma once

#include <vector>

#include "ndep/gf.hpp"
#include "ndep/linalg.hpp"
#include "ndep/series.hpp"

namespace ndep {
namespace moore {

using algebra::FieldPtr;
using algebra::GFElem;
using algebra::Mat;
using algebra::TruncatedSeries;

/* Rows phi^i applied entrywise: entry(i, j) = c_j^{p^i}, i = 0..m-1 for an
   m-tuple. */
template <class E>
Mat<E> moore_matrix(const std::vector<E>& c) {
  if (c.empty()) throw DomainError("Moore matrix of an empty tuple");
  int m = static_cast<int>(c.size());
  Mat<E> a(m, m, zero_like(c[0]));
  for (int j = 0; j < m; ++j) {
    E v = c[static_cast<size_t>(j)];
    for (int i = 0; i < m; ++i) {
      a.at(i, j) = v;
      if (i + 1 < m) v = frobenius(v, 1);
    }
  }
  return a;
}

template <class E>
E moore_det(const std::vector<E>& c) {
  return det(moore_matrix(c));
}

/* Vanishing of the Moore determinant detects F_p-linear dependence (over a
   perfect substrate both directions hold). */
template <class E>
bool is_fp_independent(const std::vector<E>& c) {
  return !is_zero(moore_det(c));
}

/* Working-precision hygiene for the series substrate: elimination cannot
   certify more than the loosest entry knows, and Frobenius rows carry
   relative precision inflated by p^i.  Clamping every visible entry to the
   joint relative window keeps the geometric expansions inside the linear
   algebra bounded without changing what the result can honestly claim. */
inline void clamp_joint_margin(Mat<TruncatedSeries>& m) {
  using algebra::PExp;
  std::optional<PExp> w;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const TruncatedSeries& e = m.at(i, j);
      auto v = e.valuation();
      if (!v.has_value()) continue;
      PExp rel = e.precision() - *v;
      if (!w.has_value() || rel < *w) w = rel;
    }
  if (!w.has_value()) return;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      TruncatedSeries& e = m.at(i, j);
      auto v = e.valuation();
      if (v.has_value()) e = e.truncate_to(*v + *w);
    }
}

template <class E>
inline void clamp_joint_margin(Mat<E>&) {}

/* The additive isomorphism data attached to a tuple a = (a_0, ..., a_m) with
   F_p-independent inverses:
     A      = Moore matrix of (a_j^{-1/p^m}),
     alpha  = last column of A^{-1}  (so sum_j a_j^{-1} alpha_j = 1 and the
              lower Frobenius rows vanish),
     beta   = inverse of the Moore matrix of alpha. */
template <class E>
struct IsoData {
  std::vector<E> a;
  std::vector<E> alpha;
  Mat<E> moore_a;   // A
  E det_a;          // Moore determinant of the root tuple
  Mat<E> beta;      // M(alpha)^{-1}
};

template <class E>
struct GaTuple {
  std::vector<E> a;
  std::vector<E> x;
};

/* Does x satisfy the defining equations a_0 wp(x_0) = a_i wp(x_i) of G_a? */
template <class E>
bool ga_contains(const std::vector<E>& a, const std::vector<E>& x) {
  if (a.size() != x.size() || a.empty())
    throw DomainError("tuple lengths must match and be nonempty");
  E lhs = a[0] * (frobenius(x[0], 1) - x[0]);
  for (size_t i = 1; i < a.size(); ++i) {
    E rhs = a[i] * (frobenius(x[i], 1) - x[i]);
    if (!substrate_eq(lhs, rhs)) return false;
  }
  return true;
}

template <class E>
IsoData<E> build_iso(const std::vector<E>& a) {
  if (a.empty()) throw DomainError("build_iso needs a nonempty tuple");
  int m = static_cast<int>(a.size()) - 1;
  std::vector<E> roots;
  roots.reserve(a.size());
  for (const auto& ai : a) {
    if (is_zero(ai)) throw DomainError("tuple entries must be nonzero");
    roots.push_back(frobenius(ai.inverse(), -m));
  }
  Mat<E> A = moore_matrix(roots);
  clamp_joint_margin(A);
  E d = det(A);
  if (is_zero(d)) throw DomainError("tuple inverses are F_p-linearly dependent");
  Mat<E> Ainv = inverse(A);
  std::vector<E> alpha;
  alpha.reserve(a.size());
  for (int i = 0; i <= m; ++i) alpha.push_back(Ainv.at(i, m));
  Mat<E> MA = moore_matrix(alpha);
  clamp_joint_margin(MA);
  if (is_zero(det(MA)))
    throw ShapeError("derived coefficient tuple is F_p-linearly dependent");
  Mat<E> beta = inverse(MA);
  return IsoData<E>{a, alpha, A, d, beta};
}

/* f_a(x) = sum_j alpha_j x_j; requires x in G_a. */
template <class E>
E f_apply(const IsoData<E>& iso, const std::vector<E>& x) {
  if (!ga_contains(iso.a, x))
    throw MembershipError("tuple does not satisfy the defining equations of G_a");
  E acc = zero_like(x[0]);
  for (size_t j = 0; j < x.size(); ++j) acc = acc + iso.alpha[j] * x[j];
  return acc;
}

/* f_a^{-1}(t) = (sum_j beta_{i,j} t^{p^j})_i; the image is checked to lie in
   G_a. */
template <class E>
GaTuple<E> f_inv_apply(const IsoData<E>& iso, const E& t) {
  int n = static_cast<int>(iso.a.size());
  std::vector<E> powers;
  powers.reserve(static_cast<size_t>(n));
  E v = t;
  for (int j = 0; j < n; ++j) {
    powers.push_back(v);
    if (j + 1 < n) v = frobenius(v, 1);
  }
  std::vector<E> x;
  x.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    E acc = zero_like(t);
    for (int j = 0; j < n; ++j) acc = acc + iso.beta.at(i, j) * powers[static_cast<size_t>(j)];
    x.push_back(acc);
  }
  if (!ga_contains(iso.a, x))
    throw ShapeError("inverse image left the group G_a");
  return GaTuple<E>{iso.a, x};
}

/* phi^i(t) = sum_j phi^i(alpha_j) x_j whenever t = f_a(x); the semilinear
   compatibility of the isomorphism. */
template <class E>
bool tfrob_check(const IsoData<E>& iso, const std::vector<E>& x, int i) {
  E t = f_apply(iso, x);
  E lhs = frobenius(t, i);
  E rhs = zero_like(t);
  for (size_t j = 0; j < x.size(); ++j) rhs = rhs + frobenius(iso.alpha[j], i) * x[j];
  return substrate_eq(lhs, rhs);
}

/* All solutions of wp(x) = a over F_{p^k}; empty or exactly p roots. */
std::vector<GFElem> artin_schreier_roots(const GFElem& a);

}  // namespace moore
}  // namespace ndep
