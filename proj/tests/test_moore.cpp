#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ndep/moore.hpp"

using namespace ndep;
using namespace ndep::algebra;
using namespace ndep::moore;

namespace {

/* Oracle: F_p-linear dependence by enumerating all p^n coefficient vectors. */
bool independent_by_enumeration(const std::vector<GFElem>& c) {
  const FieldPtr& f = c[0].field();
  int p = f->p();
  long long total = 1;
  for (size_t i = 0; i < c.size(); ++i) total *= p;
  for (long long mask = 1; mask < total; ++mask) {
    GFElem acc = f->zero();
    long long m = mask;
    for (size_t i = 0; i < c.size(); ++i) {
      int coef = static_cast<int>(m % p);
      m /= p;
      std::vector<int> cv(static_cast<size_t>(f->k()), 0);
      cv[0] = coef;
      acc = acc + f->from_coeffs(cv) * c[i];
    }
    if (acc.is_zero()) return false;
  }
  return true;
}

/* All tuples of nonzero elements, by odometer. */
template <class F>
void for_each_tuple(const FieldPtr& f, int len, F&& fn) {
  std::vector<uint64_t> idx(static_cast<size_t>(len), 1);
  while (true) {
    std::vector<GFElem> t;
    for (auto v : idx) t.push_back(f->from_int(v));
    fn(t);
    int pos = len - 1;
    while (pos >= 0) {
      if (++idx[static_cast<size_t>(pos)] < f->size()) break;
      idx[static_cast<size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace

TEST_CASE("Moore determinant detects dependence, oracle on all tuples over F_4, F_8, F_9") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
    auto f = GaloisField::make(p, k);
    for (int len = 1; len <= 3; ++len) {
      for_each_tuple(f, len, [&](const std::vector<GFElem>& t) {
        CHECK(is_fp_independent(t) == independent_by_enumeration(t));
      });
    }
  }
}

TEST_CASE("pinned Moore values over F_4") {
  auto f4 = GaloisField::make(2, 2);
  GFElem g = f4->gen();
  CHECK(moore_det<GFElem>({f4->one(), g}) == f4->one());
  /* (1, g) independent; (1, 1) dependent. */
  CHECK(is_fp_independent<GFElem>({f4->one(), g}));
  CHECK_FALSE(is_fp_independent<GFElem>({f4->one(), f4->one()}));
}

TEST_CASE("build_iso on the pinned F_4 example") {
  auto f4 = GaloisField::make(2, 2);
  GFElem g = f4->gen();
  auto iso = build_iso<GFElem>({f4->one(), g});
  /* A = [[1, g], [1, g+1]], alpha = (g, 1). */
  CHECK(iso.moore_a.at(0, 0) == f4->one());
  CHECK(iso.moore_a.at(0, 1) == g);
  CHECK(iso.moore_a.at(1, 0) == f4->one());
  CHECK(iso.moore_a.at(1, 1) == g + f4->one());
  CHECK(iso.alpha[0] == g);
  CHECK(iso.alpha[1] == f4->one());
  /* f(1,0) = g, f(1,1) = g+1; (g, 0) violates the group equations. */
  CHECK(f_apply(iso, {f4->one(), f4->zero()}) == g);
  CHECK(f_apply(iso, {f4->one(), f4->one()}) == g + f4->one());
  CHECK_FALSE(ga_contains<GFElem>({f4->one(), g}, {g, f4->zero()}));
  CHECK_THROWS_AS((void)f_apply(iso, {g, f4->zero()}), MembershipError);
  /* Singleton tuple: alpha_0 = a_0, beta_00 = a_0^{-1}. */
  auto single = build_iso<GFElem>({g});
  CHECK(single.alpha[0] == g);
  CHECK(single.beta.at(0, 0) == g.inverse());
  /* Dependent inverses are a typed error. */
  CHECK_THROWS_AS((void)build_iso<GFElem>({f4->one(), f4->one()}), DomainError);
  CHECK_THROWS_AS((void)build_iso<GFElem>({f4->one(), f4->zero()}), DomainError);
}

TEST_CASE("iso is an additive bijection K <-> G_a with the semilinear law") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
    auto f = GaloisField::make(p, k);
    int checked = 0;
    for (int m = 0; m <= 2 && m < k + 1; ++m) {
      for_each_tuple(f, m + 1, [&](const std::vector<GFElem>& a) {
        if (checked > 40) return;  // keep the exhaustive part bounded per field
        std::vector<GFElem> inv;
        for (const auto& ai : a) inv.push_back(ai.inverse());
        if (!independent_by_enumeration(inv)) {
          CHECK_THROWS_AS((void)build_iso(a), DomainError);
          return;
        }
        ++checked;
        auto iso = build_iso(a);
        /* M(alpha) * beta = identity exactly. */
        auto prod = moore_matrix(iso.alpha);
        auto n = static_cast<int>(a.size());
        Mat<GFElem> id = Mat<GFElem>::identity(n, f->zero());
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            GFElem acc = f->zero();
            for (int l = 0; l < n; ++l) acc = acc + prod.at(i, l) * iso.beta.at(l, j);
            CHECK(acc == id.at(i, j));
          }
        /* Round trip over every t in K; image points are distinct and in G_a. */
        std::set<uint64_t> images;
        for (uint64_t ti = 0; ti < f->size(); ++ti) {
          GFElem t = f->from_int(ti);
          auto xt = f_inv_apply(iso, t);
          CHECK(ga_contains(a, xt.x));
          CHECK(f_apply(iso, xt.x) == t);
          uint64_t key = 0;
          for (const auto& xi : xt.x) key = key * f->size() + xi.index();
          images.insert(key);
          /* Semilinear compatibility for all Frobenius powers. */
          for (int fi = 0; fi <= static_cast<int>(a.size()) - 1; ++fi)
            CHECK(tfrob_check(iso, xt.x, fi));
        }
        CHECK(images.size() == f->size());
        /* |G_a| = p^k: enumerate tuples satisfying the equations. */
        if (a.size() <= 2) {
          long long count = 0;
          std::vector<uint64_t> idx(a.size(), 0);
          while (true) {
            std::vector<GFElem> x;
            for (auto v : idx) x.push_back(f->from_int(v));
            if (ga_contains(a, x)) ++count;
            size_t pos = a.size();
            while (pos > 0) {
              if (++idx[pos - 1] < f->size()) break;
              idx[pos - 1] = 0;
              --pos;
            }
            if (pos == 0) break;
          }
          CHECK(count == static_cast<long long>(f->size()));
        }
      });
    }
  }
}

TEST_CASE("additivity of f and f^{-1} on G_a") {
  auto f8 = GaloisField::make(2, 3);
  GFElem g = f8->gen();
  auto iso = build_iso<GFElem>({f8->one(), g, g * g});
  for (uint64_t i = 0; i < 8; ++i)
    for (uint64_t j = 0; j < 8; ++j) {
      auto xi = f_inv_apply(iso, f8->from_int(i));
      auto xj = f_inv_apply(iso, f8->from_int(j));
      std::vector<GFElem> sum;
      for (size_t l = 0; l < xi.x.size(); ++l) sum.push_back(xi.x[l] + xj.x[l]);
      CHECK(ga_contains(iso.a, sum));
      CHECK(f_apply(iso, sum) == f8->from_int(i) + f8->from_int(j));
    }
}

TEST_CASE("Artin-Schreier roots over finite fields, exhaustive oracle") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {5, 1}}) {
    auto f = GaloisField::make(p, k);
    for (uint64_t ai = 0; ai < f->size(); ++ai) {
      GFElem a = f->from_int(ai);
      auto roots = artin_schreier_roots(a);
      std::set<uint64_t> expect;
      for (uint64_t x = 0; x < f->size(); ++x)
        if (wp(f->from_int(x)) == a) expect.insert(x);
      std::set<uint64_t> got;
      for (const auto& r : roots) got.insert(r.index());
      CHECK(got == expect);
      CHECK((roots.empty() || roots.size() == static_cast<size_t>(p)));
      /* Solvable iff trace vanishes. */
      CHECK(roots.empty() == (a.trace_to_prime() != 0));
    }
  }
  /* Pinned: roots of 1 over F_4 are {g, g+1}. */
  auto f4 = GaloisField::make(2, 2);
  auto roots = artin_schreier_roots(f4->one());
  std::set<uint64_t> got;
  for (const auto& r : roots) got.insert(r.index());
  CHECK(got == std::set<uint64_t>{2, 3});
}

TEST_CASE("iso over the series substrate mirrors the finite-field behavior") {
  auto f2 = GaloisField::make(2, 1);
  int cap = 3;
  PExp prec = PExp::integer(64, 2);
  auto m = [&](long long e) {
    return TruncatedSeries::monomial(f2, cap, f2->one(), PExp::integer(e, 2), prec);
  };
  std::vector<TruncatedSeries> a = {m(1), m(3)};
  auto iso = build_iso(a);
  /* val(alpha) = (2, 3) for the profile (1, 3) at p = 2. */
  CHECK(iso.alpha[0].valuation() == PExp::integer(2, 2));
  CHECK(iso.alpha[1].valuation() == PExp::integer(3, 2));
  /* f(f^{-1}(y)) = y to precision for a few monomials. */
  for (long long e : {4LL, 5LL, 7LL}) {
    auto xt = f_inv_apply(iso, m(e));
    CHECK(substrate_eq(f_apply(iso, xt.x), m(e)));
    for (int fi = 0; fi <= 1; ++fi) CHECK(tfrob_check(iso, xt.x, fi));
  }
  /* Cap too small for the needed p-th roots is a typed error. */
  auto bad = [&] {
    auto tiny = TruncatedSeries::monomial(f2, 0, f2->one(), PExp(1, 0, 2), prec);
    auto tiny3 = TruncatedSeries::monomial(f2, 0, f2->one(), PExp(3, 0, 2), prec);
    return build_iso<TruncatedSeries>({tiny, tiny3});
  };
  CHECK_THROWS_AS((void)bad(), CapOverflow);
}
