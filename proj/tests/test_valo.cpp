#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ndep/valo.hpp"

using namespace ndep;
using namespace ndep::algebra;
using namespace ndep::valo;

namespace {

TruncatedSeries mono(const FieldPtr& f, int cap, const PExp& e, const PExp& prec) {
  return TruncatedSeries::monomial(f, cap, f->one(), e, prec);
}

TruncatedSeries mono_i(const FieldPtr& f, int cap, long long e, long long prec) {
  return mono(f, cap, PExp::integer(e, f->p()), PExp::integer(prec, f->p()));
}

}  // namespace

TEST_CASE("closed form for val(alpha): pinned values and ordering errors") {
  // p=2, m=1, vals (1,3): alpha_0 = 1/2 + 3/2 = 2, alpha_1 = 3.
  ValProfile pr({PExp::integer(1, 2), PExp::integer(3, 2)});
  auto cf = alpha_val_closed_form(pr, true);
  REQUIRE(cf.size() == 2);
  CHECK(cf[0] == PExp::integer(2, 2));
  CHECK(cf[1] == PExp::integer(3, 2));

  // m=0: empty sum, val(alpha_0) = val(a_0).
  auto single = alpha_val_closed_form(ValProfile({PExp(5, 1, 2)}), true);
  CHECK(single == std::vector<PExp>{PExp(5, 1, 2)});

  // p=2, m=2, vals (1,2,5): (1/4 + 2/4 + 10/4, 1 + 5/2, 5) = (13/4, 7/2, 5).
  auto three = alpha_val_closed_form(
      ValProfile({PExp::integer(1, 2), PExp::integer(2, 2), PExp::integer(5, 2)}), true);
  CHECK(three == std::vector<PExp>{PExp(13, 2, 2), PExp(7, 1, 2), PExp::integer(5, 2)});

  // p=3, m=1, vals (1,3): (1/3 + 2*3/3, 3) = (7/3, 3).
  auto p3 = alpha_val_closed_form(ValProfile({PExp::integer(1, 3), PExp::integer(3, 3)}), true);
  CHECK(p3 == std::vector<PExp>{PExp(7, 1, 3), PExp::integer(3, 3)});

  // Unsorted input is rejected on the sorted path, rank-mapped otherwise.
  ValProfile unsorted({PExp::integer(3, 2), PExp::integer(1, 2)});
  CHECK_THROWS_AS((void)alpha_val_closed_form(unsorted, true), DomainError);
  auto mapped = alpha_val_closed_form(unsorted, false);
  CHECK(mapped == std::vector<PExp>{PExp::integer(3, 2), PExp::integer(2, 2)});

  CHECK_THROWS_AS(ValProfile({PExp::integer(1, 2), PExp::integer(1, 2)}), DomainError);
  CHECK_THROWS_AS(ValProfile({PExp::integer(0, 2)}), DomainError);
  CHECK_THROWS_AS(ValProfile({PExp::integer(-1, 2)}), DomainError);
}

TEST_CASE("direct coefficient valuations match the closed form, pinned (t, t^3)") {
  auto f2 = GaloisField::make(2, 1);
  auto t1 = mono_i(f2, 2, 1, 40);
  auto t3 = mono_i(f2, 2, 3, 40);

  auto rep = verify_alpha_vals({t1, t3});
  CHECK(rep.direct == std::vector<PExp>{PExp::integer(2, 2), PExp::integer(3, 2)});
  CHECK(rep.match);
  CHECK(rep.increasing_when_sorted);
  CHECK(rep.permutation_rule_checked);
  CHECK(rep.permutation_rule_ok);
  CHECK(rep.passed());

  // Swapped tuple: the sigma-permuted values (3, 2).
  auto swapped = verify_alpha_vals({t3, t1});
  CHECK(swapped.direct == std::vector<PExp>{PExp::integer(3, 2), PExp::integer(2, 2)});
  CHECK(swapped.passed());

  CHECK_THROWS_AS((void)verify_alpha_vals({t1, t1}), DomainError);
}

TEST_CASE("maximal-valuation coefficient keeps its valuation, others drop below") {
  auto f2 = GaloisField::make(2, 1);
  auto t1 = mono_i(f2, 2, 1, 40);
  auto t3 = mono_i(f2, 2, 3, 40);

  CHECK(min_val_check({t1, t3}, 1));
  CHECK(min_val_check({t1}, 0));
  CHECK_THROWS_AS((void)min_val_check({t1, t3}, 0), DomainError);
  CHECK_THROWS_AS((void)min_val_check({t1, t3}, 2), DomainError);
}

TEST_CASE("preimage valuations: pinned (t, t^3), y = t^5") {
  auto f2 = GaloisField::make(2, 1);
  auto t1 = mono_i(f2, 2, 1, 40);
  auto t3 = mono_i(f2, 2, 3, 40);
  auto y = mono_i(f2, 2, 5, 40);

  auto rep = preimage_valuations({t1, t3}, y);
  // val(x_1) = val(y) - val(a_1) = 2; val(x_0) = 4 read off the beta rows:
  // x_0 = beta_{0,0} y + beta_{0,1} y^2 with val(beta_{0,*}) = (-1, -4).
  REQUIRE(rep.x_vals.size() == 2);
  CHECK(rep.x_vals[0] == PExp::integer(4, 2));
  CHECK(rep.x_vals[1] == PExp::integer(2, 2));
  CHECK(rep.all_positive);
  CHECK(rep.xn0_checked);
  CHECK(rep.xn0_ok);
  CHECK(rep.xn0_expected == PExp::integer(2, 2));
  // val(a_i) + val(x_i^p - x_i) = val(y) on both coordinates.
  CHECK(rep.ofe_ok);
  CHECK(rep.ofe_value == PExp::integer(5, 2));
  CHECK(rep.ordxi1_pairs == 1);
  CHECK(rep.ordxi1_ok);
  CHECK(rep.ordxi2_pairs == 0);
  CHECK(rep.ordxi2_ok);
  CHECK(rep.passed());

  // Hypothesis val(a_j) < val(y) must fail for y = t^2.
  CHECK_THROWS_AS((void)preimage_valuations({t1, t3}, mono_i(f2, 2, 2, 40)), DomainError);
}

TEST_CASE("rho' fit over F_4: pinned c = 1 and rho'(t) = t^2 + t") {
  auto f4 = GaloisField::make(2, 2);
  auto g = f4->gen();
  std::vector<GFElem> a{f4->one(), g};

  auto fit = rho_prime_fit(a);
  CHECK(fit.c == f4->one());
  REQUIRE(fit.gamma.size() == 2);
  CHECK(fit.gamma[0] == f4->one());
  CHECK(fit.gamma[1] == f4->one());

  // rho'(x) = x^2 + x on all of F_4; kernel is exactly F_p.
  int kernel = 0;
  for (uint64_t v = 0; v < f4->size(); ++v) {
    GFElem x = f4->from_int(v);
    GFElem img = rho_prime_eval(fit, x);
    CHECK(img == x * x + x);
    if (img.is_zero()) ++kernel;
  }
  CHECK(kernel == f4->p());
  CHECK(rho_prime_eval(fit, f4->zero()).is_zero());
  CHECK(rho_prime_eval(fit, f4->one()).is_zero());

  CHECK_THROWS_AS((void)rho_prime_fit(std::vector<GFElem>{g}), DomainError);
}

TEST_CASE("rho' fit shape holds across fields and on the series substrate") {
  // Exhaustive short tuples over F_4, F_8, F_9 with independent inverses.
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
    auto f = GaloisField::make(p, k);
    for (uint64_t i = 1; i < f->size(); ++i) {
      for (uint64_t j = 1; j < f->size(); ++j) {
        std::vector<GFElem> a{f->from_int(i), f->from_int(j)};
        if (!moore::is_fp_independent(std::vector<GFElem>{a[0].inverse(), a[1].inverse()}))
          continue;
        auto fit = rho_prime_fit(a);  // shape violation would throw
        int kernel = 0;
        for (uint64_t v = 0; v < f->size(); ++v)
          if (rho_prime_eval(fit, f->from_int(v)).is_zero()) ++kernel;
        CHECK(kernel == p);
      }
    }
  }

  // Series substrate: rho'(x) = c (x^p - x) reproduced on a sample point.
  auto f2 = GaloisField::make(2, 1);
  auto t1 = mono_i(f2, 2, 1, 40);
  auto t3 = mono_i(f2, 2, 3, 40);
  auto fit = rho_prime_fit(std::vector<TruncatedSeries>{t1, t3});
  CHECK(fit.c.valuation_or_throw() == PExp::integer(3, 2));
  auto x = mono_i(f2, 2, 2, 40);
  CHECK(substrate_eq(rho_prime_eval(fit, x), fit.c * wp(x)));
}

TEST_CASE("small-valuation preimage: pinned (t, t^3), u = t^4") {
  auto f2 = GaloisField::make(2, 1);
  auto t1 = mono_i(f2, 2, 1, 40);
  auto t3 = mono_i(f2, 2, 3, 40);
  auto u = mono_i(f2, 2, 4, 40);

  auto res = preimage_small_val({t1, t3}, u);
  CHECK(res.w_val == PExp::integer(1, 2));
  CHECK(res.val_ok);
  CHECK(res.rho_ok);
  CHECK(res.passed());
  // The lift: x_0 = u / a_0 = t^3, and the last coordinate solves
  // a_1 wp(x_1) = a_0 wp(x_0) with val(x_1) = 1.
  REQUIRE(res.tuple.x.size() == 2);
  CHECK(substrate_eq(res.tuple.x[0], mono_i(f2, 2, 3, 40)));
  CHECK(res.tuple.x[1].valuation_or_throw() == PExp::integer(1, 2));

  CHECK_THROWS_AS((void)preimage_small_val({t1, t3}, mono_i(f2, 2, 2, 40)), DomainError);
  CHECK_THROWS_AS((void)preimage_small_val({t1}, u), DomainError);
}

TEST_CASE("Artin-Schreier root in the maximal ideal: pinned (t, t^3), y = t^4") {
  auto f2 = GaloisField::make(2, 1);
  auto t1 = mono_i(f2, 2, 1, 40);
  auto t3 = mono_i(f2, 2, 3, 40);
  auto y = mono_i(f2, 2, 4, 40);

  auto res = as_root_in_maximal_ideal({t1, t3}, y);
  CHECK(res.first.w_val == PExp::integer(1, 2));
  CHECK(res.c_val == PExp::integer(3, 2));
  CHECK(res.c_val_ok);
  CHECK(res.second.w_val == PExp::integer(4, 2));
  CHECK(res.wprime_positive);
  CHECK(res.root_ok);
  CHECK(res.passed());
  CHECK(substrate_eq(wp(res.wprime()), y));

  // p = 3 instance: a = (t, t^4), y = t^5; val(w) = 1, val(c) = 4, val(w') = 5.
  auto f3 = GaloisField::make(3, 1);
  auto s1 = mono_i(f3, 2, 1, 60);
  auto s4 = mono_i(f3, 2, 4, 60);
  auto y3 = mono_i(f3, 2, 5, 60);
  auto res3 = as_root_in_maximal_ideal({s1, s4}, y3);
  CHECK(res3.first.w_val == PExp::integer(1, 3));
  CHECK(res3.c_val == PExp::integer(4, 3));
  CHECK(res3.second.w_val == PExp::integer(5, 3));
  CHECK(res3.passed());
}

TEST_CASE("grid schedule: pinned n=2, ell=2, gap=2 product order") {
  auto f2 = GaloisField::make(2, 1);
  auto y = mono_i(f2, 8, 1, 8);

  auto grid = build_b_grid(2, 2, y, 2);
  CHECK(grid.constraints_ok);
  CHECK(grid.in_range_ok);
  CHECK(grid.lex_law_ok);
  CHECK(grid.passed());

  // b valuations 1/p^{s(j,l)}: s = (4 - (2j + l)) * 2, row-nested.
  CHECK(grid.at(0, 0).valuation_or_throw() == PExp(1, 8, 2));
  CHECK(grid.at(0, 1).valuation_or_throw() == PExp(1, 6, 2));
  CHECK(grid.at(1, 0).valuation_or_throw() == PExp(1, 4, 2));
  CHECK(grid.at(1, 1).valuation_or_throw() == PExp(1, 2, 2));

  // Products in odometer order (l_0, l_1): 17/256, 65/256, 5/64, 17/64.
  REQUIRE(grid.products.size() == 4);
  CHECK(grid.products[0].val == PExp(17, 8, 2));
  CHECK(grid.products[1].val == PExp(65, 8, 2));
  CHECK(grid.products[2].val == PExp(5, 6, 2));
  CHECK(grid.products[3].val == PExp(17, 6, 2));

  // Single row: valuations strictly increasing with l.
  auto row = build_b_grid(1, 3, mono_i(f2, 3, 1, 8), 1);
  CHECK(row.passed());
  CHECK(row.at(0, 0).valuation_or_throw() < row.at(0, 1).valuation_or_throw());
  CHECK(row.at(0, 1).valuation_or_throw() < row.at(0, 2).valuation_or_throw());

  CHECK_THROWS_AS((void)build_b_grid(2, 2, y, 0), DomainError);
  CHECK_THROWS_AS((void)build_b_grid(2, 2, y, 1), DomainError);  // 2^1 = 2 is not > n
  // Cap too small for the schedule's denominators.
  CHECK_THROWS_AS((void)build_b_grid(2, 2, mono_i(f2, 3, 1, 8), 2), CapOverflow);
}

TEST_CASE("grid law exhaustively for n, ell <= 3") {
  auto f2 = GaloisField::make(2, 1);
  auto f3 = GaloisField::make(3, 1);
  for (int n = 1; n <= 3; ++n) {
    for (int ell = 1; ell <= 3; ++ell) {
      auto grid = build_b_grid(n, ell, mono_i(f2, n * ell * 2, 1, 8), 2);
      CHECK(grid.passed());
      CHECK(grid.products.size() == static_cast<size_t>(std::pow(ell, n)));
      auto grid3 = build_b_grid(n, ell, mono_i(f3, n * ell * 2, 1, 8), 2);
      CHECK(grid3.passed());
    }
  }
}

TEST_CASE("random sorted profiles: closed form, monotonicity, top-index equality") {
  std::mt19937_64 rng(20240811);
  int done = 0;
  while (done < 200) {
    int p = (rng() % 2 == 0) ? 2 : 3;
    int m = static_cast<int>(rng() % 4);
    std::set<PExp> vals;
    while (static_cast<int>(vals.size()) <= m) {
      int dlog = static_cast<int>(rng() % 3);
      long long den = 1;
      for (int i = 0; i < dlog; ++i) den *= p;
      long long num = 1 + static_cast<long long>(rng() % static_cast<uint64_t>(64 * den));
      vals.insert(PExp(num, dlog, p));
    }
    std::vector<PExp> sorted(vals.begin(), vals.end());

    auto f = GaloisField::make(p, 1);
    int cap = 2 + m + 1;
    // Relative margin survives products and inverses but is divided by p^m
    // when the roots are extracted, so scale it up front.
    PExp margin = PExp::integer(16, p).mul_pow_p(m);
    std::vector<TruncatedSeries> a;
    for (const auto& v : sorted) a.push_back(mono(f, cap, v, v + margin));

    auto rep = verify_alpha_vals(a);
    CHECK(rep.passed());
    CHECK(min_val_check(a, m));
    ++done;
  }
}

TEST_CASE("random preimages: positive coordinate valuations and the OFE chain") {
  std::mt19937_64 rng(20240812);
  int done = 0;
  while (done < 100) {
    int p = (rng() % 2 == 0) ? 2 : 3;
    int m = 1 + static_cast<int>(rng() % 2);
    std::set<PExp> vals;
    while (static_cast<int>(vals.size()) <= m) {
      int dlog = static_cast<int>(rng() % 2);
      long long den = 1;
      for (int i = 0; i < dlog; ++i) den *= p;
      long long num = 1 + static_cast<long long>(rng() % static_cast<uint64_t>(12 * den));
      vals.insert(PExp(num, dlog, p));
    }
    std::vector<PExp> sorted(vals.begin(), vals.end());
    PExp y_val = sorted.back() + PExp::integer(1 + static_cast<long long>(rng() % 6), p);

    auto f = GaloisField::make(p, 1);
    int cap = 2 + m + 1;
    PExp margin = PExp::integer(16, p).mul_pow_p(m);
    std::vector<TruncatedSeries> a;
    for (const auto& v : sorted) a.push_back(mono(f, cap, v, v + margin));

    auto rep = preimage_valuations(a, mono(f, cap, y_val, y_val + margin));
    CHECK(rep.passed());
    CHECK(rep.xn0_checked);
    ++done;
  }
}
