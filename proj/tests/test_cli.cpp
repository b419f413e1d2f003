#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "ndep/cli.hpp"

using namespace ndep;
using algebra::GaloisField;
using algebra::PExp;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ndep");
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("series literal parser") {
  auto f2 = GaloisField::make(2, 1);
  auto f4 = GaloisField::make(2, 2);

  SUBCASE("monomials and sums") {
    auto s = cli::parse_series_literal("t^3", f2, 4, std::nullopt);
    CHECK(s.valuation_or_throw() == PExp::integer(3, 2));
    auto sum = cli::parse_series_literal("t + t^3", f2, 4, std::nullopt);
    CHECK(sum.terms().size() == 2);
    CHECK(sum.valuation_or_throw() == PExp::integer(1, 2));
  }

  SUBCASE("coefficients are canonical indices") {
    auto s = cli::parse_series_literal("2*t^2+1", f4, 4, std::nullopt);
    CHECK(s.terms().size() == 2);
    CHECK(s.terms()[0].coeff == f4->one());
    CHECK(s.terms()[1].coeff == f4->from_int(2));
  }

  SUBCASE("fractional and negative exponents") {
    auto s = cli::parse_series_literal("t^(3/2) - t^-1", f2, 4, std::nullopt);
    CHECK(s.valuation_or_throw() == PExp::integer(-1, 2));
    CHECK(s.terms()[1].exp == PExp(3, 1, 2));
  }

  SUBCASE("characteristic-2 minus folds into plus") {
    auto a = cli::parse_series_literal("t-t^2", f2, 4, std::nullopt);
    auto b = cli::parse_series_literal("t+t^2", f2, 4, std::nullopt);
    CHECK(substrate_eq(a, b));
  }

  SUBCASE("errors cite the offending span") {
    CHECK_THROWS_WITH_AS(cli::parse_series_literal("t^(1/6)", f2, 4, std::nullopt),
                         doctest::Contains("not a power of 2"), DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_series_literal("t t", f2, 4, std::nullopt),
                         doctest::Contains("at 2..2"), DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_series_literal("9*t", f4, 4, std::nullopt),
                         doctest::Contains("outside 0..3"), DomainError);
    CHECK_THROWS_AS(cli::parse_series_literal("", f2, 4, std::nullopt), DomainError);
    CHECK_THROWS_WITH_AS(cli::parse_series_literal("t^(1/16)", f2, 3, std::nullopt),
                         doctest::Contains("cap"), DomainError);
  }

  SUBCASE("explicit precision below a term is rejected") {
    CHECK_THROWS_WITH_AS(
        cli::parse_series_literal("t^5", f2, 4, PExp::integer(3, 2)),
        doctest::Contains("not below the precision"), DomainError);
  }
}

TEST_CASE("pinned closed-form example") {
  auto r = run({"valo", "alpha", "--p", "2", "--a", "t,t^3"});
  CHECK(r.code == 0);
  auto j = ser::parse_json(r.out);
  CHECK(j["schema"] == "ndep-report/1");
  CHECK(j["pass"] == true);
  CHECK(j["values"]["closed_form"] == ser::Json::array({"2", "3"}));
  CHECK(j["values"]["direct"] == ser::Json::array({"2", "3"}));
}

TEST_CASE("pinned partite Ramsey example") {
  auto r = run({"shatter", "ramsey", "--l", "2", "--m", "2", "--n", "1"});
  CHECK(r.code == 0);
  auto j = ser::parse_json(r.out);
  CHECK(j["values"]["R"] == 3);
  CHECK(j["pass"] == true);
}

TEST_CASE("exit codes") {
  SUBCASE("unknown subcommand is a usage error") {
    auto r = run({"frobnicate"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
  }
  SUBCASE("missing required option is a usage error") {
    auto r = run({"opg", "gen", "--parts", "4,4,4"});
    CHECK(r.code == 2);
  }
  SUBCASE("bad series literal is a usage error with a cited span") {
    auto r = run({"valo", "alpha", "--p", "2", "--a", "t^(1/6)"});
    CHECK(r.code == 2);
    CHECK(r.err.find("not a power of 2") != std::string::npos);
    CHECK(r.err.find("at ") != std::string::npos);
  }
  SUBCASE("typed engine errors become a JSON payload and exit 1") {
    auto r = run({"opg", "check", "--graph", "/nonexistent/h.json", "--k", "1"});
    CHECK(r.code == 1);
    auto j = ser::parse_json(r.out);
    CHECK(j["error"]["kind"] == "domain");
    CHECK(j["command"] == "opg check");
  }
  SUBCASE("help exits 0 and documents the series grammar") {
    std::ostringstream out, err;
    int code = cli::dispatch({"ndep", "--help"}, out, err);
    CHECK(code == 0);
    CHECK(out.str().find("series literals") != std::string::npos);
  }
}

TEST_CASE("identical invocations dump identical bytes") {
  auto a = run({"iso", "--p", "3", "--k", "2", "--a", "1,3"});
  auto b = run({"iso", "--p", "3", "--k", "2", "--a", "1,3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto c = run({"opg", "gen", "--parts", "5,5,5", "--num", "1", "--den", "2", "--seed", "42"});
  auto d = run({"opg", "gen", "--parts", "5,5,5", "--num", "1", "--den", "2", "--seed", "42"});
  CHECK(c.code == 0);
  CHECK(c.out == d.out);
  auto j = ser::parse_json(c.out);
  CHECK(j["seed"] == 42);
}

TEST_CASE("pretty mode renders the human table") {
  auto r = run({"moore", "--p", "2", "--k", "2", "--tuple", "1,2", "--pretty"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("command: moore", 0) == 0);
  CHECK(r.out.find("overall: PASS") != std::string::npos);
}

TEST_CASE("file round trip through gen and check") {
  std::string path = "cli_roundtrip_tmp.json";
  auto g = run({"opg", "gen", "--parts", "4,4", "--num", "1", "--den", "2", "--seed", "7",
                "--out", path});
  CHECK(g.code == 0);
  auto c = run({"opg", "check", "--graph", path, "--k", "1"});
  CHECK(c.code == 0);
  auto j = ser::parse_json(c.out);
  CHECK(j["values"]["demands"].get<long long>() > 0);
  std::remove(path.c_str());
}

TEST_CASE("assertion failures exit 1") {
  // moore over F_4 with a dependent tuple: the report still passes (the claim
  // is oracle agreement), so instead force a failure via a dependent iso tuple,
  // which the engine rejects as a typed error.
  auto r = run({"iso", "--p", "2", "--k", "2", "--a", "1,1"});
  CHECK(r.code == 1);
  auto j = ser::parse_json(r.out);
  CHECK(j["error"]["kind"] == "domain");
}
