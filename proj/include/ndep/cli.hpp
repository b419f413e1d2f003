#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ndep/serialize.hpp"
#include "ndep/series.hpp"

namespace ndep {
namespace cli {

struct Assertion {
  std::string claim;
  std::string expected;
  std::string computed;
  bool pass = false;
};

/* Reproducible run report: everything it prints is a function of (argv, seed)
   alone, so identical invocations dump identical bytes. */
struct RunReport {
  std::string command;                 // resolved subcommand path
  std::vector<std::string> argv_echo;  // the invocation verbatim
  ser::Json params = ser::Json::object();
  ser::Json values = ser::Json::object();
  std::vector<Assertion> assertions;
  std::optional<uint64_t> seed;

  void require(const std::string& claim, const std::string& expected,
               const std::string& computed, bool pass);
  bool all_pass() const;
  ser::Json to_json() const;     // versioned with a "schema" field
  std::string pretty() const;    // human table
};

/* Parses a sum of c*t^(a/p^e) terms over F_{p^k}; coefficients are canonical
   element indices, exponents integers or parenthesized fractions whose
   denominator must be a power of p.  Errors cite the offending token span. */
algebra::TruncatedSeries parse_series_literal(const std::string& text,
                                              const algebra::FieldPtr& field, int cap,
                                              const std::optional<algebra::PExp>& precision);

/* Entry point behind the binary: exit 0 when every assertion in the produced
   report passes, 1 on assertion failures or typed engine errors (the error is
   reported as a JSON payload), 2 on usage errors. */
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cli
}  // namespace ndep
