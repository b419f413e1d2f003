#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ndep {
namespace accept {

struct CriterionResult {
  int number = 0;
  std::string name;
  double limit_seconds = 0.0;
  double seconds = 0.0;
  bool ok = false;            // all checks of the criterion held
  bool within_limit = false;  // ran inside its wall-clock budget
  std::string detail;
  bool passed() const { return ok && within_limit; }
};

/* Runs the whole battery in order, streaming one pass/fail line per
   criterion; never throws (a criterion that throws is a failed criterion). */
std::vector<CriterionResult> run_battery(std::ostream& out);

bool battery_passed(const std::vector<CriterionResult>& results);

}  // namespace accept
}  // namespace ndep
