#include <iostream>

#include "ndep/accept.hpp"

int main() {
  auto results = ndep::accept::run_battery(std::cout);
  bool ok = ndep::accept::battery_passed(results);
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILURES above") << "\n";
  return ok ? 0 : 1;
}
