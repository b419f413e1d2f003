#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ndep {

/* Base for all typed failures; `kind` is the machine-readable tag the CLI
   serializes into error payloads. */
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/* Bad argument or violated precondition. */
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/* An exponent denominator would exceed the perfection cap of a series. */
struct CapOverflow : Error {
  explicit CapOverflow(const std::string& what) : Error("cap-overflow", what) {}
};

/* A comparison or valuation was requested below tracked precision. */
struct PrecisionLoss : Error {
  explicit PrecisionLoss(const std::string& what) : Error("precision", what) {}
};

/* A tuple failed the defining equations of the group it was claimed to lie in. */
struct MembershipError : Error {
  explicit MembershipError(const std::string& what) : Error("membership", what) {}
};

/* A computed object failed a structural identity that should hold by theorem;
   signals an implementation bug or an out-of-model input, never user error. */
struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

/* A search exceeded its explicit budget. `partial` carries the best verified
   bounds so far as a JSON fragment. */
struct BudgetExceeded : Error {
  BudgetExceeded(const std::string& what, std::string partial_json = "{}")
      : Error("budget", what), partial(std::move(partial_json)) {}
  std::string partial;
};

}  // namespace ndep
