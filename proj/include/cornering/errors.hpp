#pragma once

#include <stdexcept>
#include <string>

namespace cornering {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction of a composite whose boundaries do not meet.
struct BoundaryMismatch : Error {
  using Error::Error;
};

// A slice list whose intermediate words do not chain.
struct ChainBroken : Error {
  using Error::Error;
};

struct UnknownGenerator : Error {
  using Error::Error;
};

struct TypeMismatch : Error {
  using Error::Error;
};

struct NotVertical : Error {
  using Error::Error;
};

struct NotZeroSpecial : Error {
  using Error::Error;
};

struct NotClosed : Error {
  using Error::Error;
};

struct InvalidPosition : Error {
  using Error::Error;
};

// A step replayed against a term it does not match.
struct StepMismatch : Error {
  using Error::Error;
};

struct StepBudgetExceeded : Error {
  using Error::Error;
};

// No term of the requested type within the size budget.
struct Unsatisfiable : Error {
  using Error::Error;
};

// Internal assertion: a popped form with a vertical boundary that is not a
// plain base cell would contradict the normalization theorem.
struct ShapeViolation : Error {
  using Error::Error;
};

struct BudgetExceeded : Error {
  using Error::Error;
};

}  // namespace cornering
