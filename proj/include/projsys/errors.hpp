#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace projsys {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by operations whose precondition is a valid SystemSpec.
class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class BreakdownCause {
  DenominatorUnderflow,  ///< a denominator fell below the breakdown threshold
  Overflow,              ///< a component became non-finite
  StateUnderflow,        ///< a component fell below the breakdown threshold
};

const char* to_string(BreakdownCause cause);

struct StepFailure {
  BreakdownCause cause;
  std::size_t component;  ///< 0-based
};

class OrbitBreakdown : public Error {
 public:
  OrbitBreakdown(BreakdownCause cause, std::size_t component)
      : Error(std::string("orbit breakdown: ") + to_string(cause) +
              " in component " + std::to_string(component + 1)),
        cause_(cause),
        component_(component) {}

  BreakdownCause cause() const noexcept { return cause_; }
  std::size_t component() const noexcept { return component_; }

 private:
  BreakdownCause cause_;
  std::size_t component_;
};

class DimensionTooSmall : public Error {
 public:
  DimensionTooSmall()
      : Error("dimension too small for reduction (k>1 required)") {}
};

class NotProjective : public Error {
 public:
  NotProjective() : Error("system is not projective") {}
};

class DegenerateRiccati : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class NotClassifiable : public Error {
 public:
  using Error::Error;
};

}  // namespace projsys
