#pragma once

#include <stdexcept>
#include <string>

namespace cachecraft {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input violates a documented invariant. `field()` names the offending
// input (e.g. "p", "M", "classes.K_S").
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A size guard or enumeration cap was exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

// Floating-point cancellation produced a value outside its valid range.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace cachecraft
