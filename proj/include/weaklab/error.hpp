#pragma once

#include <stdexcept>
#include <string>

namespace weaklab {

enum class Errc {
  invalid_argument,
  domain_error,
  singular_point,
  tolerance_not_met,
  invalid_weight,
  insufficient_data,
  insufficient_variation,
  parse_error,
  io_error,
};

const char* to_string(Errc code) noexcept;

/// Every failure in the library is reported through this type; `code()`
/// tells callers (the CLI in particular) which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Quadrature that stopped short of its tolerance. Carries the best estimate.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, double estimate, double error_estimate)
      : Error(Errc::tolerance_not_met, what), estimate_(estimate), error_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace weaklab
