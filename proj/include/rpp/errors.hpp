#pragma once

#include <stdexcept>
#include <string>

namespace rpp {

// Base for everything thrown by this library. `code()` is the stable
// machine-readable tag used by the CLI's {"error": ...} output.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

struct CapExceeded : Error {
  explicit CapExceeded(const std::string& w) : Error("CapExceeded", w) {}
};
struct TooLarge : Error {
  explicit TooLarge(const std::string& w) : Error("TooLarge", w) {}
};
struct BiasTooHigh : Error {
  explicit BiasTooHigh(const std::string& w) : Error("BiasTooHigh", w) {}
};
struct TooLargeToVerify : Error {
  explicit TooLargeToVerify(const std::string& w) : Error("TooLargeToVerify", w) {}
};
struct RegimeViolation : Error {
  explicit RegimeViolation(const std::string& w) : Error("RegimeViolation", w) {}
};
struct NoHit : Error {
  explicit NoHit(const std::string& w) : Error("NoHit", w) {}
};
struct EstimatorStuck : Error {
  explicit EstimatorStuck(const std::string& w) : Error("EstimatorStuck", w) {}
};
struct VerificationFailed : Error {
  explicit VerificationFailed(const std::string& w) : Error("VerificationFailed", w) {}
};
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error("InvalidArgument", w) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error("ParseError", w) {}
};

}  // namespace rpp
