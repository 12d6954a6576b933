#pragma once

#include <stdexcept>
#include <string>

namespace blochsim {

enum class ErrorCode {
  invalid_parameter,
  no_oscillation,
  range,
  numeric,
  invalid_profile,
  unsupported_continuation,
  singularity,
  degenerate,
  step_size,
  window_too_small,
  config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the boundary guard; carries the first snapshot time at which
/// the packet reached the window edge.
class WindowTooSmall : public Error {
 public:
  WindowTooSmall(double time, double fraction);

  double time() const noexcept { return time_; }
  double fraction() const noexcept { return fraction_; }

 private:
  double time_;
  double fraction_;
};

}  // namespace blochsim
