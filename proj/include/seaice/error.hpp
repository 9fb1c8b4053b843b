// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace seaice {

/// Failure categories surfaced by the core. The C API maps these one-to-one
/// onto its integer status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  Parse,
  Validation,
  Io,
  CflViolation,
  DegenerateThickness,
  NoConvergence,
  NonContraction,
  BoundViolation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seaice
