#pragma once

#include <stdexcept>
#include <string>

namespace padben {

// Error categories shared between the C++ core and the C API status codes.
enum class ErrorCode {
  invalid_argument,
  io,
  parse,
  transport,   // network-level failure (retryable)
  refusal,     // provider answered but declined or produced unusable output
  capability,  // provider cannot perform the requested operation
  degenerate,  // mathematically undefined result (sigma = 0, single-class AUROC, ...)
  checksum,    // artifact content does not match its recorded hash
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace padben
