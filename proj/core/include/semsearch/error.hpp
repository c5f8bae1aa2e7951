#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semsearch {

/// Stable error classes. The CLI maps these to exit codes and prints
/// `error[<name>]: message` on the diagnostic stream.
enum class ErrorCode {
  kUsage,      // bad arguments or precondition on caller input
  kEncoding,   // invalid UTF-8
  kParse,      // malformed record in a data file
  kData,       // well-formed input that violates a data contract
  kSchema,     // feature schema mismatch between model and vector
  kVersion,    // persisted format version mismatch
  kIo,         // file system failure or corrupted file
  kInvariant,  // internal invariant violated
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class EncodingError : public Error {
 public:
  EncodingError(std::size_t byte_offset, const std::string& message)
      : Error(ErrorCode::kEncoding, message), byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace semsearch
