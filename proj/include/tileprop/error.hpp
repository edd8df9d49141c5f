#pragma once

#include <stdexcept>
#include <string>

namespace tileprop {

/// Base class of every error raised by the library. The CLI maps all of
/// these to exit code 2 (data/validation error).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Shapes that disagree or are degenerate.
class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

/// Encoded data that is internally inconsistent (RLE sums, truncated payloads).
class CorruptionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "corruption"; }
};

/// Values outside their documented range.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace tileprop
