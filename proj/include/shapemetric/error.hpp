// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapemetric {

enum class ErrorKind {
  EmptyGeometry,
  DegenerateGeometry,
  Format,
  Structural,
  Data,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; callers switch on kind().
/// Format errors carry the 1-based line number of the offending record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  /// The message without the kind and line prefix.
  const std::string& detail() const noexcept { return detail_; }
  /// Same kind and line, message prefixed with context (typically a path).
  Error within(const std::string& context) const { return Error(kind_, context + ": " + detail_, line_); }

 private:
  ErrorKind kind_;
  std::size_t line_;
  std::string detail_;
};

}  // namespace shapemetric
