// SPDX-License-Identifier: Apache-2.0
#include "shapemetric/error.hpp"

#include <string>

namespace shapemetric {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyGeometry: return "empty geometry";
    case ErrorKind::DegenerateGeometry: return "degenerate geometry";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Structural: return "structural error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

namespace {

std::string compose(ErrorKind kind, const std::string& what, std::size_t line) {
  std::string msg = to_string(kind);
  if (line > 0) msg += " at line " + std::to_string(line);
  msg += ": ";
  msg += what;
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& what, std::size_t line)
    : std::runtime_error(compose(kind, what, line)), kind_(kind), line_(line), detail_(what) {}

}  // namespace shapemetric
