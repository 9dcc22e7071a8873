#pragma once

#include <stdexcept>
#include <string>

namespace dw {

// Root of every exception thrown by the library. Callers that only need to
// report a message catch this; callers that branch on the failure catch the
// module-specific subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed component-table document or invalid record.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed token-per-line annotation file.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class AlreadyInstalledError : public Error {
 public:
  using Error::Error;
};

}  // namespace dw
