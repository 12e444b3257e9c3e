#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace curator {

/// Malformed or unreadable input: bad JSON, missing file, schema mismatch.
/// Maps to exit code 2 at the command line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure with a line/record locus inside a newline-delimited file.
class ParseError : public InputError {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : InputError(path + ":" + std::to_string(line) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  [[nodiscard]] const std::string& path() const noexcept { return path_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// A precondition on a numerical routine was violated by its caller.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace curator
