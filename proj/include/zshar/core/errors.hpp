#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace zshar {

// Error families map onto CLI exit codes: config = 1, data = 2, provider = 3.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recoverable: the caller decides whether to skip the line or abort.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line_number, std::string reason)
      : DataError("line " + std::to_string(line_number) + ": " + reason),
        line_number_(line_number),
        reason_(std::move(reason)) {}

  std::size_t line_number() const noexcept { return line_number_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_number_;
  std::string reason_;
};

}  // namespace zshar
