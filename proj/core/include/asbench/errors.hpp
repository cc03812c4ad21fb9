#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asbench {

/// Malformed input file. what() reads "file:line: reason".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& reason)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason),
        file_(std::move(file)),
        line_(line) {}

  [[nodiscard]] const std::string& file() const noexcept { return file_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Input that parsed but breaks a model invariant (scenario, schedule, split).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace asbench
