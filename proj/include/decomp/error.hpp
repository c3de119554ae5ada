#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text that does not follow its documented format. `line()` is
/// 1-based; 0 means the problem is not tied to a single line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("matrix is not positive definite (non-positive pivot at index " +
              std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  /// Row/column of the failing pivot in the caller's (unpermuted) indexing.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace decomp
