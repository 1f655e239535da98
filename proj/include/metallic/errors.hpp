#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is 1-based; input length + 1 means
/// end of input.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& what)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Evaluation left the real domain (ln/sqrt of negative, division by zero...).
class DomainError : public Error {
 public:
  DomainError(std::string subexpr, const std::string& what)
      : Error(what), subexpr_(std::move(subexpr)) {}
  const std::string& subexpr() const noexcept { return subexpr_; }

 private:
  std::string subexpr_;
};

/// Numerical failures: singular metric, stencil leaving the chart.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public NumericalError {
 public:
  SingularMetricError(std::vector<double> point, const std::string& what)
      : NumericalError(what), point_(std::move(point)) {}
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

class BoundaryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Manifold spec file could not be turned into a structure bundle.
class SpecError : public Error {
 public:
  SpecError(std::string file, std::size_t line, std::size_t column, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mk
