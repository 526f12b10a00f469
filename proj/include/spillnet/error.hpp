#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spillnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input row; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class AlignmentError : public Error { using Error::Error; };
class ValidationError : public Error { using Error::Error; };
class LengthError : public Error { using Error::Error; };
class DegenerateSeriesError : public Error { using Error::Error; };
class SingularDesignError : public Error { using Error::Error; };
class DegenerateCovarianceError : public Error { using Error::Error; };
class DegenerateVarianceError : public Error { using Error::Error; };
class SchemaError : public Error { using Error::Error; };
class SliceError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace spillnet
