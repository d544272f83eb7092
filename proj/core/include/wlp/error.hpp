#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlp {

struct SourceSpan {
  int line = 0;    // 1-based, 0 when unknown
  int column = 0;  // 1-based, 0 when unknown

  bool known() const { return line > 0; }
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;
  std::optional<std::size_t> rule;  // 0-based rule index, if the diagnostic is about a rule

  std::string to_string() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Carrier mismatch, non-integer arithmetic base, NaN.
class TypeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourceSpan span);
  const SourceSpan& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, std::size_t iterations, double residual);
  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

class TransformError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace wlp
