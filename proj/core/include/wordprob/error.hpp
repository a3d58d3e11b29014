#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wordprob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown token surface or out-of-range token id.
class LookupError : public Error {
 public:
  using Error::Error;
};

class TokenizationError : public Error {
 public:
  TokenizationError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Malformed input: a file, a record, or a constructor argument that
/// breaks a type invariant. `field` names the offending field when known;
/// `line` is 1-based, 0 when not file-backed.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::string field = {},
                  std::size_t line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// Logarithm argument outside the domain (e.g. positive log-probability).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The whitespace-trailing rescaling divides by a zero boundary mass.
class UndefinedRescalingError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EnumerationBudgetError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class SingularDesignError : public Error {
 public:
  SingularDesignError(const std::string& what,
                      std::vector<std::string> collinear)
      : Error(what), collinear_(std::move(collinear)) {}
  const std::vector<std::string>& collinear() const noexcept {
    return collinear_;
  }

 private:
  std::vector<std::string> collinear_;
};

/// Two fits or two error vectors that cannot be compared.
class ComparisonError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace wordprob
