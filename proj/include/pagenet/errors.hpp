#pragma once

#include <stdexcept>
#include <string>

namespace pagenet {

// Error taxonomy shared by every module. Loaders throw parse/validation/
// integrity errors, analytic operations throw domain/lookup errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (bad CSV/JSON line); message carries the line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value outside its legal range or enum set.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Uniqueness or referential-integrity violation across collections.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// An operation called with arguments outside its precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An identifier that does not resolve against a registry.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Pearson correlation requested on a constant vector.
class UndefinedCorrelationError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace pagenet
