#pragma once

#include <stdexcept>
#include <string>

namespace vsearch {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document (missing or mistyped field, unknown key).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Missing entry in an embedding store, word-vector store or table.
class LookupError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Cross-entropy term is infinite because the true class has zero mass.
class DegenerateLossError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Asset file could not be opened or parsed.
class AssetError : public Error {
 public:
  using Error::Error;
};

}  // namespace vsearch
