#pragma once

#include <stdexcept>
#include <string>

namespace ersatz {

/// Broad failure classes. The CLI maps each one onto a stable exit code.
enum class ErrorKind {
  kDomain,       // parameter outside its valid range
  kLength,       // series too short for the requested operation
  kSynthesis,    // circulant embedding is not a valid covariance
  kConvergence,  // correlation mapping did not reach tolerance
  kDegeneracy,   // estimator inputs with zero distances or exact copies
  kParse,        // malformed input file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

class LengthError : public Error {
 public:
  explicit LengthError(const std::string& what) : Error(ErrorKind::kLength, what) {}
};

class SynthesisError : public Error {
 public:
  explicit SynthesisError(const std::string& what) : Error(ErrorKind::kSynthesis, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorKind::kConvergence, what) {}
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what) : Error(ErrorKind::kDegeneracy, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::kParse, what) {}
};

/// Rethrows `e` as the same error class with `context` prepended.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string what = context + ": " + e.what();
  switch (e.kind()) {
    case ErrorKind::kDomain: throw DomainError(what);
    case ErrorKind::kLength: throw LengthError(what);
    case ErrorKind::kSynthesis: throw SynthesisError(what);
    case ErrorKind::kConvergence: throw ConvergenceError(what);
    case ErrorKind::kDegeneracy: throw DegeneracyError(what);
    case ErrorKind::kParse: throw ParseError(what);
  }
  throw Error(e.kind(), what);
}

}  // namespace ersatz
