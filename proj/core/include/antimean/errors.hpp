#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace antimean {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of the log/exp chart at the identity of RP^3.
class ChartDomainError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// The smallest eigenvalue of some axial block is not simple, so the farthest
// projection (and hence the antimean) is undefined.
class FocalPointError : public Error {
 public:
  FocalPointError(std::size_t block, double gap, double tolerance)
      : Error("focal point: axial block " + std::to_string(block) +
              " has eigengap " + std::to_string(gap) + " <= tolerance " +
              std::to_string(tolerance)),
        block_(block),
        gap_(gap) {}

  std::size_t block() const noexcept { return block_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t block_;
  double gap_;
};

class SingularCovarianceError : public Error {
 public:
  using Error::Error;
};

class FrameDegenerateError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class BootstrapDegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace antimean
