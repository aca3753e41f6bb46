#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace equipart {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleConstraints : public Error {
 public:
  using Error::Error;
};

class MalformedConstraint : public Error {
 public:
  using Error::Error;
};

/// A placement prefix that cannot be extended by the next object.
class DeadEnd : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateEnvironment : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class UnsupportedSpec : public Error {
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

class EmptyFile : public Error {
 public:
  using Error::Error;
};

class UnknownItem : public Error {
 public:
  using Error::Error;
};

class UnknownSection : public Error {
 public:
  using Error::Error;
};

class UnassignedItem : public Error {
 public:
  using Error::Error;
};

}  // namespace equipart
