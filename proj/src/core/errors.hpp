#pragma once

#include <stdexcept>
#include <string>

namespace circlekit {

enum class ErrorKind {
  domain,
  convergence,
  resource,
  consistency,
  parse,
  lookup,
  aliasing,
  io,
  internal,
};

// Base of every exception thrown by the library. The kind is what the C API
// reports back as a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorKind::convergence, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

// Two independent computations of the same quantity disagreed.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(ErrorKind::consistency, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error(ErrorKind::lookup, what) {}
};

class AliasingError : public Error {
 public:
  explicit AliasingError(const std::string& what) : Error(ErrorKind::aliasing, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

}  // namespace circlekit
