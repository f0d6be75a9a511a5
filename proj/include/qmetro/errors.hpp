#pragma once

#include <stdexcept>
#include <string>

namespace qmetro {

// Error categories map one-to-one onto CLI exit codes (see cli.hpp).
enum class ErrorKind {
  dimension,
  numeric,
  domain,
  resource,
  constraint,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorKind::dimension, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::numeric, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::domain, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::resource, what) {}
};

class ConstraintError : public Error {
 public:
  explicit ConstraintError(const std::string& what)
      : Error(ErrorKind::constraint, what) {}
};

}  // namespace qmetro
