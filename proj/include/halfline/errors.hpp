#pragma once

#include <stdexcept>
#include <string>

namespace halfline {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The sampling grid cannot resolve what was asked of it.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the input data does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The truncated reference domain lets too much reflected energy back in.
class DomainTooSmall : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace halfline
