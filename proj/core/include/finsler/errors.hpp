#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument of sqrt/log/div/pow is on (or too close to) its singular set,
/// or a closed-form formula hits a pole.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A metric or fundamental tensor is degenerate at the evaluated point.
class SingularMetric : public Error {
 public:
  using Error::Error;
};

/// Division by F on a null direction.
class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// The wind norm is on the wrong side of 1 for the requested branch.
class BranchViolation : public Error {
 public:
  using Error::Error;
};

/// The navigation deformation is undefined because ||beta||_alpha == 1.
class SingularCase : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class PrerequisiteFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace finsler
