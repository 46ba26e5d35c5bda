#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace gkq {

// Base for every error raised by the library. The CLI maps the two
// families below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: bad parameters, violated preconditions, guards.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegreeOverflowError : public DomainError {
 public:
  DegreeOverflowError(int degree, int guard)
      : DomainError("polynomial degree " + std::to_string(degree) +
                    " exceeds guard " + std::to_string(guard)),
        degree_(degree) {}

  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

class IndexError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Arithmetic went wrong on valid input.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public NumericalFailure {
 public:
  IllConditionedError(const std::string& what, double condition_estimate)
      : NumericalFailure(format(what, condition_estimate)),
        condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  static std::string format(const std::string& what, double cond) {
    std::ostringstream os;
    os << what << " (condition estimate " << cond << ")";
    return os.str();
  }

  double condition_estimate_;
};

}  // namespace gkq
