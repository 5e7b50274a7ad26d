#pragma once

#include <stdexcept>
#include <string>

namespace conediff {

/// Malformed input: dimension mismatch, bad cone sizes, pattern violations.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the domain of a map (e.g. the residual map at w = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation that needs a certified solution was handed something else.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A dense operation was asked to materialize more than its guard allows.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A candidate primal-dual triple failed the optimality conditions.
class KktViolation : public std::runtime_error {
 public:
  KktViolation(std::string residual, double value, double tolerance)
      : std::runtime_error(residual + " residual " + std::to_string(value) +
                           " exceeds tolerance " + std::to_string(tolerance)),
        residual_(std::move(residual)),
        value_(value) {}

  const std::string& residual() const { return residual_; }
  double value() const { return value_; }

 private:
  std::string residual_;
  double value_;
};

}  // namespace conediff
