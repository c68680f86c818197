#pragma once

#include <stdexcept>
#include <string>

namespace lamcat {

// Parameter outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Numerical routine could not reach the requested accuracy.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_tolerance)
      : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

// Internal bookkeeping went wrong; always a bug in a sampler or caller.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A coalescent with a single block has no further events.
class TerminalStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lamcat
