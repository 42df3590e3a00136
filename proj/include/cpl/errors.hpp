#pragma once

#include <stdexcept>
#include <string>

namespace cpl {

/// Input outside the domain of a closed-form expression (e.g. a negative
/// radicand between the inner and outer horizon).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters that violate a precondition of the solution family or of a
/// discretization (m < |q|, n < 3, nonpositive radius, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The induced metric of a surface degenerated at some node.
class DegenerateMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse mean curvature flow could not continue: H <= 0 somewhere.
class FlowBreakdownError : public std::runtime_error {
 public:
  FlowBreakdownError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Asymptotic data does not decay fast enough for the mass to be defined.
class DecayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Richardson extrapolation did not settle.
class ExtrapolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (surface tables, data definition files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpl
