#pragma once

#include <stdexcept>
#include <string>

namespace tripod {

/// Rejected input: bad cutoff, out-of-range index, malformed config.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The adaptive integrator could not make progress.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A mixing angle was requested with both of its defining couplings zero.
class UndefinedAngleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Conditional fidelity requested on a state with no weight in the success sector.
class UndefinedFidelityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tripod
