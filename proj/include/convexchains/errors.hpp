#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace convexchains {

// Argument outside the mathematical domain of an operation (CLI exit code 2).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured size or work budget would be exceeded (CLI exit code 3).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver gave up; carries the last residual vector.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// Rejection sampler ran out of attempts.
class ConditioningFailure : public ResourceError {
 public:
  ConditioningFailure(const std::string& what, std::int64_t attempts, double nearest_miss)
      : ResourceError(what), attempts_(attempts), nearest_miss_(nearest_miss) {}
  std::int64_t attempts() const noexcept { return attempts_; }
  double nearest_miss() const noexcept { return nearest_miss_; }

 private:
  std::int64_t attempts_;
  double nearest_miss_;
};

}  // namespace convexchains
