#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature or interpolation could not reach the requested accuracy.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

private:
  double achieved_;
};

class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, std::string trace = {})
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::string& trace() const { return trace_; }

private:
  std::string trace_;
};

} // namespace hmf

namespace hmf {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hmf
