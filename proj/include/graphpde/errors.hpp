#pragma once

#include <stdexcept>
#include <string>

namespace graphpde {

/// Malformed or inconsistent input document (graph file, initial data).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative routine exhausted its iteration budget. `diagnostic` holds
/// the quantity that signals the failure mode: the last contraction ratio
/// for Picard iteration, the last Euler-Lagrange residual for the ground
/// state search, the remaining off-diagonal mass for the eigensolver.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, int iterations, double diagnostic)
      : std::runtime_error(what), iterations_(iterations), diagnostic_(diagnostic) {}

  int iterations() const noexcept { return iterations_; }
  double diagnostic() const noexcept { return diagnostic_; }

private:
  int iterations_;
  double diagnostic_;
};

}  // namespace graphpde
