#pragma once

#include <stdexcept>
#include <string>

namespace qfactor {

// Precondition violated by the caller (bad N, r = 0, packet outside the box, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Work requested exceeds a configured term or grid budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature could not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfactor
