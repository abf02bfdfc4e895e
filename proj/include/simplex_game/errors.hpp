#pragma once

#include <stdexcept>
#include <string>

namespace sgame {

/// Input rejected by a validation rule (bad weights, out-of-range indices, malformed config).
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// The strength distribution is too close to a face of the simplex to embed reliably.
class DegeneracyError : public std::runtime_error {
public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Exhaustive enumeration refused because the profile space exceeds the budget.
class BudgetError : public std::length_error {
public:
  explicit BudgetError(const std::string& what) : std::length_error(what) {}
};

/// Numerical integration produced a non-finite value.
class IntegrationError : public std::runtime_error {
public:
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgame
