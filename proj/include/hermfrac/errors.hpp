#pragma once

#include <stdexcept>
#include <string>

namespace hermfrac {

/// Input outside the mathematical domain of an operation (e.g. tau <= 0).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched dimensions between operands.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Request exceeds a hard capacity limit of the library.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A quadrature failed its internal convergence heuristic, or produced
/// non-finite values.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation requested outside a tabulated range with clamping disabled.
class RangeError : public std::runtime_error {
 public:
  explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed textual function spec or config.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hermfrac
