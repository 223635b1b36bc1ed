#pragma once

#include <stdexcept>
#include <string>

namespace gyrokit {

/// Input lies outside the domain of an operation (boundary of the ball,
/// non-positive-definite matrix, zero direction vector, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : std::invalid_argument("dimension mismatch: " + std::to_string(lhs) +
                              " vs " + std::to_string(rhs)) {}
};

/// Classification needs n >= 2; the one-dimensional gyrogroup has
/// non-continuous endomorphisms that no finite probe can detect.
class UnsupportedDimension : public std::invalid_argument {
 public:
  explicit UnsupportedDimension(std::size_t dim)
      : std::invalid_argument("unsupported dimension " + std::to_string(dim) +
                              " (classification requires n >= 2)") {}
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Sampling found no violation of the homomorphism equation, yet the map is
/// neither zero nor orthogonal within tolerance. No verdict is certified.
class ClassificationInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownProperty : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gyrokit
