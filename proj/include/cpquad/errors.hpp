#pragma once

#include <stdexcept>
#include <string>

namespace cpquad {

/// Invalid or inconsistent user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base of every failure that comes from the numerics rather than the
/// configuration (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No grid node satisfies the band predicate.
class EmptyBandError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A theorem hypothesis such as eps * max|kappa| < 1 does not hold.
class PreconditionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Query point on the medial axis / focal set where the requested
/// quantity is undefined.
class SingularPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A stencil or sample would need nodes outside the grid, or the
/// shape's band leaves the sampling box.
class GridBoundaryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace cpquad
