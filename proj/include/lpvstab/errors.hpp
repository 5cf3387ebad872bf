#pragma once

#include <stdexcept>
#include <string>

namespace lpvstab {

/// The zero-sum rate manifold is empty for the given bounds
/// (sum of lower bounds above zero, or sum of upper bounds below).
struct EmptyManifold : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A combinatorial enumeration would exceed the supported dimension.
struct DimensionGuard : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The circumscribing simplex collapsed (coincident columns).
struct DegenerateSimplex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Mass matrix is not invertible to working precision.
struct SingularMass : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scheduling vector is outside the unit simplex.
struct NotInSimplex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Incompatible dimensions between operands.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An eigenvalue iteration failed to converge within its cap.
struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lpvstab
