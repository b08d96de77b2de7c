#pragma once

#include <stdexcept>
#include <string>

namespace anomalous {

/// Invalid model parameters or a request outside the supported regime.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// No eternal self-similar solutions exist for m >= (N-2)/N.
struct NoEternalSolutions : DomainError {
  using DomainError::DomainError;
};

/// A point handed to the linearizer is not an equilibrium of its chart.
struct NotEquilibrium : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive step size underflowed (reported with parameter and state).
struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An event sign change disappeared under dense-output refinement.
struct BracketLost : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometric bracket expansion exhausted its K range without a sign change.
struct BracketNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An orbit lacks the asymptotic regime needed for profile reconstruction.
struct DegenerateOrbit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fitted tail decays too slowly to integrate against xi^(N-1).
struct NonIntegrableTail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed-form family evaluated off the parameter set where it exists.
struct ConstraintViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested combination the analysis does not cover.
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace anomalous
