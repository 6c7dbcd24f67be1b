#pragma once

#include <stdexcept>

namespace lez {

/// Base class for numerical failures (as opposed to input validation,
/// which throws std::invalid_argument).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two-level kernel gap below the degeneracy tolerance.
struct DegenerateKernel : SolverError {
  using SolverError::SolverError;
};

/// Adaptive integrator cannot meet the requested tolerance.
struct StepUnderflow : SolverError {
  using SolverError::SolverError;
};

/// Fixed-step propagation failed the step-halving convergence check.
struct StepNotConverged : SolverError {
  using SolverError::SolverError;
};

/// No sign change of the residual inside the scanned duration range.
struct NoRootInRange : SolverError {
  using SolverError::SolverError;
};

/// The sudden-quench momentum has no real solution (intra-phase pair).
struct NoRealSolution : SolverError {
  using SolverError::SolverError;
};

/// Critical-time train requested for a mode that is not at its critical rate.
struct NotAtCriticalRate : SolverError {
  using SolverError::SolverError;
};

/// Geometric phase requested where the mode factor vanishes.
struct UndefinedAtZero : SolverError {
  using SolverError::SolverError;
};

}  // namespace lez
