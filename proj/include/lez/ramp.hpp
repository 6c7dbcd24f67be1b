#pragma once

#include <vector>

#include "lez/bloch.hpp"
#include "lez/ode.hpp"

namespace lez {

/// Linear drive schedule: p(t) = p_start + (p_end - p_start) t / duration
/// for t in [0, duration], held at p_end afterwards. duration = 0 is the
/// sudden quench.
struct RampSchedule {
  double p_start = 0.0;
  double p_end = 0.0;
  double duration = 0.0;

  RampSchedule() = default;
  RampSchedule(double start, double end, double tau);

  /// (p_end - p_start) / duration; +-inf in the sudden limit.
  double rate() const;
  double value_at(double t) const;
};

/// Integrates the mode through the ramp. The initial state must be
/// normalized; the result carries a global error at most ~tolerance per
/// component and a norm drift at most 10x tolerance.
SpinorState evolve_ramp(const Model& model, const Momentum& k, const RampSchedule& ramp,
                        const SpinorState& initial, double tolerance = 1e-10,
                        IntegrationStats* stats = nullptr);

/// Per-mode ramp evolution starting from each mode's ground state, in grid
/// order. Modes are integrated in parallel; failures are rethrown with the
/// mode identity prepended.
std::vector<SpinorState> evolve_ramp_batch(const Model& model, const RampSchedule& ramp,
                                           const ModeGrid& grid, double tolerance = 1e-10);

}  // namespace lez
