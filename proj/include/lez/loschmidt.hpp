#pragma once

#include <span>
#include <vector>

#include "lez/bloch.hpp"
#include "lez/ramp.hpp"

namespace lez {

/// Threshold below which a mode amplitude is treated as vanished and the
/// relative phase phi is left undefined.
inline constexpr double kPhaseUnderflow = 1e-300;

/// Threshold below which the echo is flagged as an exact zero and the rate
/// function reported as the +inf sentinel.
inline constexpr double kEchoUnderflow = 1e-300;

/// Hold-stage data of one mode. The Loschmidt factor is
///   g(t) = a e^{-i e_minus t} + b e^{-i e_plus t},
/// with `a` the weight routed through the lower final eigenstate and `b`
/// through the upper one. For the chains both reduce to products of real
/// Bogoliubov amplitudes.
struct OverlapCoefficients {
  complex_t a{0.0, 0.0};
  complex_t b{0.0, 0.0};
  double e_plus = 0.0;
  double e_minus = 0.0;
  double phi = 0.0;           // Arg(a/b), wrapped to (-pi, pi]
  bool phase_defined = true;  // false when |a| or |b| underflows

  double gap() const { return e_plus - e_minus; }
  complex_t factor(double t) const;
  double factor_sq(double t) const;
};

OverlapCoefficients overlap_coefficients(const SpinorState& initial,
                                         const SpinorState& post_ramp,
                                         const FinalEigenbasis& basis);

/// Full quench pipeline for every grid mode: ground state at ramp.p_start,
/// ramp evolution, overlap against the eigenbasis at ramp.p_end. Parallel
/// over modes, ordered as the grid.
std::vector<OverlapCoefficients> quench_coefficients(const Model& model,
                                                     const ModeGrid& grid,
                                                     const RampSchedule& ramp,
                                                     double tolerance = 1e-10);

/// |G(t_f)|^2, the product of mode factor magnitudes squared, clamped to [0, 1].
double loschmidt_amplitude_sq(std::span<const OverlapCoefficients> modes, double t_f);

struct RateTrace {
  std::vector<double> t;
  std::vector<double> echo;          // |G|^2
  std::vector<double> rate;          // lambda; +inf sentinel at exact zeros
  std::vector<unsigned char> exact_zero;

  double max_rate() const;
};

RateTrace rate_trace(std::span<const OverlapCoefficients> modes,
                     std::span<const double> t_grid, double normalizer);

/// Uniform grid helper for traces; step defaults to 1e-3 elsewhere.
std::vector<double> uniform_grid(double t_max, double step);

/// Zeros of one mode factor: base + n * period for integer n >= 0, where
/// period = 2*pi / (e_plus - e_minus). Requires |a| and |b| equal to within
/// 1e-6 relative (the critical-rate condition).
struct CriticalTimeTrain {
  double base = 0.0;
  double period = 0.0;
  double phi = 0.0;
  std::vector<double> times;  // strictly positive entries for n = 0..n_max
};

CriticalTimeTrain critical_times(const OverlapCoefficients& tuned_mode, int n_max = 10);

}  // namespace lez
