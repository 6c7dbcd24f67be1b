#include "lez/ramp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lez/errors.hpp"
#include "lez/parallel.hpp"

namespace lez {

namespace {

// Precomputed chain generator: dz(t) = 2 (p(t) - j cos k) enters with a
// flipped sign in the dynamical basis, dx is constant.
struct ChainDrive {
  double dx;     // 2 j kappa sin k
  double jcosk;  // j cos k
  double p0, slope, duration, p_end;

  double drive(double t) const {
    return t >= duration ? p_end : p0 + slope * t;
  }
  Eigen::Vector2cd operator()(double t, const Eigen::Vector2cd& y) const {
    const double dz = 2.0 * (drive(t) - jcosk);
    return Eigen::Vector2cd(-dz * y(0) + dx * y(1), dx * y(0) + dz * y(1));
  }
};

// Precomputed Haldane generator: dx, dy and the loop sums are constant,
// theta(t) enters through one sin and one cos.
struct HaldaneDrive {
  complex_t f;  // dx + i dy
  double m, t2x2, flux_sin_sum, cos_sum;
  double p0, slope, duration, p_end;

  double drive(double t) const {
    return t >= duration ? p_end : p0 + slope * t;
  }
  Eigen::Vector2cd operator()(double t, const Eigen::Vector2cd& y) const {
    const double theta = drive(t);
    const double dz = m + t2x2 * std::sin(theta) * flux_sin_sum;
    const double d0 = t2x2 * std::cos(theta) * cos_sum;
    return Eigen::Vector2cd((d0 + dz) * y(0) + std::conj(f) * y(1),
                            f * y(0) + (d0 - dz) * y(1));
  }
};

}  // namespace

RampSchedule::RampSchedule(double start, double end, double tau)
    : p_start(start), p_end(end), duration(tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("RampSchedule: duration must be finite and >= 0");
  if (!std::isfinite(start) || !std::isfinite(end))
    throw std::invalid_argument("RampSchedule: drive endpoints must be finite");
}

double RampSchedule::rate() const {
  if (duration == 0.0) {
    if (p_end == p_start) return 0.0;
    return p_end > p_start ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
  }
  return (p_end - p_start) / duration;
}

double RampSchedule::value_at(double t) const {
  if (duration == 0.0 || t >= duration) return p_end;
  if (t <= 0.0) return p_start;
  return p_start + (p_end - p_start) * (t / duration);
}

SpinorState evolve_ramp(const Model& model, const Momentum& k, const RampSchedule& ramp,
                        const SpinorState& initial, double tolerance,
                        IntegrationStats* stats) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("evolve_ramp: tolerance must be positive");
  if (std::abs(initial.norm_sq() - 1.0) > 1e-6)
    throw std::invalid_argument("evolve_ramp: initial state not normalized");
  if (ramp.duration == 0.0) {
    if (stats) *stats = {};
    return initial;
  }
  IntegratorOptions opt;
  opt.rel_tol = tolerance;
  opt.abs_tol = tolerance;
  const double slope = (ramp.p_end - ramp.p_start) / ramp.duration;
  Eigen::Vector2cd out;
  if (model.is_chain()) {
    const double kk = k.chain_k();
    const ChainDrive drive{2.0 * model.coupling() * model.kappa() * std::sin(kk),
                           model.coupling() * std::cos(kk),
                           ramp.p_start,
                           slope,
                           ramp.duration,
                           ramp.p_end};
    out = integrate_schrodinger_apply(drive, 0.0, ramp.duration, initial.vec(), opt, stats);
  } else {
    const DVector probe = model.kernel(k, 0.0);  // theta-independent parts
    const HaldaneParams& hp = model.haldane_params();
    const Eigen::Vector2d kv(k.kx, k.ky);
    double sin_sum = 0.0, cos_sum = 0.0;
    for (const auto& b : model.convention().nnn) {
      sin_sum += std::sin(kv.dot(b));
      cos_sum += std::cos(kv.dot(b));
    }
    const HaldaneDrive drive{complex_t(probe.dx, probe.dy),
                             hp.m,
                             2.0 * hp.t2,
                             model.convention().flux_sign * sin_sum,
                             cos_sum,
                             ramp.p_start,
                             slope,
                             ramp.duration,
                             ramp.p_end};
    out = integrate_schrodinger_apply(drive, 0.0, ramp.duration, initial.vec(), opt, stats);
  }
  return SpinorState::from_vec(out);
}

std::vector<SpinorState> evolve_ramp_batch(const Model& model, const RampSchedule& ramp,
                                           const ModeGrid& grid, double tolerance) {
  if (grid.points.empty()) throw std::invalid_argument("evolve_ramp_batch: empty grid");
  std::vector<SpinorState> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Momentum& k = grid.points[i];
    try {
      const SpinorState start = ground_spinor(model, k, ramp.p_start);
      out[i] = evolve_ramp(model, k, ramp, start, tolerance);
    } catch (const SolverError& e) {
      throw SolverError("mode " + std::to_string(i) + " (k = " + std::to_string(k.kx) +
                        (model.is_chain() ? "" : ", " + std::to_string(k.ky)) +
                        "): " + e.what());
    }
  });
  return out;
}

}  // namespace lez
