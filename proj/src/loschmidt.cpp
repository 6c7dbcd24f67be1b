#include "lez/loschmidt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lez/errors.hpp"
#include "lez/parallel.hpp"

namespace lez {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr complex_t kMinusI{0.0, -1.0};

double wrap_phase(double x) {
  double y = std::remainder(x, 2.0 * kPi);
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}
}  // namespace

complex_t OverlapCoefficients::factor(double t) const {
  return a * std::exp(kMinusI * (e_minus * t)) + b * std::exp(kMinusI * (e_plus * t));
}

double OverlapCoefficients::factor_sq(double t) const { return std::norm(factor(t)); }

OverlapCoefficients overlap_coefficients(const SpinorState& initial,
                                         const SpinorState& post_ramp,
                                         const FinalEigenbasis& basis) {
  if (std::abs(initial.norm_sq() - 1.0) > 1e-6 || std::abs(post_ramp.norm_sq() - 1.0) > 1e-6)
    throw std::invalid_argument("overlap_coefficients: spinors must be normalized");
  const Eigen::Vector2cd psi_i = initial.vec();
  const Eigen::Vector2cd psi_t = post_ramp.vec();
  OverlapCoefficients out;
  out.a = psi_i.dot(basis.minus) * basis.minus.dot(psi_t);
  out.b = psi_i.dot(basis.plus) * basis.plus.dot(psi_t);
  out.e_plus = basis.e_plus;
  out.e_minus = basis.e_minus;
  out.phase_defined = std::abs(out.a) >= kPhaseUnderflow && std::abs(out.b) >= kPhaseUnderflow;
  out.phi = out.phase_defined ? wrap_phase(std::arg(out.a) - std::arg(out.b)) : 0.0;
  return out;
}

std::vector<OverlapCoefficients> quench_coefficients(const Model& model,
                                                     const ModeGrid& grid,
                                                     const RampSchedule& ramp,
                                                     double tolerance) {
  if (grid.points.empty()) throw std::invalid_argument("quench_coefficients: empty grid");
  std::vector<OverlapCoefficients> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Momentum& k = grid.points[i];
    const SpinorState start = ground_spinor(model, k, ramp.p_start);
    const SpinorState after = evolve_ramp(model, k, ramp, start, tolerance);
    out[i] = overlap_coefficients(start, after, final_eigenbasis(model, k, ramp.p_end));
  });
  return out;
}

double loschmidt_amplitude_sq(std::span<const OverlapCoefficients> modes, double t_f) {
  if (!(t_f >= 0.0)) throw std::invalid_argument("loschmidt_amplitude_sq: t_f must be >= 0");
  double product = 1.0;
  for (const auto& mode : modes) product *= mode.factor_sq(t_f);
  return std::clamp(product, 0.0, 1.0);
}

double RateTrace::max_rate() const {
  double best = -std::numeric_limits<double>::infinity();
  for (double r : rate) best = std::max(best, r);
  return best;
}

RateTrace rate_trace(std::span<const OverlapCoefficients> modes,
                     std::span<const double> t_grid, double normalizer) {
  if (!(normalizer > 0.0)) throw std::invalid_argument("rate_trace: bad normalizer");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("rate_trace: t grid must be strictly increasing");
  RateTrace trace;
  trace.t.assign(t_grid.begin(), t_grid.end());
  trace.echo.resize(t_grid.size());
  trace.rate.resize(t_grid.size());
  trace.exact_zero.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double g2 = loschmidt_amplitude_sq(modes, t_grid[i]);
    trace.echo[i] = g2;
    const bool zero = g2 < kEchoUnderflow;
    trace.exact_zero[i] = zero ? 1 : 0;
    trace.rate[i] =
        zero ? std::numeric_limits<double>::infinity() : -std::log(g2) / normalizer;
  });
  return trace;
}

std::vector<double> uniform_grid(double t_max, double step) {
  if (!(t_max > 0.0) || !(step > 0.0))
    throw std::invalid_argument("uniform_grid: t_max and step must be positive");
  std::vector<double> t;
  const auto n = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
  t.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t.push_back(static_cast<double>(i) * step);
  return t;
}

CriticalTimeTrain critical_times(const OverlapCoefficients& tuned_mode, int n_max) {
  if (n_max < 0) throw std::invalid_argument("critical_times: n_max must be >= 0");
  const double ma = std::abs(tuned_mode.a);
  const double mb = std::abs(tuned_mode.b);
  const double scale = std::max(ma, mb);
  if (!(scale > 0.0) || std::abs(ma - mb) > 1e-6 * scale)
    throw NotAtCriticalRate("critical_times: mode does not satisfy |a| = |b|");
  if (!tuned_mode.phase_defined)
    throw NotAtCriticalRate("critical_times: relative phase undefined");
  CriticalTimeTrain train;
  const double gap = tuned_mode.gap();
  train.phi = tuned_mode.phi;
  train.period = 2.0 * kPi / gap;
  train.base = (kPi - tuned_mode.phi) / gap;
  train.times.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double t = (kPi * (2.0 * n + 1.0) - tuned_mode.phi) / gap;
    if (t > 0.0) train.times.push_back(t);
  }
  return train;
}

}  // namespace lez
