#include "lez/dtop.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lez/errors.hpp"
#include "lez/parallel.hpp"

namespace lez {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFactorFloor = 1e-14;

double wrap_phase(double x) {
  double y = std::remainder(x, 2.0 * kPi);
  if (y <= -kPi) y += 2.0 * kPi;
  return y;
}
}  // namespace

double geometric_phase(const OverlapCoefficients& mode, double t_f) {
  if (!(t_f >= 0.0)) throw std::invalid_argument("geometric_phase: t_f must be >= 0");
  const complex_t g = mode.factor(t_f);
  const complex_t g0 = mode.a + mode.b;
  if (std::abs(g) <= kFactorFloor || std::abs(g0) <= kFactorFloor)
    throw UndefinedAtZero("geometric_phase: mode factor vanishes");
  const double dynamical =
      -t_f * (std::norm(mode.a) * mode.e_minus + std::norm(mode.b) * mode.e_plus);
  return wrap_phase(std::arg(g) - std::arg(g0) - dynamical);
}

DtopTrace dtop_trace(std::span<const OverlapCoefficients> modes,
                     std::span<const double> t_grid) {
  if (modes.size() < 2) throw std::invalid_argument("dtop_trace: need at least 2 modes");
  DtopTrace trace;
  trace.t.assign(t_grid.begin(), t_grid.end());
  trace.nu.resize(t_grid.size());
  trace.phases.resize(static_cast<Eigen::Index>(modes.size()),
                      static_cast<Eigen::Index>(t_grid.size()));
  parallel_for(t_grid.size(), [&](std::size_t s) {
    const double t = t_grid[s];
    for (std::size_t m = 0; m < modes.size(); ++m)
      trace.phases(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s)) =
          geometric_phase(modes[m], t);
    double winding = 0.0;
    for (std::size_t m = 0; m + 1 < modes.size(); ++m)
      winding += wrap_phase(trace.phases(m + 1, s) - trace.phases(m, s));
    trace.nu[s] = winding / (2.0 * kPi);
  });
  return trace;
}

}  // namespace lez
