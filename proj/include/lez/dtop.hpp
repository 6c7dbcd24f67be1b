#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lez/loschmidt.hpp"

namespace lez {

/// Pancharatnam geometric phase of one mode factor at hold time t_f: the
/// accumulated phase of g(t) relative to g(0), minus the dynamical phase
/// -t (|a|^2 e_minus + |b|^2 e_plus), wrapped to (-pi, pi]. Measuring
/// relative to g(0) removes the drive-stage phase, so a constant-drive
/// quench has zero geometric phase at all times. Throws UndefinedAtZero
/// when |g(t_f)| or |g(0)| is below 1e-14.
double geometric_phase(const OverlapCoefficients& mode, double t_f);

/// Winding of the geometric phase across the momentum zone over time.
struct DtopTrace {
  std::vector<double> t;
  std::vector<double> nu;   // near-integer plateaus away from critical times
  Eigen::MatrixXd phases;   // (mode, sample) geometric phases
};

/// nu(t) = (1/2pi) sum over adjacent grid modes of the wrapped difference
/// of geometric phases, from the smallest to the largest momentum. The
/// modes span must be ordered by ascending k (grid order).
DtopTrace dtop_trace(std::span<const OverlapCoefficients> modes,
                     std::span<const double> t_grid);

}  // namespace lez
