#pragma once

#include <vector>

#include "lez/loschmidt.hpp"

namespace lez {

/// Root-search configuration for the critical quench duration.
struct TauSearch {
  double tau_lo = 1e-3;
  double tau_hi = 0.0;          // 0 = mode-aware default, 10 (pi/k)^2 for chains
  int scan_points = 400;        // log-spaced sign-scan grid
  double ode_tol = 1e-10;       // evolution tolerance for reported quantities
  double scan_tol = 1e-8;       // looser tolerance for the sign scan
  double bracket_rel = 1e-9;    // final bracket width relative to tau_c
  int n_max = 10;               // critical-time train length
};

/// Default scan ceiling, 10 N^2 (the maximal duration grows ~N^2.2).
double default_tau_hi(int sites);

/// Signed constraint residual |a| - |b| for the quench drive_i -> drive_f
/// at mode k and ramp duration tau. Continuous in tau; roots are the
/// critical durations.
double lez_residual(const Model& model, double drive_i, double drive_f,
                    const Momentum& k, double tau, double ode_tol = 1e-10);

struct CriticalRateResult {
  Momentum k;
  double tau_c = 0.0;
  double residual = 0.0;  // |a| - |b| at tau_c
  double phi = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  OverlapCoefficients coeffs;
  CriticalTimeTrain train;
};

enum class RootPick { Smallest, Largest };

/// Locates a critical duration by sign-scanning a log-spaced tau grid and
/// refining the chosen bracket by a bisection/secant hybrid. Throws
/// NoRootInRange when no sign change exists in the range.
CriticalRateResult find_tau_c(const Model& model, double drive_i, double drive_f,
                              const Momentum& k, const TauSearch& search = {},
                              RootPick pick = RootPick::Smallest);

/// Every bracketed root in the range, ascending.
std::vector<CriticalRateResult> find_all_tau_c(const Model& model, double drive_i,
                                               double drive_f, const Momentum& k,
                                               const TauSearch& search = {});

/// Momentum at which a sudden inter-phase quench admits an exact echo zero.
/// Real only when (h_i - 1)(h_f - 1) < 0; throws NoRealSolution otherwise.
double sudden_ks(double h_i, double h_f);

/// Largest critical duration of the system, carried by the smallest
/// momentum mode k = pi/N.
CriticalRateResult tau_max(const Model& model, double drive_i, double drive_f,
                           int sites, const TauSearch& search = {});

struct ScalingPoint {
  int sites = 0;
  double tau = 0.0;
};

/// Power law tau(N) = prefactor * N^exponent fitted by least squares in
/// log-log coordinates.
struct ScalingFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double rms_log_residual = 0.0;
  std::vector<ScalingPoint> points;
};

ScalingFit fit_power_law(const std::vector<ScalingPoint>& points);

/// Computes tau_max over the given sizes (>= 5, even) and fits the power law.
ScalingFit scaling_fit(const Model& model, double drive_i, double drive_f,
                       const std::vector<int>& sizes, const TauSearch& search = {});

struct ModeRoot {
  std::size_t index = 0;
  Momentum k;
  double tau_c = 0.0;
};

/// Grid modes whose residual changes sign in the scanned range, each with
/// its smallest root refined. Empty result allowed.
std::vector<ModeRoot> lez_tunable_modes(const Model& model, double drive_i,
                                        double drive_f, const ModeGrid& grid,
                                        const TauSearch& search = {});

/// XY census wrapper: modes of the N-site chain tunable to an echo zero.
std::vector<ModeRoot> xy_lez_modes(double kappa, double h_i, double h_f, int sites,
                                   const TauSearch& search = {});

/// Haldane wrapper: critical duration at one Bloch momentum for the NNN
/// phase ramp theta_i -> theta_f.
CriticalRateResult haldane_find_tau(const HaldaneParams& params, double theta_i,
                                    double theta_f, const Momentum& k,
                                    const TauSearch& search = {},
                                    const HaldaneConvention& conv = HaldaneConvention::standard());

}  // namespace lez
