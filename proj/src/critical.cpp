#include "lez/critical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lez/errors.hpp"
#include "lez/parallel.hpp"

namespace lez {

namespace {

constexpr double kPi = std::numbers::pi;

// Residual refinement runs at a tighter integrator tolerance than the
// sign scan so the root can be polished well below the 1e-10 contract.
constexpr double kRefineTol = 1e-12;

OverlapCoefficients quench_mode(const Model& model, double drive_i, double drive_f,
                                const Momentum& k, double tau, double ode_tol) {
  const RampSchedule ramp(drive_i, drive_f, tau);
  const SpinorState start = ground_spinor(model, k, drive_i);
  const SpinorState after = evolve_ramp(model, k, ramp, start, ode_tol);
  return overlap_coefficients(start, after, final_eigenbasis(model, k, drive_f));
}

double residual_of(const OverlapCoefficients& c) { return std::abs(c.a) - std::abs(c.b); }

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(ratio * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

double scan_upper_bound(const Model& model, const Momentum& k, const TauSearch& search) {
  if (search.tau_hi > 0.0) return search.tau_hi;
  if (model.is_chain()) {
    const double n_equiv = kPi / k.chain_k();
    return 10.0 * n_equiv * n_equiv;
  }
  return 1e4;
}

struct Bracket {
  double lo = 0.0, hi = 0.0;
  double f_lo = 0.0, f_hi = 0.0;
};

/// Bisection/secant hybrid on a verified sign change. Returns the
/// evaluation with the smallest |residual| plus the final bracket.
CriticalRateResult refine_root(const Model& model, double drive_i, double drive_f,
                               const Momentum& k, Bracket br, const TauSearch& search) {
  const double tol = std::min(search.ode_tol, kRefineTol);
  auto eval = [&](double tau) { return quench_mode(model, drive_i, drive_f, k, tau, tol); };

  // Endpoint signs can flip when re-evaluated at the tighter tolerance;
  // re-check and widen a little if needed.
  br.f_lo = residual_of(eval(br.lo));
  br.f_hi = residual_of(eval(br.hi));
  for (int attempt = 0; br.f_lo * br.f_hi > 0.0 && attempt < 4; ++attempt) {
    br.lo *= 0.98;
    br.hi *= 1.02;
    br.f_lo = residual_of(eval(br.lo));
    br.f_hi = residual_of(eval(br.hi));
  }
  if (br.f_lo * br.f_hi > 0.0)
    throw NoRootInRange("find_tau_c: bracket lost under refinement");

  double best_tau = std::abs(br.f_lo) < std::abs(br.f_hi) ? br.lo : br.hi;
  OverlapCoefficients best_coeffs = eval(best_tau);
  double best_f = residual_of(best_coeffs);

  for (int iter = 0; iter < 200; ++iter) {
    const double width = br.hi - br.lo;
    if (width <= search.bracket_rel * br.hi) break;
    double mid = br.lo + 0.5 * width;
    if (br.f_hi != br.f_lo) {
      const double secant = (br.lo * br.f_hi - br.hi * br.f_lo) / (br.f_hi - br.f_lo);
      if (secant > br.lo + 0.01 * width && secant < br.hi - 0.01 * width) mid = secant;
    }
    const OverlapCoefficients c = eval(mid);
    const double fm = residual_of(c);
    if (std::abs(fm) < std::abs(best_f)) {
      best_f = fm;
      best_tau = mid;
      best_coeffs = c;
    }
    if (fm == 0.0) break;
    if ((fm > 0.0) == (br.f_lo > 0.0)) {
      br.lo = mid;
      br.f_lo = fm;
    } else {
      br.hi = mid;
      br.f_hi = fm;
    }
  }

  CriticalRateResult out;
  out.k = k;
  out.tau_c = best_tau;
  out.residual = best_f;
  out.phi = best_coeffs.phi;
  out.bracket_lo = br.lo;
  out.bracket_hi = br.hi;
  out.coeffs = best_coeffs;
  out.train = critical_times(best_coeffs, search.n_max);
  return out;
}

}  // namespace

double default_tau_hi(int sites) { return 10.0 * static_cast<double>(sites) * sites; }

double lez_residual(const Model& model, double drive_i, double drive_f, const Momentum& k,
                    double tau, double ode_tol) {
  if (!(tau >= 0.0)) throw std::invalid_argument("lez_residual: tau must be >= 0");
  return residual_of(quench_mode(model, drive_i, drive_f, k, tau, ode_tol));
}

CriticalRateResult find_tau_c(const Model& model, double drive_i, double drive_f,
                              const Momentum& k, const TauSearch& search, RootPick pick) {
  if (!(search.tau_lo > 0.0))
    throw std::invalid_argument("find_tau_c: tau_lo must be positive");
  if (search.scan_points < 2)
    throw std::invalid_argument("find_tau_c: need at least 2 scan points");
  const double hi = scan_upper_bound(model, k, search);
  if (!(hi > search.tau_lo)) throw std::invalid_argument("find_tau_c: empty tau range");
  const std::vector<double> grid = log_grid(search.tau_lo, hi, search.scan_points);

  auto f = [&](double tau) {
    return lez_residual(model, drive_i, drive_f, k, tau, search.scan_tol);
  };

  // Scan from the cheap (small tau) end for the smallest root, from the
  // expensive end for the largest; stop at the first sign change.
  const bool upward = pick == RootPick::Smallest;
  double t_prev = upward ? grid.front() : grid.back();
  double f_prev = f(t_prev);
  const int n = static_cast<int>(grid.size());
  for (int step = 1; step < n; ++step) {
    const double t_cur = upward ? grid[step] : grid[n - 1 - step];
    const double f_cur = f(t_cur);
    if (f_prev == 0.0 || f_prev * f_cur <= 0.0) {
      Bracket br;
      br.lo = std::min(t_prev, t_cur);
      br.hi = std::max(t_prev, t_cur);
      return refine_root(model, drive_i, drive_f, k, br, search);
    }
    t_prev = t_cur;
    f_prev = f_cur;
  }
  throw NoRootInRange("find_tau_c: no sign change of |a| - |b| in the tau range");
}

std::vector<CriticalRateResult> find_all_tau_c(const Model& model, double drive_i,
                                               double drive_f, const Momentum& k,
                                               const TauSearch& search) {
  const double hi = scan_upper_bound(model, k, search);
  const std::vector<double> grid = log_grid(search.tau_lo, hi, search.scan_points);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    values[i] = lez_residual(model, drive_i, drive_f, k, grid[i], search.scan_tol);
  });
  std::vector<CriticalRateResult> roots;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (values[i - 1] * values[i] <= 0.0 && !(values[i - 1] == 0.0 && values[i] == 0.0)) {
      Bracket br{grid[i - 1], grid[i], values[i - 1], values[i]};
      roots.push_back(refine_root(model, drive_i, drive_f, k, br, search));
    }
  }
  return roots;
}

double sudden_ks(double h_i, double h_f) {
  if (!(h_i > 0.0) || !(h_f > 0.0))
    throw std::invalid_argument("sudden_ks: fields must be positive");
  const double num = -(h_i - 1.0) * (h_f - 1.0);
  if (!(num > 0.0))
    throw NoRealSolution("sudden_ks: no real momentum for an intra-phase quench");
  return 2.0 * std::atan(std::sqrt(num) / std::sqrt((1.0 + h_i) * (1.0 + h_f)));
}

CriticalRateResult tau_max(const Model& model, double drive_i, double drive_f, int sites,
                           const TauSearch& search) {
  if (!model.is_chain()) throw std::invalid_argument("tau_max: chain model required");
  if (sites < 4 || sites % 2 != 0)
    throw std::invalid_argument("tau_max: N must be even and >= 4");
  TauSearch s = search;
  if (s.tau_hi == 0.0) s.tau_hi = default_tau_hi(sites);
  return find_tau_c(model, drive_i, drive_f, Momentum(kPi / sites), s, RootPick::Largest);
}

ScalingFit fit_power_law(const std::vector<ScalingPoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    if (!(p.sites > 0) || !(p.tau > 0.0))
      throw std::invalid_argument("fit_power_law: points must be positive");
    const double x = std::log(static_cast<double>(p.sites));
    const double y = std::log(p.tau);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("fit_power_law: degenerate sizes");
  ScalingFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double ss = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.tau) - intercept - fit.exponent * std::log(double(p.sites));
    ss += r * r;
  }
  fit.rms_log_residual = std::sqrt(ss / n);
  fit.points = points;
  return fit;
}

ScalingFit scaling_fit(const Model& model, double drive_i, double drive_f,
                       const std::vector<int>& sizes, const TauSearch& search) {
  if (sizes.size() < 5)
    throw std::invalid_argument("scaling_fit: need at least 5 system sizes");
  std::vector<ScalingPoint> points(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    const CriticalRateResult r = tau_max(model, drive_i, drive_f, sizes[i], search);
    points[i] = {sizes[i], r.tau_c};
  });
  std::sort(points.begin(), points.end(),
            [](const ScalingPoint& a, const ScalingPoint& b) { return a.sites < b.sites; });
  return fit_power_law(points);
}

std::vector<ModeRoot> lez_tunable_modes(const Model& model, double drive_i, double drive_f,
                                        const ModeGrid& grid, const TauSearch& search) {
  std::vector<int> found(grid.size(), 0);
  std::vector<double> roots(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      const CriticalRateResult r =
          find_tau_c(model, drive_i, drive_f, grid.points[i], search, RootPick::Smallest);
      found[i] = 1;
      roots[i] = r.tau_c;
    } catch (const NoRootInRange&) {
      found[i] = 0;
    }
  });
  std::vector<ModeRoot> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (found[i]) out.push_back({i, grid.points[i], roots[i]});
  return out;
}

std::vector<ModeRoot> xy_lez_modes(double kappa, double h_i, double h_f, int sites,
                                   const TauSearch& search) {
  const Model model = Model::xy({kappa, h_i});
  return lez_tunable_modes(model, h_i, h_f, model.grid(sites), search);
}

CriticalRateResult haldane_find_tau(const HaldaneParams& params, double theta_i,
                                    double theta_f, const Momentum& k,
                                    const TauSearch& search, const HaldaneConvention& conv) {
  return find_tau_c(Model::haldane(params, conv), theta_i, theta_f, k, search);
}

}  // namespace lez
