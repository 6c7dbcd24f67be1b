#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "lez/errors.hpp"

namespace lez {

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.0;  // 0 = no cap
};

struct IntegrationStats {
  double max_norm_drift = 0.0;  // largest per-step pre-projection drift of ||psi||^2
  long accepted = 0;
  long rejected = 0;
};

using HamiltonianFn = std::function<Eigen::Matrix2cd(double)>;

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights (error estimator).
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
inline constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
inline constexpr double e4 = 125.0 / 192 - 393.0 / 640;
inline constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
inline constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
inline constexpr double e7 = -1.0 / 40;

inline constexpr long kMaxSteps = 200'000'000;

}  // namespace detail

/// Integrates i d(psi)/dt = H(t) psi from t0 to t1 with an embedded
/// Dormand-Prince 5(4) pair. apply(t, y) must return H(t) * y. psi must be
/// normalized; the flow is unitary, so the state is projected back onto the
/// unit sphere after each accepted step (stats report the largest
/// pre-projection drift). Deterministic for fixed inputs. Throws
/// StepUnderflow when the controller cannot meet the tolerance.
template <class ApplyH>
Eigen::Vector2cd integrate_schrodinger_apply(ApplyH&& apply, double t0, double t1,
                                             Eigen::Vector2cd psi,
                                             const IntegratorOptions& opt = {},
                                             IntegrationStats* stats = nullptr) {
  using namespace detail;
  using Vec = Eigen::Vector2cd;
  const double span = t1 - t0;
  if (span == 0.0) return psi;
  if (!(span > 0.0)) throw std::invalid_argument("integrate_schrodinger: t1 < t0");
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw std::invalid_argument("integrate_schrodinger: tolerances must be positive");
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-6)
    throw std::invalid_argument("integrate_schrodinger: psi must be normalized");

  const std::complex<double> mi{0.0, -1.0};
  auto rhs = [&](double t, const Vec& y) -> Vec { return mi * apply(t, y); };

  double t = t0;
  double dt = span * 1e-3;
  if (opt.max_step > 0.0) dt = std::min(dt, opt.max_step);

  Vec k1 = rhs(t, psi);
  long accepted = 0, rejected = 0;
  double max_drift = 0.0;

  while (t < t1) {
    const double h = std::min(dt, t1 - t);
    const Vec k2 = rhs(t + c2 * h, psi + h * (a21 * k1));
    const Vec k3 = rhs(t + c3 * h, psi + h * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs(t + c4 * h, psi + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = rhs(t + c5 * h, psi + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 =
        rhs(t + h, psi + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec y_new = psi + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    // The flow is unitary; pin the norm so drift cannot accumulate over
    // long ramps. Step acceptance still sees the pre-projection drift.
    const double drift = std::abs(y_new.squaredNorm() - 1.0);
    y_new /= y_new.norm();
    const Vec k7 = rhs(t + h, y_new);  // FSAL
    const Vec err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double scale =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(psi(i)), std::abs(y_new(i)));
      err = std::max(err, std::abs(err_vec(i)) / scale);
    }

    double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);

    if (err <= 1.0) {
      t += h;
      psi = y_new;
      k1 = k7;
      ++accepted;
      max_drift = std::max(max_drift, drift);
    } else {
      ++rejected;
    }
    dt = h * factor;
    if (opt.max_step > 0.0) dt = std::min(dt, opt.max_step);
    if (err > 1.0 && dt < (std::abs(t) + span) * 1e-15)
      throw StepUnderflow("integrate_schrodinger: step size underflow");
    if (accepted + rejected > kMaxSteps)
      throw StepUnderflow("integrate_schrodinger: step budget exhausted");
  }

  if (stats) {
    stats->max_norm_drift = max_drift;
    stats->accepted = accepted;
    stats->rejected = rejected;
  }
  return psi;
}

inline Eigen::Vector2cd integrate_schrodinger(const HamiltonianFn& hamiltonian, double t0,
                                              double t1, Eigen::Vector2cd psi,
                                              const IntegratorOptions& opt = {},
                                              IntegrationStats* stats = nullptr) {
  return integrate_schrodinger_apply(
      [&](double t, const Eigen::Vector2cd& y) -> Eigen::Vector2cd {
        return hamiltonian(t) * y;
      },
      t0, t1, psi, opt, stats);
}

}  // namespace lez
