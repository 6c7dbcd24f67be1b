#include "lez/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lez/errors.hpp"

namespace lez {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr complex_t kI{0.0, 1.0};
}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Tfim: return "tfim";
    case ModelKind::Xy: return "xy";
    case ModelKind::Haldane: return "haldane";
  }
  return "unknown";
}

Eigen::Matrix2cd DVector::matrix() const {
  Eigen::Matrix2cd m;
  m(0, 0) = complex_t(d0 + dz, 0.0);
  m(0, 1) = complex_t(dx, -dy);
  m(1, 0) = complex_t(dx, dy);
  m(1, 1) = complex_t(d0 - dz, 0.0);
  return m;
}

double DVector::radius() const { return std::sqrt(dx * dx + dy * dy + dz * dz); }

HaldaneConvention HaldaneConvention::from_bonds(
    const std::array<Eigen::Vector2d, 3>& bonds, double flux_sign, std::string name) {
  HaldaneConvention c;
  c.nn = bonds;
  c.nnn = {bonds[0] - bonds[1], bonds[1] - bonds[2], bonds[2] - bonds[0]};
  c.a1 = bonds[0] - bonds[2];
  c.a2 = bonds[1] - bonds[2];
  const double det = c.a1.x() * c.a2.y() - c.a1.y() * c.a2.x();
  c.g1 = 2.0 * kPi / det * Eigen::Vector2d(c.a2.y(), -c.a2.x());
  c.g2 = 2.0 * kPi / det * Eigen::Vector2d(-c.a1.y(), c.a1.x());
  c.flux_sign = flux_sign;
  c.name = std::move(name);
  return c;
}

HaldaneConvention HaldaneConvention::bond_x(double flux_sign) {
  const double s3 = std::sqrt(3.0);
  return from_bonds({Eigen::Vector2d(0.5, 0.5 * s3), Eigen::Vector2d(0.5, -0.5 * s3),
                     Eigen::Vector2d(-1.0, 0.0)},
                    flux_sign, flux_sign > 0 ? "bond-x+" : "bond-x-");
}

HaldaneConvention HaldaneConvention::bond_y(double flux_sign) {
  const double s3 = std::sqrt(3.0);
  return from_bonds({Eigen::Vector2d(0.5 * s3, 0.5), Eigen::Vector2d(-0.5 * s3, 0.5),
                     Eigen::Vector2d(0.0, -1.0)},
                    flux_sign, flux_sign > 0 ? "bond-y+" : "bond-y-");
}

const HaldaneConvention& HaldaneConvention::standard() {
  // bond-y orientation puts the reference Bloch momentum (4*sqrt(3)*pi/15,
  // 2*pi/3) exactly on the 50x50 reciprocal grid; the flux sign is pinned
  // by the critical-duration check in tests/test_critical.cpp.
  static const HaldaneConvention conv = bond_y(-1.0);
  return conv;
}

double ModeGrid::rate_normalizer() const {
  if (kind == ModelKind::Haldane) return static_cast<double>(lx) * static_cast<double>(ly);
  return static_cast<double>(sites);
}

ModeGrid chain_grid(ModelKind kind, int n_sites) {
  if (kind == ModelKind::Haldane)
    throw std::invalid_argument("chain_grid: chain model required");
  if (n_sites < 4 || n_sites % 2 != 0)
    throw std::invalid_argument("chain_grid: N must be even and >= 4");
  ModeGrid grid;
  grid.kind = kind;
  grid.sites = n_sites;
  grid.points.reserve(n_sites / 2);
  for (int j = 1; j <= n_sites / 2; ++j)
    grid.points.emplace_back((2.0 * j - 1.0) * kPi / n_sites);
  return grid;
}

ModeGrid haldane_grid(const HaldaneConvention& conv, int lx, int ly) {
  if (lx < 1 || ly < 1) throw std::invalid_argument("haldane_grid: cell counts must be >= 1");
  ModeGrid grid;
  grid.kind = ModelKind::Haldane;
  grid.lx = lx;
  grid.ly = ly;
  grid.points.reserve(static_cast<std::size_t>(lx) * ly);
  for (int m = 0; m < lx; ++m) {
    for (int n = 0; n < ly; ++n) {
      const Eigen::Vector2d k =
          (static_cast<double>(m) / lx) * conv.g1 + (static_cast<double>(n) / ly) * conv.g2;
      grid.points.emplace_back(k.x(), k.y());
    }
  }
  return grid;
}

std::size_t nearest_grid_index(const ModeGrid& grid, const Momentum& k, double* distance) {
  if (grid.points.empty()) throw std::invalid_argument("nearest_grid_index: empty grid");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    const double ddx = grid.points[i].kx - k.kx;
    const double ddy = grid.points[i].ky - k.ky;
    const double d2 = ddx * ddx + ddy * ddy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  if (distance) *distance = std::sqrt(best_d2);
  return best;
}

Model Model::tfim(const TfimParams& p) {
  if (!(p.j > 0.0)) throw std::invalid_argument("tfim: J must be positive");
  if (p.h < 0.0) throw std::invalid_argument("tfim: h must be non-negative");
  Model m;
  m.kind_ = ModelKind::Tfim;
  m.j_ = p.j;
  m.kappa_ = 1.0;
  return m;
}

Model Model::xy(const XyParams& p) {
  if (!(p.kappa > 0.0) || p.kappa > 1.0)
    throw std::invalid_argument("xy: kappa must lie in (0, 1]");
  if (p.h < 0.0) throw std::invalid_argument("xy: h must be non-negative");
  Model m;
  m.kind_ = ModelKind::Xy;
  m.j_ = 1.0;
  m.kappa_ = p.kappa;
  return m;
}

Model Model::haldane(const HaldaneParams& p, const HaldaneConvention& conv) {
  if (!(p.t1 > 0.0)) throw std::invalid_argument("haldane: t1 must be positive");
  if (p.t2 < 0.0) throw std::invalid_argument("haldane: t2 must be non-negative");
  Model m;
  m.kind_ = ModelKind::Haldane;
  m.haldane_ = p;
  m.conv_ = conv;
  return m;
}

DVector Model::kernel(const Momentum& k, double drive) const {
  DVector d;
  if (is_chain()) {
    const double kk = k.chain_k();
    d.dx = 2.0 * j_ * kappa_ * std::sin(kk);
    d.dz = 2.0 * (drive - j_ * std::cos(kk));
    return d;
  }
  const Eigen::Vector2d kv(k.kx, k.ky);
  complex_t f{0.0, 0.0};
  for (const auto& delta : conv_.nn) f += std::exp(kI * kv.dot(delta));
  f *= haldane_.t1;
  double sin_sum = 0.0, cos_sum = 0.0;
  for (const auto& b : conv_.nnn) {
    sin_sum += std::sin(kv.dot(b));
    cos_sum += std::cos(kv.dot(b));
  }
  const double theta = drive;
  d.dx = f.real();
  d.dy = f.imag();
  d.dz = haldane_.m + conv_.flux_sign * 2.0 * haldane_.t2 * std::sin(theta) * sin_sum;
  d.d0 = 2.0 * haldane_.t2 * std::cos(theta) * cos_sum;
  return d;
}

Eigen::Matrix2cd Model::generator(const Momentum& k, double drive) const {
  DVector d = kernel(k, drive);
  if (is_chain()) {
    // sigma_x conjugation of the Nambu block: (dx, dy, dz) -> (dx, -dy, -dz).
    d.dy = -d.dy;
    d.dz = -d.dz;
  }
  return d.matrix();
}

ModeGrid Model::grid(int n_sites) const { return chain_grid(kind_, n_sites); }

ModeGrid Model::grid(int lx, int ly) const {
  if (is_chain()) throw std::invalid_argument("grid(lx, ly): Haldane model required");
  return haldane_grid(conv_, lx, ly);
}

ChainSpectrum chain_spectrum(double h, double k, double kappa, double j) {
  if (!(k > 0.0) || !(k < kPi))
    throw std::invalid_argument("chain_spectrum: k must lie strictly in (0, pi)");
  if (!(kappa > 0.0) || kappa > 1.0)
    throw std::invalid_argument("chain_spectrum: kappa must lie in (0, 1]");
  const double dd = h - j * std::cos(k);
  const double s = j * kappa * std::sin(k);
  const double half = std::sqrt(dd * dd + s * s);
  ChainSpectrum out;
  out.energy = 2.0 * half;
  // w = eps/2 + (h - cos k), written to avoid cancellation when negative d.
  const double w = dd >= 0.0 ? half + dd : s * s / (half - dd);
  out.u = std::sqrt(w / (2.0 * half));
  out.v = -s / std::sqrt(2.0 * half * w);
  return out;
}

ChainSpectrum tfim_spectrum(double h, double k) { return chain_spectrum(h, k, 1.0, 1.0); }

Eig2 eigh2(const Eigen::Matrix2cd& h) {
  const double a = h(0, 0).real();
  const double b = h(1, 1).real();
  const complex_t c = h(0, 1);
  const double mean = 0.5 * (a + b);
  const double delta = 0.5 * (a - b);
  const double r = std::hypot(delta, std::abs(c));
  Eig2 out;
  out.e_hi = mean + r;
  out.e_lo = mean - r;
  Eigen::Vector2cd hi;
  if (delta >= 0.0)
    hi << complex_t(delta + r, 0.0), std::conj(c);
  else
    hi << c, complex_t(r - delta, 0.0);
  const double n = hi.norm();
  if (n == 0.0) {  // fully degenerate kernel; any basis works
    out.v_hi = Eigen::Vector2cd(1.0, 0.0);
    out.v_lo = Eigen::Vector2cd(0.0, 1.0);
    return out;
  }
  hi /= n;
  out.v_hi = hi;
  out.v_lo = Eigen::Vector2cd(-std::conj(hi(1)), std::conj(hi(0)));
  return out;
}

SpinorState ground_spinor(const Model& model, const Momentum& k, double drive) {
  if (model.is_chain()) {
    const ChainSpectrum sp = chain_spectrum(drive, k.chain_k(), model.kappa(), model.coupling());
    if (sp.energy < kDegeneracyTol)
      throw DegenerateKernel("ground_spinor: closed mode gap below tolerance");
    return {complex_t(sp.u, 0.0), complex_t(sp.v, 0.0)};
  }
  const Eig2 eig = eigh2(model.generator(k, drive));
  if (eig.e_hi - eig.e_lo < kDegeneracyTol)
    throw DegenerateKernel("ground_spinor: mode gap below tolerance");
  Eigen::Vector2cd v = eig.v_lo;
  // Deterministic gauge: largest component real positive.
  const int big = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
  const complex_t phase = std::abs(v(big)) > 0.0 ? v(big) / std::abs(v(big)) : complex_t(1.0);
  v /= phase;
  return SpinorState::from_vec(v);
}

FinalEigenbasis final_eigenbasis(const Model& model, const Momentum& k, double drive) {
  FinalEigenbasis basis;
  if (model.is_chain()) {
    const ChainSpectrum sp = chain_spectrum(drive, k.chain_k(), model.kappa(), model.coupling());
    basis.e_plus = sp.energy;
    basis.e_minus = -sp.energy;
    basis.minus = Eigen::Vector2cd(complex_t(sp.u, 0.0), complex_t(sp.v, 0.0));
    basis.plus = Eigen::Vector2cd(complex_t(-sp.v, 0.0), complex_t(sp.u, 0.0));
    return basis;
  }
  const Eig2 eig = eigh2(model.generator(k, drive));
  basis.e_plus = eig.e_hi;
  basis.e_minus = eig.e_lo;
  basis.plus = eig.v_hi;
  basis.minus = eig.v_lo;
  return basis;
}

std::vector<double> haldane_phase_boundary(double t2, double m) {
  if (!(t2 > 0.0)) throw std::invalid_argument("haldane_phase_boundary: t2 must be positive");
  const double ratio = std::abs(m) / (3.0 * std::sqrt(3.0) * t2);
  std::vector<double> thetas;
  if (ratio > 1.0) return thetas;
  const double base = std::asin(std::min(ratio, 1.0));
  const double candidates[] = {base, kPi - base, -base, -kPi + base};
  for (double c : candidates) {
    bool dup = false;
    for (double seen : thetas) dup = dup || std::abs(seen - c) < 1e-12;
    if (!dup) thetas.push_back(c);
  }
  std::sort(thetas.begin(), thetas.end());
  return thetas;
}

}  // namespace lez
