#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lez {

using complex_t = std::complex<double>;

inline constexpr double kDegeneracyTol = 1e-12;

/// Momentum label of one mode. Chains use the scalar k (stored in kx),
/// the Haldane model the full 2D vector.
struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
  Momentum() = default;
  Momentum(double k) : kx(k) {}  // chain momenta read as plain scalars
  Momentum(double x, double y) : kx(x), ky(y) {}
  double chain_k() const { return kx; }
};

enum class ModelKind { Tfim, Xy, Haldane };

std::string to_string(ModelKind kind);

struct TfimParams {
  double j = 1.0;  // exchange coupling, the energy unit
  double h = 0.0;  // transverse field in units of j
};

struct XyParams {
  double kappa = 1.0;  // anisotropy, in (0, 1]
  double h = 0.0;
};

struct HaldaneParams {
  double t1 = 1.0;     // nearest-neighbor hopping
  double t2 = 0.0;     // next-nearest-neighbor hopping
  double theta = 0.0;  // NNN phase (radians)
  double m = 0.0;      // staggered sublattice potential
};

/// Pauli decomposition of a momentum-space two-level block,
/// H_k = d0*I + dx*sx + dy*sy + dz*sz.
struct DVector {
  double dx = 0.0, dy = 0.0, dz = 0.0, d0 = 0.0;

  Eigen::Matrix2cd matrix() const;
  double radius() const;                          // |d|
  double gap() const { return 2.0 * radius(); }   // E+ - E-
};

/// Honeycomb geometry and sign convention behind the Haldane Bloch
/// Hamiltonian. Everything is derived from the three A->B bond vectors:
/// Bravais vectors a1 = nn[0]-nn[2], a2 = nn[1]-nn[2], the NNN loop
/// vectors (cyclic bond differences) and the reciprocal basis g1, g2.
/// flux_sign flips the sin-sum entering dz; the lattice orientation and
/// the sign are fixed empirically against published Haldane quench data
/// (see tests/test_critical.cpp).
struct HaldaneConvention {
  std::array<Eigen::Vector2d, 3> nn;
  std::array<Eigen::Vector2d, 3> nnn;
  Eigen::Vector2d a1, a2;
  Eigen::Vector2d g1, g2;
  double flux_sign = 1.0;
  std::string name;

  static HaldaneConvention from_bonds(const std::array<Eigen::Vector2d, 3>& bonds,
                                      double flux_sign, std::string name);
  /// One bond along -x (nn = {(1/2,s3/2), (1/2,-s3/2), (-1,0)}).
  static HaldaneConvention bond_x(double flux_sign);
  /// One bond along -y (nn = {(s3/2,1/2), (-s3/2,1/2), (0,-1)}).
  static HaldaneConvention bond_y(double flux_sign);
  /// Convention selected by matching published quench data.
  static const HaldaneConvention& standard();
};

/// Discrete momentum set of a finite system. Chains carry the positive
/// half of the even-parity pseudo-momenta k_j = (2j-1)*pi/N; the Haldane
/// grid covers the full Brillouin zone, k = (m/lx) g1 + (n/ly) g2.
struct ModeGrid {
  ModelKind kind = ModelKind::Tfim;
  int sites = 0;       // chain length N
  int lx = 0, ly = 0;  // Haldane cell counts
  std::vector<Momentum> points;

  std::size_t size() const { return points.size(); }
  /// Mode-count normalizer of the rate function: N for chains, lx*ly for Haldane.
  double rate_normalizer() const;
};

ModeGrid chain_grid(ModelKind kind, int n_sites);
ModeGrid haldane_grid(const HaldaneConvention& conv, int lx, int ly);

/// Index of the grid point nearest to k (Euclidean); optional distance out.
std::size_t nearest_grid_index(const ModeGrid& grid, const Momentum& k,
                               double* distance = nullptr);

/// A momentum-factorizable lattice model. The scalar drive is the
/// transverse field h for the chains and the NNN phase theta for the
/// Haldane model; remaining parameters are fixed at construction.
class Model {
 public:
  static Model tfim(const TfimParams& p = {});
  static Model xy(const XyParams& p);
  static Model haldane(const HaldaneParams& p,
                       const HaldaneConvention& conv = HaldaneConvention::standard());

  ModelKind kind() const { return kind_; }
  bool is_chain() const { return kind_ != ModelKind::Haldane; }

  /// d-vector of the momentum-space kernel block at the given drive value.
  DVector kernel(const Momentum& k, double drive) const;

  /// Hermitian generator of the mode-spinor dynamics, i d(psi)/dt = G psi.
  /// The chain spinor (u, v) sees the kernel through a sigma_x flip of the
  /// Nambu basis ordering; the Haldane sublattice basis is the dynamical
  /// basis as-is.
  Eigen::Matrix2cd generator(const Momentum& k, double drive) const;

  ModeGrid grid(int n_sites) const;
  ModeGrid grid(int lx, int ly) const;

  double kappa() const { return kappa_; }
  double coupling() const { return j_; }
  const HaldaneParams& haldane_params() const { return haldane_; }
  const HaldaneConvention& convention() const { return conv_; }

 private:
  Model() = default;

  ModelKind kind_ = ModelKind::Tfim;
  double j_ = 1.0;
  double kappa_ = 1.0;
  HaldaneParams haldane_;
  HaldaneConvention conv_;
};

/// Closed-form dispersion and real Bogoliubov amplitudes of a chain mode.
struct ChainSpectrum {
  double energy = 0.0;  // > 0 on the open interval k in (0, pi)
  double u = 0.0;
  double v = 0.0;
};

ChainSpectrum chain_spectrum(double h, double k, double kappa = 1.0, double j = 1.0);
ChainSpectrum tfim_spectrum(double h, double k);

/// Instantaneous state of one momentum mode in its dynamical basis.
struct SpinorState {
  complex_t u{1.0, 0.0};
  complex_t v{0.0, 0.0};

  Eigen::Vector2cd vec() const { return Eigen::Vector2cd(u, v); }
  static SpinorState from_vec(const Eigen::Vector2cd& x) { return {x(0), x(1)}; }
  double norm_sq() const { return std::norm(u) + std::norm(v); }
};

/// Lower-energy normalized eigenvector of the mode generator. Chains use
/// the closed forms (real amplitudes, u > 0); Haldane fixes the phase by
/// making the largest-magnitude component real positive.
SpinorState ground_spinor(const Model& model, const Momentum& k, double drive);

/// Eigenpairs of the post-quench generator at one mode, e_plus >= e_minus.
struct FinalEigenbasis {
  Eigen::Vector2cd plus;
  Eigen::Vector2cd minus;
  double e_plus = 0.0;
  double e_minus = 0.0;
  double gap() const { return e_plus - e_minus; }
};

FinalEigenbasis final_eigenbasis(const Model& model, const Momentum& k, double drive);

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
struct Eig2 {
  double e_lo = 0.0, e_hi = 0.0;
  Eigen::Vector2cd v_lo, v_hi;
};

Eig2 eigh2(const Eigen::Matrix2cd& h);

/// Critical NNN phases where the Haldane gap closes, |m| = 3*sqrt(3)*t2*|sin(theta)|,
/// for theta in [-pi, pi]. Empty when |m| exceeds 3*sqrt(3)*t2.
std::vector<double> haldane_phase_boundary(double t2, double m);

}  // namespace lez
