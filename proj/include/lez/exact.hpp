#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lez {

/// Brute-force many-body reference on the full 2^N product basis with
/// periodic boundaries. kappa = 1 gives the transverse-field Ising
/// couplings; kappa < 1 the anisotropic XY couplings. Supported sizes:
/// even N with 4 <= N <= 12.
class DenseSpinSystem {
 public:
  explicit DenseSpinSystem(int sites, double kappa = 1.0);

  int sites() const { return n_; }
  int dimension() const { return 1 << n_; }

  Eigen::MatrixXd hamiltonian(double h) const;

  /// out = H(h) * in without materializing the matrix.
  void apply(double h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  /// Weight of the state inside the even spin-flip-parity sector.
  double even_parity_weight(const Eigen::VectorXcd& psi) const;

 private:
  int n_;
  double kappa_;
};

struct ExactGroundState {
  double energy = 0.0;
  Eigen::VectorXd state;
};

ExactGroundState exact_ground_state(int sites, double h, double kappa = 1.0);

struct ExactLoschmidtTrace {
  std::vector<double> t;
  std::vector<double> echo;  // |G(t_f)|^2
  double ramp_step = 0.0;
  double halving_dev = 0.0;  // max echo change when the ramp step is halved
  double norm_drift = 0.0;
};

/// Exact echo trace: dense ground state of H(h_i), midpoint-exponential
/// ramp propagation (default step tau/2000, halving convergence check at
/// 1e-6), then the hold stage through the eigendecomposition of H(h_f).
ExactLoschmidtTrace exact_loschmidt(int sites, double h_i, double h_f, double tau,
                                    std::span<const double> t_grid,
                                    double ramp_step = 0.0, double kappa = 1.0);

/// psi <- exp(-i dt H) psi via a Lanczos Krylov expansion converged to
/// machine precision; H must be Hermitian (applied through apply_h).
Eigen::VectorXcd krylov_propagate(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply_h,
    Eigen::VectorXcd psi, double dt, double tol = 1e-13);

}  // namespace lez
