#ifndef CVQSS_GAUSSIAN_STATE_HPP
#define CVQSS_GAUSSIAN_STATE_HPP

#include <Eigen/Dense>

#include <complex>
#include <span>

// Quadrature conventions used throughout this library:
//   - hbar = 1, vacuum quadrature variance 1/2,
//   - quadrature ordering (x_1..x_m, p_1..p_m) for m modes,
//   - symplectic form Omega = [[0, I_m], [-I_m, 0]] in that ordering,
//   - coherent amplitude alpha displaces the mean to sqrt(2)*(Re a, Im a).
// All tolerances in this library assume these units.

namespace cvqss {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Gaussian state of m optical modes, stored as quadrature mean vector
/// (length 2m) and covariance matrix (2m x 2m, symmetrized on construction).
/// Construction rejects covariances violating the uncertainty relation
/// (every symplectic eigenvalue must be >= 1/2 - 1e-9).
class GaussianState {
 public:
  GaussianState(Vec mean, Mat cov);

  int mode_count() const { return mode_count_; }
  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

 private:
  int mode_count_;
  Vec mean_;
  Mat cov_;
};

/// m-mode vacuum: zero mean, cov = (1/2) I.
GaussianState vacuum(int modes);

/// Single-mode coherent state |alpha>.
GaussianState coherent(Complex alpha);

/// Single-mode thermal state with mean photon number nbar >= 0.
GaussianState thermal(double nbar);

/// Mean photon number of one arm of a two-mode squeezed vacuum with
/// parameter eta = tanh r:  nbar = eta^2 / (1 - eta^2).
double eta_to_nbar(double eta);

/// Two-mode squeezed vacuum with squeezing r >= 0. Positions are
/// correlated and momenta anti-correlated: Var(x1 - x2) = e^{-2r},
/// Var(p1 + p2) = e^{-2r}.
GaussianState two_mode_squeezed(double r);

/// Product state (a on the lower mode indices, b above).
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Reduced state on the kept modes (in the order given).
GaussianState partial_trace(const GaussianState& state, std::span<const int> keep);

/// State with its mean displaced by alpha on the given mode.
GaussianState displaced(const GaussianState& state, Complex alpha, int mode = 0);

/// Overlap <alpha| rho |alpha> for a single-mode state.
double fidelity_coherent(const GaussianState& rho, Complex alpha);

/// Squared Uhlmann fidelity between two Gaussian states. Closed forms are
/// implemented for: single-mode pairs, pairs with equal covariance, and
/// pairs where one state is pure. These cases cover every state pair this
/// library produces; anything else is rejected.
double fidelity_gaussian(const GaussianState& a, const GaussianState& b);

/// Symplectic spectrum of a 2m x 2m covariance matrix (m values, descending).
Vec symplectic_eigenvalues(const Mat& cov);

/// True when the smallest symplectic eigenvalue is within tol of 1/2.
bool is_pure(const GaussianState& state, double tol = 1e-9);

}  // namespace cvqss

#endif  // CVQSS_GAUSSIAN_STATE_HPP
