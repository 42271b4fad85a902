#ifndef CVQSS_FOCK_HPP
#define CVQSS_FOCK_HPP

#include "cvqss/circuit.hpp"
#include "cvqss/gaussian_state.hpp"

#include <utility>

// Truncated Fock-basis simulator, kept independent of the Gaussian moment
// pipeline so it can serve as a brute-force cross-check on small instances.
// States carry an explicit truncation-leakage estimate; element application
// adds the probability mass sitting on the truncation boundary of the
// touched modes, and rejects states whose accumulated leakage exceeds 1e-6.

namespace cvqss {

/// Pure state on `mode_count` modes, each truncated at photon number
/// `cutoff` (dimension cutoff+1 per mode). Amplitude index of the basis
/// state |n_0, .., n_{m-1}> is sum_j n_j (cutoff+1)^j.
struct FockVector {
  int mode_count = 0;
  int cutoff = 0;
  Eigen::VectorXcd amps;
  double leakage = 0.0;
};

/// Mixed state; same basis convention on rows and columns.
struct FockDensity {
  int mode_count = 0;
  int cutoff = 0;
  Eigen::MatrixXcd rho;
  double leakage = 0.0;
};

FockVector vacuum_fock(int modes, int cutoff);

/// Coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!). Rejects |a|^2 > cutoff/2
/// as unreliable at the requested truncation.
FockVector coherent_fock(Complex alpha, int cutoff);

/// Schmidt form sqrt(1 - eta^2) sum_n eta^n |n, n> with eta = tanh r.
/// Requires eta^{2 cutoff} < 1e-12.
FockVector two_mode_squeezed_fock(double r, int cutoff);

/// Product state; b occupies the higher mode indices.
FockVector tensor_fock(const FockVector& a, const FockVector& b);

/// Unitary evolution by one optical element (exponential of its truncated
/// quadratic generator, restricted to the element's conserved blocks).
FockVector apply_element_fock(const FockVector& state, const CircuitElement& element);
FockDensity apply_element_fock(const FockDensity& state, const CircuitElement& element);

FockDensity density_from_vector(const FockVector& state);

/// Reduced density matrix on the kept modes (in the order given).
FockDensity partial_trace_fock(const FockVector& state, std::span<const int> keep);

/// Fock representation of a single-mode Gaussian state (displaced,
/// rotated, squeezed thermal construction).
FockDensity density_from_gaussian(const GaussianState& state, int cutoff);

/// Quadrature mean vector and covariance matrix, in the library-wide
/// (x.., p..) ordering, evaluated from ladder-operator matrix elements.
std::pair<Vec, Mat> moments(const FockVector& state);
std::pair<Vec, Mat> moments(const FockDensity& state);  // single-mode only

/// Squared fidelities (overlap convention matching fidelity_gaussian).
double fidelity_fock(const FockVector& a, const FockVector& b);
double fidelity_fock(const FockDensity& rho, const FockVector& psi);
double fidelity_fock(const FockDensity& a, const FockDensity& b);

double trace_distance_fock(const FockDensity& a, const FockDensity& b);

/// Diagonal photon-number distribution of a single-mode density.
Vec photon_distribution(const FockDensity& rho);

}  // namespace cvqss

#endif  // CVQSS_FOCK_HPP
