#ifndef CVQSS_SYMPLECTIC_HPP
#define CVQSS_SYMPLECTIC_HPP

#include "cvqss/gaussian_state.hpp"

#include <span>

namespace cvqss {

/// Symplectic form Omega = [[0, I_m], [-I_m, 0]] in x..p ordering.
Mat symplectic_form(int modes);

/// Real linear phase-space map S with S Omega S^T = Omega (checked on
/// construction to Frobenius tolerance 1e-10).
class SymplecticTransform {
 public:
  explicit SymplecticTransform(Mat matrix);

  int mode_count() const { return mode_count_; }
  const Mat& matrix() const { return matrix_; }

  /// Group inverse, computed from the symplectic condition.
  SymplecticTransform inverse() const;

  friend SymplecticTransform operator*(const SymplecticTransform& lhs,
                                       const SymplecticTransform& rhs);

 private:
  int mode_count_;
  Mat matrix_;
};

SymplecticTransform symplectic_identity(int modes);

/// block-diag(T, (T^T)^{-1}): the symplectic acting as T on the canonical
/// positions and as (T^T)^{-1} on the canonical momenta. T must be well
/// conditioned (|det T| > 1e-12, condition number <= 1e10).
SymplecticTransform symplectic_from_position_map(const Mat& T);

/// Beamsplitter on two modes: a1 -> cos(theta) a1 - e^{i phi} sin(theta) a2.
/// beamsplitter(pi/4, 0) is the 50/50 element with position action
/// (1/sqrt 2) [[1, -1], [1, 1]].
SymplecticTransform beamsplitter(double theta, double phi);

/// Single-mode phase rotation a -> e^{i phi} a.
SymplecticTransform phase_shifter(double phi);

/// Single-mode squeezer a -> cosh(r) a + e^{i phi} sinh(r) a^dag;
/// at phi = 0 the position action is x -> e^{r} x.
SymplecticTransform single_mode_squeezer(double r, double phi);

/// Two-mode squeezer a1 -> cosh(r) a1 - e^{i phi} sinh(r) a2^dag; the
/// phi = 0 position block is [[cosh r, -sinh r], [-sinh r, cosh r]].
SymplecticTransform two_mode_squeezer(double r, double phi);

/// Expands a symplectic acting on the listed modes (in order) to one on
/// `total_modes` modes that leaves the rest untouched.
SymplecticTransform embed(const SymplecticTransform& s, int total_modes,
                          std::span<const int> modes);

/// Evolves the state moments on the listed modes: mean -> S mean,
/// cov -> S cov S^T on the embedded subspace.
GaussianState apply(const SymplecticTransform& s, const GaussianState& state,
                    std::span<const int> modes);

/// Same, acting on all modes of the state.
GaussianState apply(const SymplecticTransform& s, const GaussianState& state);

/// True when the transform is passive (orthogonal), i.e. photon-number
/// preserving.
bool is_passive(const SymplecticTransform& s, double tol = 1e-10);

}  // namespace cvqss

#endif  // CVQSS_SYMPLECTIC_HPP
