#ifndef CVQSS_SCHEME_HPP
#define CVQSS_SCHEME_HPP

#include "cvqss/symplectic.hpp"

#include <stdexcept>
#include <vector>

namespace cvqss {

// Share indices are 1-based throughout this module, matching the labels
// 1..2k-1 a dealer would print on the beams.

/// (k, n) threshold scheme: row i of L holds the coefficients of the
/// linear form L_i(x_1..x_k); shares listed in discarded_shares are
/// dropped before dealing (2k-1-n of them).
struct ThresholdSchemeSpec {
  int k = 0;
  int n = 0;
  Mat L;
  std::vector<int> discarded_shares;
};

/// Thrown when a scheme requests n >= 2k shares.
struct NoCloningError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Coefficient matrix that satisfies the access-structure condition for
/// any k: the paper rows for k = 2, scaled Chebyshev-node power rows for
/// larger k (regenerated with perturbed nodes if validation ever fails).
Mat default_L(int k);

/// Scheme with default_L(k) and the highest-indexed shares discarded.
ThresholdSchemeSpec make_scheme(int k, int n);

struct ValidationReport {
  bool pass = false;
  bool no_cloning_violation = false;
  double min_abs_det = 0.0;  // over all k-subsets, after row normalization
  int subsets_checked = 0;
  std::string message;
};

/// Checks n <= 2k-1 and that every k-subset of {e_1, L_1, .., L_{2k-1}}
/// is linearly independent (normalized |det| > 1e-9).
ValidationReport validate(const ThresholdSchemeSpec& spec);

/// Throws NoCloningError or std::invalid_argument when the spec fails
/// validation.
void require_valid(const ThresholdSchemeSpec& spec);

struct ReconstructionPlan {
  std::vector<int> collaborators;  // r_1..r_k
  std::vector<int> complement;     // r_{k+1}..r_{2k-1}
  Mat T;                           // T stack(L_{r_1}..L_{r_k}) = stack(e_1, L_compl)
  SymplecticTransform S;           // position map T, momentum map (T^T)^{-1}
  int output_share = 0;            // r_1
};

/// Solves the reconstruction matrix for a collaborator k-subset; the
/// complement defaults to the remaining shares in ascending order.
ReconstructionPlan solve_T(const ThresholdSchemeSpec& spec,
                           std::span<const int> collaborators);
ReconstructionPlan solve_T(const ThresholdSchemeSpec& spec,
                           std::span<const int> collaborators,
                           std::span<const int> complement);

struct EncodedSecret {
  GaussianState state;  // n modes, ordered by ascending surviving share index
  ThresholdSchemeSpec scheme;
  double r = 0.0;
  Complex secret;  // retained for testing only; reconstruction never reads it
};

/// Deals a coherent secret: builds |alpha> tensored with k-1 two-mode
/// squeezed pairs on shares (1+j, k+j), applies the inverse of the
/// collaborators-{1..k} reconstruction symplectic, and traces out the
/// discarded shares.
EncodedSecret encode(Complex alpha, const ThresholdSchemeSpec& spec, double r);

/// Applies the plan's symplectic to the collaborator modes and reduces to
/// the output share.
GaussianState reconstruct(const EncodedSecret& enc, const ReconstructionPlan& plan);

/// (2,2) dealing by mixing the secret with a thermal state on a 50/50
/// beamsplitter; equals the share-3-traced (2,3) encoding at
/// nbar = sinh^2 r.
GaussianState encode_22_thermal(Complex alpha, double nbar);

/// Fidelity between the reduced states a sub-threshold subset would hold
/// under secrets alpha0 and alpha1 (1 = the subset learns nothing).
double leakage(const EncodedSecret& enc, std::span<const int> subset, Complex alpha0,
               Complex alpha1);

struct SweepRow {
  double r = 0.0;
  double measured = 0.0;
  double formula = 0.0;  // NaN when no closed form is known for the set
  double abs_error = 0.0;
};

/// Encode + reconstruct + fidelity per grid point. The formula column is
/// filled for the default (2,3) scheme ((1 + tanh r)/2 for sets containing
/// share 3, exactly 1 for {1,2}) and for k = 1.
std::vector<SweepRow> fidelity_sweep(const ThresholdSchemeSpec& spec,
                                     std::span<const int> collaborators, Complex alpha,
                                     std::span<const double> r_grid);

}  // namespace cvqss

#endif  // CVQSS_SCHEME_HPP
