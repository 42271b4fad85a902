#include "cvqss/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace cvqss {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Rows {e_1, L_1, .., L_{2k-1}} of the extended coefficient system.
Mat extended_rows(const ThresholdSchemeSpec& spec) {
  Mat rows(2 * spec.k, spec.k);
  rows.row(0).setZero();
  rows(0, 0) = 1.0;
  rows.bottomRows(2 * spec.k - 1) = spec.L;
  return rows;
}

double min_subset_determinant(const Mat& rows, int k, int* subsets_checked) {
  Mat normalized = rows;
  for (int i = 0; i < normalized.rows(); ++i) {
    const double norm = normalized.row(i).norm();
    if (norm > 0.0) normalized.row(i) /= norm;
  }
  double min_det = std::numeric_limits<double>::infinity();
  int count = 0;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  const int total = static_cast<int>(rows.rows());
  while (true) {
    Mat sub(k, k);
    for (int i = 0; i < k; ++i) sub.row(i) = normalized.row(pick[i]);
    min_det = std::min(min_det, std::abs(sub.determinant()));
    ++count;
    int pos = k - 1;
    while (pos >= 0 && pick[pos] == total - k + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (int i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
  if (subsets_checked) *subsets_checked = count;
  return min_det;
}

std::vector<int> share_to_mode_map(const ThresholdSchemeSpec& spec) {
  std::vector<int> map(2 * spec.k - 1 + 1, -1);
  int mode = 0;
  for (int share = 1; share <= 2 * spec.k - 1; ++share) {
    if (std::find(spec.discarded_shares.begin(), spec.discarded_shares.end(), share) ==
        spec.discarded_shares.end())
      map[share] = mode++;
  }
  return map;
}

GaussianState reduced_subset_state(const EncodedSecret& enc,
                                   std::span<const int> subset) {
  const std::vector<int> to_mode = share_to_mode_map(enc.scheme);
  std::vector<int> keep;
  for (int share : subset) {
    require(share >= 1 && share <= 2 * enc.scheme.k - 1 && to_mode[share] >= 0,
            "subset references a missing share");
    keep.push_back(to_mode[share]);
  }
  return partial_trace(enc.state, keep);
}

bool is_default_23(const ThresholdSchemeSpec& spec) {
  if (spec.k != 2 || spec.n != 3 || !spec.discarded_shares.empty()) return false;
  return (spec.L - default_L(2)).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

Mat default_L(int k) {
  require(k >= 1, "default_L: k must be at least 1");
  if (k == 1) {
    // Degenerate scheme: the single share carries the secret directly.
    return Mat::Ones(1, 1);
  }
  if (k == 2) {
    Mat l(3, 2);
    const double s = 1.0 / std::sqrt(2.0);
    l << s, s, -s, s, 0.0, 1.0;
    return l;
  }
  // Power-basis rows on distinct nonzero nodes; together with e_1 (the
  // node-0 row) every k-subset is a Vandermonde minor with nonzero
  // determinant.
  double spread = 1.0;
  for (int attempt = 0; attempt < 32; ++attempt) {
    Mat l(2 * k - 1, k);
    for (int i = 0; i < 2 * k - 1; ++i) {
      const double node = spread * std::cos((2.0 * i + 1.0) * std::numbers::pi /
                                            (4.0 * k));
      double power = 1.0;
      for (int j = 0; j < k; ++j) {
        l(i, j) = power;
        power *= node;
      }
    }
    ThresholdSchemeSpec candidate{k, 2 * k - 1, l, {}};
    if (validate(candidate).pass) return l;
    spread *= 1.25;
  }
  throw std::runtime_error("default_L: failed to find a valid coefficient matrix");
}

ThresholdSchemeSpec make_scheme(int k, int n) {
  require(k >= 1, "make_scheme: k must be at least 1");
  require(n >= k, "make_scheme: need n >= k");
  ThresholdSchemeSpec spec{k, n, default_L(k), {}};
  for (int share = n + 1; share <= 2 * k - 1; ++share)
    spec.discarded_shares.push_back(share);
  return spec;
}

ValidationReport validate(const ThresholdSchemeSpec& spec) {
  ValidationReport report;
  if (spec.k < 1) {
    report.message = "k must be at least 1";
    return report;
  }
  if (spec.n >= 2 * spec.k) {
    report.no_cloning_violation = true;
    std::ostringstream msg;
    msg << "no-cloning violation: n = " << spec.n << " >= 2k = " << 2 * spec.k;
    report.message = msg.str();
    return report;
  }
  if (spec.n < spec.k) {
    report.message = "fewer shares than the threshold";
    return report;
  }
  if (spec.L.rows() != 2 * spec.k - 1 || spec.L.cols() != spec.k) {
    report.message = "L must be (2k-1) x k";
    return report;
  }
  const int expected_discards = 2 * spec.k - 1 - spec.n;
  std::set<int> discard_set(spec.discarded_shares.begin(), spec.discarded_shares.end());
  if (static_cast<int>(discard_set.size()) != expected_discards ||
      static_cast<int>(spec.discarded_shares.size()) != expected_discards) {
    report.message = "discarded_shares must list 2k-1-n distinct shares";
    return report;
  }
  for (int share : discard_set) {
    if (share < 1 || share > 2 * spec.k - 1) {
      report.message = "discarded share index out of range";
      return report;
    }
  }
  report.min_abs_det =
      min_subset_determinant(extended_rows(spec), spec.k, &report.subsets_checked);
  if (report.min_abs_det <= 1e-9) {
    std::ostringstream msg;
    msg << "access-structure failure: min normalized subset |det| = "
        << report.min_abs_det;
    report.message = msg.str();
    return report;
  }
  report.pass = true;
  report.message = "ok";
  return report;
}

void require_valid(const ThresholdSchemeSpec& spec) {
  const ValidationReport report = validate(spec);
  if (report.pass) return;
  if (report.no_cloning_violation) throw NoCloningError(report.message);
  throw std::invalid_argument(report.message);
}

ReconstructionPlan solve_T(const ThresholdSchemeSpec& spec,
                           std::span<const int> collaborators) {
  std::set<int> chosen(collaborators.begin(), collaborators.end());
  std::vector<int> complement;
  for (int share = 1; share <= 2 * spec.k - 1; ++share)
    if (!chosen.count(share)) complement.push_back(share);
  return solve_T(spec, collaborators, complement);
}

ReconstructionPlan solve_T(const ThresholdSchemeSpec& spec,
                           std::span<const int> collaborators,
                           std::span<const int> complement) {
  require_valid(spec);
  const int k = spec.k;
  require(static_cast<int>(collaborators.size()) == k,
          "solve_T: need exactly k collaborators");
  require(static_cast<int>(complement.size()) == k - 1,
          "solve_T: complement must list the other k-1 shares");
  std::set<int> seen;
  for (int share : collaborators) {
    require(share >= 1 && share <= 2 * k - 1, "solve_T: share index out of range");
    require(seen.insert(share).second, "solve_T: repeated share");
  }
  for (int share : complement) {
    require(share >= 1 && share <= 2 * k - 1, "solve_T: share index out of range");
    require(seen.insert(share).second, "solve_T: complement overlaps collaborators");
  }

  Mat lhs(k, k), rhs(k, k);
  for (int i = 0; i < k; ++i) lhs.row(i) = spec.L.row(collaborators[i] - 1);
  rhs.row(0).setZero();
  rhs(0, 0) = 1.0;
  for (int i = 0; i + 1 < k; ++i) rhs.row(i + 1) = spec.L.row(complement[i] - 1);

  // T lhs = rhs  =>  lhs^T T^T = rhs^T
  const Mat t = lhs.transpose()
                    .colPivHouseholderQr()
                    .solve(rhs.transpose())
                    .transpose();
  require(std::abs(t.determinant()) > 1e-12,
          "solve_T: singular reconstruction matrix (invalid scheme?)");
  SymplecticTransform s = symplectic_from_position_map(t);
  return {std::vector<int>(collaborators.begin(), collaborators.end()),
          std::vector<int>(complement.begin(), complement.end()), t, std::move(s),
          collaborators[0]};
}

EncodedSecret encode(Complex alpha, const ThresholdSchemeSpec& spec, double r) {
  require_valid(spec);
  require(r >= 0.0, "encode: squeezing must be non-negative");
  const int k = spec.k;
  const int total = 2 * k - 1;

  GaussianState state = coherent(alpha);
  for (int pair = 0; pair + 1 < k; ++pair) state = tensor(state, two_mode_squeezed(r));
  if (k > 1) {
    // The tensor order is (secret, pair_1.., pair_{k-1}); permute so pair j
    // sits on shares (1+j, k+j).
    std::vector<int> perm(total);  // perm[product-mode] = share mode (0-based)
    perm[0] = 0;
    for (int pair = 0; pair < k - 1; ++pair) {
      perm[1 + 2 * pair] = 1 + pair;
      perm[2 + 2 * pair] = k + pair;
    }
    Mat p = Mat::Zero(2 * total, 2 * total);
    for (int mode = 0; mode < total; ++mode) {
      p(perm[mode], mode) = 1.0;
      p(perm[mode] + total, mode + total) = 1.0;
    }
    state = apply(SymplecticTransform(std::move(p)), state);

    std::vector<int> dealer_shares(k), dealer_modes(k);
    for (int i = 0; i < k; ++i) {
      dealer_shares[i] = i + 1;
      dealer_modes[i] = i;
    }
    const ReconstructionPlan plan = solve_T(spec, dealer_shares);
    state = apply(plan.S.inverse(), state, dealer_modes);
  }

  if (!spec.discarded_shares.empty()) {
    std::vector<int> keep;
    for (int share = 1; share <= total; ++share)
      if (std::find(spec.discarded_shares.begin(), spec.discarded_shares.end(),
                    share) == spec.discarded_shares.end())
        keep.push_back(share - 1);
    state = partial_trace(state, keep);
  }
  return {std::move(state), spec, r, alpha};
}

GaussianState reconstruct(const EncodedSecret& enc, const ReconstructionPlan& plan) {
  const std::vector<int> to_mode = share_to_mode_map(enc.scheme);
  std::vector<int> modes;
  for (int share : plan.collaborators) {
    require(share >= 1 && share <= 2 * enc.scheme.k - 1 && to_mode[share] >= 0,
            "reconstruct: plan references a discarded share");
    modes.push_back(to_mode[share]);
  }
  const GaussianState evolved = apply(plan.S, enc.state, modes);
  const int out[1] = {to_mode[plan.output_share]};
  return partial_trace(evolved, out);
}

GaussianState encode_22_thermal(Complex alpha, double nbar) {
  require(nbar >= 0.0, "encode_22_thermal: nbar must be non-negative");
  const GaussianState input = tensor(coherent(alpha), thermal(nbar));
  // The dealer side of the 50/50 interferometer is the inverse of the
  // {1,2} reconstruction beamsplitter.
  return apply(beamsplitter(std::numbers::pi / 4, 0.0).inverse(), input);
}

double leakage(const EncodedSecret& enc, std::span<const int> subset, Complex alpha0,
               Complex alpha1) {
  require(static_cast<int>(subset.size()) < enc.scheme.k,
          "leakage: subset must be smaller than the threshold k");
  require(!subset.empty(), "leakage: subset must be non-empty");
  const EncodedSecret enc0 = encode(alpha0, enc.scheme, enc.r);
  const EncodedSecret enc1 = encode(alpha1, enc.scheme, enc.r);
  return fidelity_gaussian(reduced_subset_state(enc0, subset),
                           reduced_subset_state(enc1, subset));
}

std::vector<SweepRow> fidelity_sweep(const ThresholdSchemeSpec& spec,
                                     std::span<const int> collaborators, Complex alpha,
                                     std::span<const double> r_grid) {
  const ReconstructionPlan plan = solve_T(spec, collaborators);
  const bool paper_23 = is_default_23(spec);
  const bool has_share3 =
      std::find(collaborators.begin(), collaborators.end(), 3) != collaborators.end();
  std::vector<SweepRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    SweepRow row;
    row.r = r;
    row.measured = fidelity_coherent(reconstruct(encode(alpha, spec, r), plan), alpha);
    if (spec.k == 1) {
      row.formula = 1.0;
    } else if (paper_23) {
      row.formula = has_share3 ? 0.5 * (1.0 + std::tanh(r)) : 1.0;
    } else {
      row.formula = std::numeric_limits<double>::quiet_NaN();
    }
    row.abs_error = std::abs(row.measured - row.formula);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cvqss
