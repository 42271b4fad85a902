#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvqss/scheme.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace cvqss;

namespace {

// Subset determinant check written independently of validate(): enumerate
// index combinations by hand and evaluate raw determinants.
double brute_force_min_det(const Mat& l, int k) {
  Mat rows(l.rows() + 1, k);
  rows.row(0).setZero();
  rows(0, 0) = 1.0;
  rows.bottomRows(l.rows()) = l;
  for (int i = 0; i < rows.rows(); ++i) rows.row(i).normalize();
  double min_det = 1e300;
  std::vector<int> pick(k);
  std::function<void(int, int)> walk = [&](int start, int depth) {
    if (depth == k) {
      Mat sub(k, k);
      for (int i = 0; i < k; ++i) sub.row(i) = rows.row(pick[i]);
      min_det = std::min(min_det, std::abs(sub.determinant()));
      return;
    }
    for (int i = start; i < rows.rows(); ++i) {
      pick[depth] = i;
      walk(i + 1, depth + 1);
    }
  };
  walk(0, 0);
  return min_det;
}

Mat paper_t(const std::initializer_list<double>& entries) {
  Mat t(2, 2);
  auto it = entries.begin();
  t << *it, *(it + 1), *(it + 2), *(it + 3);
  return t;
}

}  // namespace

TEST_CASE("default_L") {
  // k = 2 reproduces the published rows exactly.
  const Mat l2 = default_L(2);
  const double s = 1.0 / std::sqrt(2.0);
  Mat expected(3, 2);
  expected << s, s, -s, s, 0.0, 1.0;
  CHECK((l2 - expected).cwiseAbs().maxCoeff() < 1e-15);

  // k = 1 degenerates to handing the secret over.
  const Mat l1 = default_L(1);
  CHECK(l1.rows() == 1);
  CHECK(l1(0, 0) == 1.0);

  // k = 3: all C(6,3) = 20 subset determinants are nonzero (checked by an
  // independent enumeration).
  CHECK(brute_force_min_det(default_L(3), 3) > 1e-9);
}

TEST_CASE("validate") {
  const ThresholdSchemeSpec paper = make_scheme(2, 3);
  const ValidationReport report = validate(paper);
  CHECK(report.pass);
  CHECK(report.subsets_checked == 6);
  CHECK(report.min_abs_det == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // Duplicated rows break the access structure.
  ThresholdSchemeSpec degenerate = paper;
  degenerate.L.row(1) = degenerate.L.row(0);
  CHECK_FALSE(validate(degenerate).pass);
  CHECK_FALSE(validate(degenerate).no_cloning_violation);

  // n >= 2k is a no-cloning violation, reported distinctly.
  ThresholdSchemeSpec cloning = paper;
  cloning.n = 4;
  const ValidationReport cloning_report = validate(cloning);
  CHECK_FALSE(cloning_report.pass);
  CHECK(cloning_report.no_cloning_violation);
  CHECK_THROWS_AS(require_valid(cloning), NoCloningError);

  for (int k : {2, 3, 4, 5}) CHECK(validate(make_scheme(k, 2 * k - 1)).pass);
}

TEST_CASE("solve_T reproduces the published reconstruction matrices") {
  const ThresholdSchemeSpec spec = make_scheme(2, 3);

  const std::array<int, 2> c12 = {1, 2};
  const ReconstructionPlan p12 = solve_T(spec, c12);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK((p12.T - paper_t({s, -s, s, s})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p12.output_share == 1);

  const std::array<int, 2> c13 = {1, 3};
  const ReconstructionPlan p13 = solve_T(spec, c13);
  CHECK((p13.T - paper_t({std::sqrt(2.0), -1.0, -1.0, std::sqrt(2.0)}))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // {2,3}: verify by substitution into the defining linear system.
  const std::array<int, 2> c23 = {2, 3};
  const ReconstructionPlan p23 = solve_T(spec, c23);
  Mat lhs(2, 2), rhs(2, 2);
  lhs.row(0) = spec.L.row(1);
  lhs.row(1) = spec.L.row(2);
  rhs << 1.0, 0.0, spec.L(0, 0), spec.L(0, 1);
  CHECK((p23.T * lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(solve_T(spec, std::array<int, 2>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(solve_T(spec, std::array<int, 2>{1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(solve_T(spec, std::array<int, 1>{1}), std::invalid_argument);
}

TEST_CASE("encoding hides the secret from share 3") {
  const ThresholdSchemeSpec spec = make_scheme(2, 3);
  const double r = 0.8;
  const std::array<int, 1> share3 = {2};  // 0-based mode of share 3
  const Mat thermal_cov = thermal(std::sinh(r) * std::sinh(r)).cov();
  for (Complex alpha : {Complex(0, 0), Complex(1, 0), Complex(0, 2)}) {
    const EncodedSecret enc = encode(alpha, spec, r);
    CHECK(enc.state.mode_count() == 3);
    const GaussianState reduced = partial_trace(enc.state, share3);
    CHECK(reduced.mean().norm() < 1e-12);
    CHECK((reduced.cov() - thermal_cov).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("encoding equals the directly built dealer interferometer") {
  // Fig-2a construction: |psi>|TMSV> with modes 1,2 mixed on the inverse
  // 50/50 beamsplitter.
  const ThresholdSchemeSpec spec = make_scheme(2, 3);
  const Complex alpha(0.7, -0.4);
  const double r = 0.9;
  const EncodedSecret enc = encode(alpha, spec, r);

  const GaussianState product = tensor(coherent(alpha), two_mode_squeezed(r));
  const std::array<int, 2> first_two = {0, 1};
  const GaussianState direct =
      apply(beamsplitter(std::numbers::pi / 4, 0.0).inverse(), product, first_two);
  CHECK((enc.state.mean() - direct.mean()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((enc.state.cov() - direct.cov()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("k = 1 hands the secret over") {
  const ThresholdSchemeSpec spec = make_scheme(1, 1);
  const EncodedSecret enc = encode({0.3, 0.9}, spec, 1.0);
  CHECK(enc.state.mode_count() == 1);
  CHECK((enc.state.mean() - coherent({0.3, 0.9}).mean()).norm() < 1e-14);
  CHECK((enc.state.cov() - coherent({0.3, 0.9}).cov()).norm() < 1e-14);
  const std::array<int, 1> only = {1};
  CHECK(fidelity_coherent(reconstruct(enc, solve_T(spec, only)), {0.3, 0.9}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruction fidelities follow the finite-squeezing law") {
  const ThresholdSchemeSpec spec = make_scheme(2, 3);
  const Complex alpha(1.0, 0.0);
  const std::array<int, 2> c12 = {1, 2}, c13 = {1, 3}, c23 = {2, 3};
  const ReconstructionPlan p12 = solve_T(spec, c12);
  const ReconstructionPlan p13 = solve_T(spec, c13);
  const ReconstructionPlan p23 = solve_T(spec, c23);
  for (double r = 0.0; r <= 5.0; r += 0.5) {
    const EncodedSecret enc = encode(alpha, spec, r);
    const double law = 1.0 / (1.0 + std::exp(-2.0 * r));
    CHECK(std::abs(fidelity_coherent(reconstruct(enc, p12), alpha) - 1.0) < 1e-9);
    CHECK(std::abs(fidelity_coherent(reconstruct(enc, p13), alpha) - law) < 1e-9);
    CHECK(std::abs(fidelity_coherent(reconstruct(enc, p23), alpha) - law) < 1e-9);
  }
  // No squeezing at all leaves the classical bound.
  const EncodedSecret bare = encode(alpha, spec, 0.0);
  CHECK(std::abs(fidelity_coherent(reconstruct(bare, p13), alpha) - 0.5) < 1e-10);
}

TEST_CASE("reconstruction rejects plans that touch discarded shares") {
  const ThresholdSchemeSpec spec23 = make_scheme(2, 3);
  const ThresholdSchemeSpec spec22 = make_scheme(2, 2);
  CHECK(spec22.discarded_shares == std::vector<int>{3});
  const EncodedSecret enc = encode({0.5, 0.0}, spec22, 0.7);
  CHECK(enc.state.mode_count() == 2);
  const std::array<int, 2> c13 = {1, 3};
  CHECK_THROWS_AS(reconstruct(enc, solve_T(spec23, c13)), std::invalid_argument);
}

TEST_CASE("(2,2) thermal-mixing construction") {
  // Equals the share-3-traced (2,3) encoding at nbar = sinh^2 r.
  const Complex alpha(1.0, -0.5);
  for (double r : {0.0, 0.5, 1.0}) {
    const GaussianState mixed =
        encode_22_thermal(alpha, std::sinh(r) * std::sinh(r));
    const std::array<int, 2> first_two = {0, 1};
    const GaussianState traced =
        partial_trace(encode(alpha, make_scheme(2, 3), r).state, first_two);
    CHECK((mixed.mean() - traced.mean()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((mixed.cov() - traced.cov()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // nbar = 0, alpha = 0: the beamsplitter maps vacuum to vacuum.
  const GaussianState vac = encode_22_thermal({0.0, 0.0}, 0.0);
  CHECK(vac.mean().norm() < 1e-15);
  CHECK((vac.cov() - vacuum(2).cov()).norm() < 1e-14);

  // Recombining on the inverse beamsplitter returns the secret and the
  // thermal state on the two outputs.
  const double nbar = 1.7;
  const GaussianState two = encode_22_thermal(alpha, nbar);
  const GaussianState recombined =
      apply(beamsplitter(std::numbers::pi / 4, 0.0), two);
  const std::array<int, 1> out1 = {0}, out2 = {1};
  CHECK(fidelity_coherent(partial_trace(recombined, out1), alpha) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const GaussianState leftover = partial_trace(recombined, out2);
  CHECK((leftover.cov() - thermal(nbar).cov()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(leftover.mean().norm() < 1e-12);
}

TEST_CASE("single-share leakage") {
  const ThresholdSchemeSpec spec = make_scheme(2, 3);
  const std::array<int, 1> share3 = {3}, share1 = {1}, share2 = {2};

  // Share 3 learns nothing at any squeezing.
  for (double r : {0.0, 1.0, 3.0}) {
    const EncodedSecret enc = encode({0.0, 0.0}, spec, r);
    CHECK(leakage(enc, share3, {0.0, 0.0}, {1.0, 0.0}) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  // Shares 1 and 2: leakage fidelity grows with r and approaches 1.
  for (const auto& subset : {share1, share2}) {
    double previous = 0.0;
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const EncodedSecret enc = encode({0.0, 0.0}, spec, r);
      const double f = leakage(enc, subset, {0.0, 0.0}, {1.0, 0.0});
      CHECK(f > previous);
      previous = f;
    }
    CHECK(previous > 0.99);
  }

  // Identical secrets are indistinguishable by definition.
  const EncodedSecret enc = encode({0.4, 0.4}, spec, 1.0);
  CHECK(leakage(enc, share1, {0.4, 0.4}, {0.4, 0.4}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Oversized subsets are rejected.
  const std::array<int, 2> both = {1, 2};
  CHECK_THROWS_AS(leakage(enc, both, {0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("analytic leakage value for share 1") {
  // Reduced share-1 covariance is (cosh^2 r / 2) I with mean offset
  // Re(alpha) in x, so the displaced-state fidelity is
  // exp(-1/(2 cosh^2 r)) for |alpha0 - alpha1| = 1.
  const ThresholdSchemeSpec spec = make_scheme(2, 3);
  const std::array<int, 1> share1 = {1};
  for (double r : {0.0, 1.0, 2.0}) {
    const EncodedSecret enc = encode({0.0, 0.0}, spec, r);
    const double expected = std::exp(-0.5 / std::pow(std::cosh(r), 2));
    CHECK(leakage(enc, share1, {0.0, 0.0}, {1.0, 0.0}) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fidelity sweep tables") {
  const ThresholdSchemeSpec spec = make_scheme(2, 3);
  std::vector<double> grid;
  for (double r = 0.0; r <= 3.0; r += 0.25) grid.push_back(r);

  const std::array<int, 2> c13 = {1, 3};
  const auto rows13 = fidelity_sweep(spec, c13, {1.0, 0.0}, grid);
  REQUIRE(rows13.size() == grid.size());
  for (const SweepRow& row : rows13) {
    CHECK(row.formula == doctest::Approx(0.5 * (1.0 + std::tanh(row.r))).epsilon(1e-15));
    CHECK(row.abs_error < 1e-9);
  }

  const std::array<int, 2> c12 = {1, 2};
  for (const SweepRow& row : fidelity_sweep(spec, c12, {1.0, 0.0}, grid)) {
    CHECK(row.formula == 1.0);
    CHECK(row.abs_error < 1e-9);
  }

  CHECK(fidelity_sweep(spec, c13, {1.0, 0.0}, std::span<const double>{}).empty());

  // Fidelity is non-decreasing in r for every collaborator pair.
  for (const auto& collab : {c12, c13, std::array<int, 2>{2, 3}}) {
    double previous = 0.0;
    for (const SweepRow& row : fidelity_sweep(spec, collab, {0.5, 0.5}, grid)) {
      CHECK(row.measured >= previous - 1e-12);
      previous = row.measured;
    }
  }
}

TEST_CASE("reconstruction works for every k-subset and is order robust") {
  std::mt19937 rng(17);
  for (int k : {2, 3}) {
    const ThresholdSchemeSpec spec = make_scheme(k, 2 * k - 1);
    const Complex alpha(0.6, -0.2);
    const EncodedSecret enc = encode(alpha, spec, 0.9);

    std::vector<int> shares(2 * k - 1);
    for (int i = 0; i < 2 * k - 1; ++i) shares[i] = i + 1;
    std::vector<int> pick(k);
    std::function<void(int, int)> walk = [&](int start, int depth) {
      if (depth == k) {
        const GaussianState out = reconstruct(enc, solve_T(spec, pick));
        CHECK(out.mode_count() == 1);
        CHECK(symplectic_eigenvalues(out.cov()).minCoeff() >= 0.5 - 1e-9);
        return;
      }
      for (int i = start; i < 2 * k - 1; ++i) {
        pick[depth] = shares[i];
        walk(i + 1, depth + 1);
      }
    };
    walk(0, 0);
  }

  // The reconstructed state does not depend on the complement ordering.
  const ThresholdSchemeSpec spec = make_scheme(3, 5);
  const EncodedSecret enc = encode({0.4, 0.1}, spec, 0.7);
  const std::array<int, 3> collaborators = {2, 4, 5};
  const std::array<int, 2> fwd = {1, 3}, rev = {3, 1};
  const GaussianState a = reconstruct(enc, solve_T(spec, collaborators, fwd));
  const GaussianState b = reconstruct(enc, solve_T(spec, collaborators, rev));
  CHECK((a.mean() - b.mean()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.cov() - b.cov()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("discarding shares commutes with encoding") {
  // encode on (k, n) equals the (k, 2k-1) encoding traced over the
  // discarded shares, and reconstruction fidelities match.
  for (int k : {2, 3}) {
    for (int n = k; n <= 2 * k - 1; ++n) {
      ThresholdSchemeSpec full = make_scheme(k, 2 * k - 1);
      ThresholdSchemeSpec reduced = make_scheme(k, n);
      const Complex alpha(0.8, 0.3);
      const double r = 0.6;
      const EncodedSecret enc_reduced = encode(alpha, reduced, r);
      const EncodedSecret enc_full = encode(alpha, full, r);
      std::vector<int> keep;
      for (int share = 1; share <= n; ++share) keep.push_back(share - 1);
      const GaussianState traced = partial_trace(enc_full.state, keep);
      CHECK((enc_reduced.state.mean() - traced.mean()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((enc_reduced.state.cov() - traced.cov()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}
