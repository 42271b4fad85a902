#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvqss/fock.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace cvqss;

TEST_CASE("coherent expansion") {
  const FockVector zero = coherent_fock({0.0, 0.0}, 10);
  CHECK(std::abs(zero.amps(0) - 1.0) < 1e-15);
  CHECK(zero.amps.tail(10).norm() < 1e-15);

  // Completeness: leakage shrinks as the cutoff grows.
  double previous = 1.0;
  for (int cutoff : {5, 10, 20, 40}) {
    const double leak = coherent_fock({1.0, 0.0}, cutoff).leakage;
    CHECK(leak < previous);
    previous = leak;
  }
  CHECK(previous < 1e-12);

  // Mean photon number at alpha = 1, cutoff 40.
  const FockVector one = coherent_fock({1.0, 0.0}, 40);
  double nbar = 0.0;
  for (int n = 0; n <= 40; ++n) nbar += n * std::norm(one.amps(n));
  CHECK(std::abs(nbar - 1.0) < 1e-8);

  CHECK_THROWS_AS(coherent_fock({10.0, 0.0}, 40), std::domain_error);
}

TEST_CASE("two-mode squeezed Schmidt form") {
  const FockVector vac = two_mode_squeezed_fock(0.0, 8);
  CHECK(std::abs(vac.amps(0) - 1.0) < 1e-15);
  CHECK(vac.amps.tail(vac.amps.size() - 1).norm() < 1e-15);

  const double r = 0.5;
  const double eta = std::tanh(r);
  const FockVector tmsv = two_mode_squeezed_fock(r, 30);
  const std::array<int, 1> keep = {0};
  const Vec dist = photon_distribution(partial_trace_fock(tmsv, keep));
  for (int n = 0; n + 1 <= 20; ++n)
    CHECK(std::abs(dist(n + 1) / dist(n) - eta * eta) < 1e-12);

  // Moments match the Gaussian construction at r = 0.4, cutoff 40.
  const auto [mean, cov] = moments(two_mode_squeezed_fock(0.4, 40));
  CHECK(mean.norm() < 1e-12);
  CHECK((cov - two_mode_squeezed(0.4).cov()).cwiseAbs().maxCoeff() < 1e-6);

  CHECK_THROWS_AS(two_mode_squeezed_fock(5.0, 20), std::domain_error);
}

TEST_CASE("element application") {
  // A zero-angle beamsplitter leaves the state alone.
  const FockVector reg = tensor_fock(coherent_fock({0.4, 0.1}, 15),
                                     coherent_fock({-0.2, 0.3}, 15));
  const FockVector same = apply_element_fock(reg, BeamSplitter{0, 1, 0.0, 0.0});
  CHECK((same.amps - reg.amps).norm() < 1e-14);

  // 50/50 on |1,0>: (|1,0> + |0,1>)/sqrt(2) in this phase convention.
  FockVector single = vacuum_fock(2, 6);
  single.amps(0) = 0.0;
  single.amps(1) = 1.0;  // |n0=1, n1=0>
  const FockVector split =
      apply_element_fock(single, BeamSplitter{0, 1, std::numbers::pi / 4, 0.0});
  CHECK(std::abs(std::abs(split.amps(1)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(std::abs(split.amps(7)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(split.amps.squaredNorm() - 1.0) < 1e-12);

  // Beamsplitter on a coherent pair reproduces the Gaussian means.
  const FockVector mixed =
      apply_element_fock(reg, BeamSplitter{0, 1, 0.6, -0.8});
  const auto [mean, cov] = moments(mixed);
  const GaussianState g = apply(beamsplitter(0.6, -0.8),
                                tensor(coherent({0.4, 0.1}), coherent({-0.2, 0.3})));
  CHECK((mean - g.mean()).norm() < 1e-8);
  CHECK((cov - g.cov()).norm() < 1e-8);

  // Pushing squeezing far beyond the cutoff trips the leakage budget.
  FockVector tiny = vacuum_fock(1, 4);
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 8; ++i)
          tiny = apply_element_fock(tiny, SingleModeSqueezer{0, 0.8, 0.0});
      }(),
      std::domain_error);
}

TEST_CASE("density evolution matches vector evolution") {
  const FockVector reg = tensor_fock(coherent_fock({0.5, -0.1}, 12),
                                     coherent_fock({0.0, 0.2}, 12));
  const CircuitElement bs = BeamSplitter{0, 1, 0.7, 0.4};
  const FockDensity via_density = apply_element_fock(density_from_vector(reg), bs);
  const FockDensity via_vector = density_from_vector(apply_element_fock(reg, bs));
  CHECK((via_density.rho - via_vector.rho).norm() < 1e-10);
}

TEST_CASE("oracle moments and fidelities") {
  const auto [mean, cov] = moments(vacuum_fock(2, 10));
  CHECK(mean.norm() < 1e-15);
  CHECK((cov - 0.5 * Mat::Identity(4, 4)).norm() < 1e-14);

  const FockVector a = coherent_fock({0.3, 0.4}, 30);
  CHECK(fidelity_fock(a, a) == doctest::Approx(1.0).epsilon(1e-12));

  // Fidelity between vacuum and the traced two-mode squeezed state,
  // computed oracle-side, against the closed form 1/(1 + sinh^2 r).
  const double r = 0.3;
  const std::array<int, 1> keep = {0};
  const FockDensity traced = partial_trace_fock(two_mode_squeezed_fock(r, 40), keep);
  const double nbar = std::sinh(r) * std::sinh(r);
  CHECK(std::abs(fidelity_fock(traced, coherent_fock({0.0, 0.0}, 40)) -
                 1.0 / (1.0 + nbar)) < 1e-5);
  CHECK(std::abs(fidelity_fock(traced, coherent_fock({0.0, 0.0}, 40)) -
                 fidelity_coherent(thermal(nbar), {0.0, 0.0})) < 1e-5);

  // Mixed-mixed fidelity: identical states fuse to 1.
  CHECK(fidelity_fock(traced, traced) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(trace_distance_fock(traced, traced) < 1e-12);
}

TEST_CASE("leakage accounting shrinks with the cutoff") {
  double previous = 1.0;
  for (int cutoff : {8, 16, 32}) {
    FockVector state = coherent_fock({0.8, 0.0}, cutoff);
    state = apply_element_fock(state, SingleModeSqueezer{0, 0.4, 0.3});
    CHECK(state.leakage < previous);
    previous = state.leakage;
  }
}
