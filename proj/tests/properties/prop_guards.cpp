// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Structural invariants of the stochastic and averaged steppers: every
// update must return a unit-trace Hermitian positive state, pure inputs
// must stay pure under the measurement update, and the guard rails must
// trip on the inputs they were written for.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "../support/test_util.hpp"
#include "paqs/core/rng.hpp"
#include "paqs/protocols/run.hpp"
#include "paqs/sme/steppers.hpp"

using namespace paqs;

namespace {

void require_state_invariants(const Mat& rho, double positivity_slack) {
  REQUIRE_THAT(trace_of(rho).real(),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE(std::abs(trace_of(rho).imag()) < 1e-13);
  REQUIRE(hermiticity_defect(rho) < 1e-13);
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  REQUIRE(es.eigenvalues().minCoeff() > -positivity_slack);
}

Mat w3_observable() {
  Mat x = Mat::Zero(4, 4);
  x.diagonal() << Complex(3, 0), Complex(1, 0), Complex(-1, 0), Complex(-3, 0);
  return x;
}

Mat w3_generator() { return 0.5 * dicke_operators(3).sum_y; }

}  // namespace

TEST_CASE("measurement update preserves state structure", "[guards]") {
  Mat x = w3_observable();
  Measurement meas(x, 1.0);
  const double dt = 1e-3;

  for (int trial = 0; trial < 25; ++trial) {
    Mat rho = paqs_test::random_density(4, 900 + trial);
    NoiseStream noise{77, static_cast<std::uint64_t>(trial)};
    double dw = noise.wiener_increment(0, dt);
    double dv = meas.sample_outcome(rho, dt, dw);
    Mat out = meas.povm_step(rho, dt, dv);
    // The Kraus map keeps exact positivity up to roundoff.
    require_state_invariants(out, 1e-14);
  }
}

TEST_CASE("pure states stay pure through the measurement update", "[guards]") {
  Measurement meas(w3_observable(), 1.0);
  const double dt = 1e-3;
  Vec psi = paqs_test::random_state(4, 31);
  NoiseStream noise{5, 0};
  for (int s = 0; s < 200; ++s) {
    double dw = noise.wiener_increment(static_cast<std::uint64_t>(s), dt);
    double dv = meas.sample_outcome(psi, dt, dw);
    psi = meas.povm_step(psi, dt, dv);
    REQUIRE_THAT(psi.norm(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    Mat rho = pure_density(psi);
    REQUIRE_THAT(trace_of(rho * rho).real(),
                 Catch::Matchers::WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("euler and controlled steps keep trace and hermiticity", "[guards]") {
  Mat x = w3_observable();
  Mat hf = w3_generator();
  const double dt = 1e-4;

  for (int trial = 0; trial < 25; ++trial) {
    Mat rho = paqs_test::random_density(4, 1600 + trial);
    NoiseStream noise{13, static_cast<std::uint64_t>(trial)};
    double dw = noise.wiener_increment(0, dt);

    // Euler steps are positive only to the order of the scheme, so allow
    // an O(dt^2)-scale excursion below zero.
    require_state_invariants(sme_step(rho, x, 1.0, dt, dw), 1e-6);
    require_state_invariants(
        controlled_sme_step(rho, x, 1.0, hf, 1.7, -0.6, dt, dw), 1e-6);
    require_state_invariants(aslo_step(rho, x, 1.0, hf, 1.7, -0.6, dt), 1e-6);
  }
}

TEST_CASE("averaged channel trajectories stay positive over time", "[guards]") {
  Measurement meas(w3_observable(), 1.0);
  RotationFactory rot(w3_generator());
  AveragedChannelStepper stepper(meas, rot, 1e-3);
  Mat rho = paqs_test::random_density(4, 4242);
  for (int s = 0; s < 150; ++s) rho = stepper.step(rho, 0.9, -0.4);
  require_state_invariants(rho, 1e-12);
}

TEST_CASE("renormalize rejects vanishing inputs", "[guards]") {
  Mat zero = Mat::Zero(3, 3);
  REQUIRE_THROWS_AS(renormalize(zero), PaqsError);
  Vec zv = Vec::Zero(3);
  REQUIRE_THROWS_AS(renormalize(zv), PaqsError);
}

TEST_CASE("absurd measurement records are refused", "[guards]") {
  Measurement meas(w3_observable(), 1.0);
  // A record this far outside the spectrum has likelihood below the
  // representable range in every branch.
  REQUIRE_THROWS_WITH(meas.weights(1e-3, 5.0),
                      Catch::Matchers::ContainsSubstring("likelihood"));
  Vec psi = Vec::Unit(4, 0);
  REQUIRE_THROWS_AS(meas.povm_step(psi, 1e-3, -7.0), PaqsError);
}

TEST_CASE("positivity monitors catch bad states", "[guards]") {
  Mat bad = Mat::Identity(3, 3);
  bad(2, 2) = Complex(-0.5, 0.0);
  REQUIRE_THROWS_AS(check_state_quick(bad), TrajectoryAbort);

  // Positive diagonal but an off-diagonal block large enough to push an
  // eigenvalue negative: only the spectral check sees it.
  Mat hidden = Mat::Zero(2, 2);
  hidden(0, 0) = hidden(1, 1) = Complex(0.5, 0.0);
  hidden(0, 1) = hidden(1, 0) = Complex(0.9, 0.0);
  REQUIRE_NOTHROW(check_state_quick(hidden));
  REQUIRE_THROWS_AS(check_state_full(hidden), TrajectoryAbort);
}

TEST_CASE("step bound validation", "[guards]") {
  StepParams ok{1e-3, 1.0};
  REQUIRE_NOTHROW(ok.validate());
  StepParams tight{1e-2, 1.0};
  REQUIRE_NOTHROW(tight.validate());
  StepParams wide{1e-1, 1.0};
  REQUIRE_THROWS_WITH(wide.validate(),
                      Catch::Matchers::ContainsSubstring("0.01"));
  StepParams negative{-1e-3, 1.0};
  REQUIRE_THROWS_AS(negative.validate(), PaqsError);
}

TEST_CASE("nominal ensembles run without aborts", "[guards]") {
  nlohmann::json j = {{"protocol", "tea"},    {"target", "w"},
                      {"n_qubits", 3},        {"k_mhz", 1.0},
                      {"t_final_us", 0.25},   {"n_traj", 40},
                      {"seed", 303},          {"output_dir", "out"}};
  EnsembleStats w = run_tea(parse_config_json(j));
  REQUIRE(w.aborted == 0);

  j["target"] = "ghz";
  EnsembleStats g = run_tea(parse_config_json(j));
  REQUIRE(g.aborted == 0);

  j["target"] = "w";
  j["protocol"] = "baseline-no-feedback";
  EnsembleStats b = run_baseline(parse_config_json(j));
  REQUIRE(b.aborted == 0);
}
