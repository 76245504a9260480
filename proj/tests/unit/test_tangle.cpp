// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "../support/test_util.hpp"
#include "paqs/tangle/protocol.hpp"
#include "paqs/tangle/three_tangle.hpp"

using namespace paqs;

namespace {

Vec ghz3() {
  Vec v = Vec::Zero(8);
  v(0) = v(7) = Complex(1.0 / std::sqrt(2.0), 0.0);
  return v;
}

Vec w3() {
  Vec v = Vec::Zero(8);
  v(1) = v(2) = v(4) = Complex(1.0 / std::sqrt(3.0), 0.0);
  return v;
}

Vec frozen_probe() {
  Vec v(8);
  v << Complex(0.30, 0), Complex(0.12, 0.08), Complex(-0.05, 0),
      Complex(0.22, -0.30), Complex(0, 0.17), Complex(-0.08, 0.06),
      Complex(0.25, 0), Complex(0.40, -0.10);
  v /= v.norm();
  return v;
}

}  // namespace

TEST_CASE("tangle of reference states", "[tangle]") {
  REQUIRE(std::abs(three_tangle(ghz3()) - 1.0) < 1e-12);
  REQUIRE(three_tangle(w3()) < 1e-12);
  Vec product = Vec::Zero(8);
  product(0) = 1.0;
  REQUIRE(three_tangle(product) < 1e-15);

  // cos a |000> + sin a |111> carries tangle sin^2(2a).
  double alpha = pi / 6.0;
  Vec tilted = Vec::Zero(8);
  tilted(0) = std::cos(alpha);
  tilted(7) = std::sin(alpha);
  REQUIRE(std::abs(three_tangle(tilted) - 0.75) < 1e-12);

  REQUIRE(std::abs(three_tangle(frozen_probe()) - 0.16728577709373915) <
          1e-12);
}

TEST_CASE("tangle is invariant under local unitaries", "[tangle]") {
  Vec psi = frozen_probe();
  double tau0 = three_tangle(psi);
  std::vector<Mat> locals = {paqs_test::random_unitary(2, 5),
                             paqs_test::random_unitary(2, 6),
                             paqs_test::random_unitary(2, 7)};
  Mat u = kron_chain(locals);
  REQUIRE(std::abs(three_tangle(u * psi) - tau0) < 1e-12);
}

TEST_CASE("hyperdeterminant and concurrence routes agree", "[tangle]") {
  for (unsigned seed = 100; seed < 130; ++seed) {
    Vec psi = paqs_test::random_state(8, seed);
    double a = three_tangle(psi);
    double b = three_tangle_via_concurrences(psi);
    REQUIRE(std::abs(a - b) < 1e-10);
  }
}

TEST_CASE("bipartite splits of reference states", "[tangle]") {
  REQUIRE(std::abs(one_vs_rest_tangle(ghz3()) - 1.0) < 1e-12);
  // Dropping one qubit of a W state leaves pair concurrence 2/3.
  REQUIRE(std::abs(pair_concurrence(w3(), 3) - 2.0 / 3.0) < 1e-12);
  REQUIRE(pair_concurrence(ghz3(), 3) < 1e-12);
}

namespace {

struct SymSetup {
  Mat x = two_body_zz_sum(3);
  Mat gen = 0.5 * (collective_operator(3, 'x') - Mat::Identity(8, 8));
  double k = 1.0;
  double dt = 1e-3;
};

}  // namespace

TEST_CASE("expected-tangle objective hits frozen quadrature values",
          "[tangle]") {
  SymSetup s;
  Measurement meas(s.x, s.k);
  RotationFactory rot(s.gen);
  Vec plus = Vec::Constant(8, Complex(1.0 / std::sqrt(8.0), 0.0));

  TangleOptimizer opt16(meas, rot, s.dt, 16);
  TangleOptimizer opt32(meas, rot, s.dt, 32);
  double j16 = opt16.objective(plus, 0.0);
  double j32 = opt32.objective(plus, 0.0);
  REQUIRE(std::abs(j16 - 0.002210593848973471) < 1e-12);
  REQUIRE(std::abs(j32 - 0.0022117141072578285) < 1e-12);
  REQUIRE(std::abs(j16 - j32) < 5e-6);
}

TEST_CASE("objective is rotation-flat on collective-X eigenstates",
          "[tangle]") {
  SymSetup s;
  Measurement meas(s.x, s.k);
  RotationFactory rot(s.gen);
  TangleOptimizer opt(meas, rot, s.dt, 16);
  Vec plus = Vec::Constant(8, Complex(1.0 / std::sqrt(8.0), 0.0));
  double j0 = opt.objective(plus, 0.0);
  REQUIRE(std::abs(opt.objective(plus, 0.3) - j0) < 1e-14);
  REQUIRE(opt.best_angle(plus) == 0.0);
}

TEST_CASE("captured states choose no rotation", "[tangle]") {
  SymSetup s;
  Measurement meas(s.x, s.k);
  RotationFactory rot(s.gen);
  TangleOptimizer opt(meas, rot, s.dt, 16);
  Vec g = ghz3();
  REQUIRE(opt.best_angle(g) == 0.0);
  REQUIRE(std::abs(opt.max_branch_probability(g) - 1.0) < 1e-15);
  Vec spread = frozen_probe();
  REQUIRE(opt.max_branch_probability(spread) < 1.0);
}

TEST_CASE("weak-kernel limit reduces the objective to the bare tangle",
          "[tangle]") {
  SymSetup s;
  Measurement meas(s.x, 1e-9);
  RotationFactory rot(s.gen);
  TangleOptimizer opt(meas, rot, s.dt, 16);
  Vec psi = frozen_probe();
  for (double th : {0.0, 0.4, 1.1}) {
    Vec rotated = rot(th) * psi;
    REQUIRE(std::abs(opt.objective(psi, th) - three_tangle(rotated)) < 2e-5);
  }
}

TEST_CASE("chosen angle is at least as good as any grid angle", "[tangle]") {
  SymSetup s;
  Measurement meas(s.x, s.k);
  RotationFactory rot(s.gen);
  TangleOptimizer opt(meas, rot, s.dt, 16);
  Vec psi = frozen_probe();
  double theta = opt.best_angle(psi);
  double j_star = opt.objective(psi, theta);
  for (int i = 0; i < 64; ++i) {
    double th = pi * i / 64.0;
    REQUIRE(j_star >= opt.objective(psi, th) - 1e-9);
  }
}
