// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "json.hpp"
#include "paqs/protocols/build.hpp"
#include "paqs/protocols/run.hpp"

using namespace paqs;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

ProtocolConfig make_config(const char* protocol, const char* target,
                           int n_qubits, double t_final,
                           json extra = json::object()) {
  json j = {{"protocol", protocol}, {"target", target},
            {"n_qubits", n_qubits}, {"k_mhz", 1.0},
            {"t_final_us", t_final}, {"n_traj", 30},
            {"seed", 11},            {"output_dir", "out"}};
  for (auto& [key, value] : extra.items()) j[key] = value;
  return parse_config_json(j);
}

constexpr double kPreRotation = 1.230959417340775;  // 2 asin(1/sqrt 3)

}  // namespace

TEST_CASE("w protocol in the collective basis", "[protocols]") {
  BuiltProtocol bp = build_protocol(make_config("tea", "w", 3, 3.0));
  REQUIRE(bp.basis == Basis::Dicke);
  REQUIRE(bp.dim == 4);
  REQUIRE(bp.policy == DecidePolicy::InfinitesimalWithRescue);

  const double want[4] = {3.0, 1.0, -1.0, -3.0};
  for (int i = 0; i < 4; ++i)
    REQUIRE_THAT(bp.x(i, i).real(), WithinAbs(want[i], 1e-14));
  REQUIRE(bp.target(1) == Complex(1.0, 0.0));

  REQUIRE_THAT(std::abs(bp.pre_rotation), WithinAbs(kPreRotation, 1e-9));
  double f0 = std::norm(bp.target.dot(bp.psi0));
  REQUIRE_THAT(f0, WithinAbs(4.0 / 9.0, 1e-12));
}

TEST_CASE("w protocol in the full basis reaches the same start", "[protocols]") {
  BuiltProtocol bp = build_protocol(
      make_config("tea", "w", 3, 3.0, {{"representation", "full"}}));
  REQUIRE(bp.basis == Basis::Full);
  REQUIRE(bp.dim == 8);
  REQUIRE_THAT(std::abs(bp.pre_rotation), WithinAbs(kPreRotation, 1e-9));
  REQUIRE_THAT(std::norm(bp.target.dot(bp.psi0)), WithinAbs(4.0 / 9.0, 1e-12));
  // Target is the equal single-excitation superposition.
  for (int b : {1, 2, 4})
    REQUIRE_THAT(std::abs(bp.target(b)), WithinAbs(1.0 / std::sqrt(3.0), 1e-14));
}

TEST_CASE("ghz protocol in the parity-pair basis", "[protocols]") {
  BuiltProtocol bp = build_protocol(make_config("tea", "ghz", 4, 3.0));
  REQUIRE(bp.basis == Basis::GhzSym);
  REQUIRE(bp.dim == 3);
  REQUIRE(bp.policy == DecidePolicy::GhzCandidates);
  const double want[3] = {6.0, 0.0, -2.0};
  for (int i = 0; i < 3; ++i)
    REQUIRE_THAT(bp.x(i, i).real(), WithinAbs(want[i], 1e-14));
  REQUIRE(bp.target(0) == Complex(1.0, 0.0));
  REQUIRE((bp.psi0 - ghz_sym_plus_state(4)).norm() < 1e-14);
  REQUIRE(bp.pre_rotation == 0.0);
}

TEST_CASE("onebody comparison protocol", "[protocols]") {
  BuiltProtocol bp = build_protocol(
      make_config("tea", "ghz", 3, 3.0, {{"observable", "onebody-nonsym"}}));
  REQUIRE(bp.basis == Basis::Full);
  REQUIRE(bp.dim == 8);
  REQUIRE(bp.policy == DecidePolicy::LiteralInfinitesimal);
  const double want[8] = {0.0, 2.0, 2.0, 4.0, -4.0, -2.0, -2.0, 0.0};
  for (int i = 0; i < 8; ++i)
    REQUIRE_THAT(bp.x(i, i).real(), WithinAbs(want[i], 1e-14));
  REQUIRE_THAT(std::norm(bp.target.dot(bp.psi0)), WithinAbs(0.25, 1e-14));
}

TEST_CASE("conditioned ensemble is deterministic and worker invariant",
          "[protocols]") {
  ProtocolConfig c = make_config("tea", "w", 3, 0.1, {{"n_traj", 80}});
  EnsembleStats a = run_tea(c, 1);
  EnsembleStats b = run_tea(c, 4);
  REQUIRE(a.aborted == 0);
  REQUIRE(a.n_traj == 80);
  REQUIRE(a.times.size() == 101);
  REQUIRE_THAT(a.mean_fidelity[0], WithinAbs(4.0 / 9.0, 1e-12));
  REQUIRE(a.mean_fidelity == b.mean_fidelity);
  REQUIRE(a.sem == b.sem);
  REQUIRE(a.large_angle_traj_fraction == b.large_angle_traj_fraction);

  EnsembleStats again = run_tea(c, 1);
  REQUIRE(a.mean_fidelity == again.mean_fidelity);

  ProtocolConfig c2 = c;
  c2.seed = 12;
  EnsembleStats other = run_tea(c2, 1);
  REQUIRE(a.mean_fidelity != other.mean_fidelity);
}

TEST_CASE("feedback lifts the ensemble mean above the passive run",
          "[protocols]") {
  ProtocolConfig fb = make_config("tea", "w", 3, 0.5, {{"n_traj", 60}});
  EnsembleStats with = run_tea(fb);

  ProtocolConfig passive =
      make_config("baseline-no-feedback", "w", 3, 0.5, {{"n_traj", 60}});
  EnsembleStats without = run_baseline(passive);

  REQUIRE(without.aborted == 0);
  REQUIRE_THAT(without.mean_fidelity[0], WithinAbs(4.0 / 9.0, 1e-12));
  REQUIRE(without.sem[0] < 1e-12);
  REQUIRE(with.mean_fidelity.back() > without.mean_fidelity.back() + 0.1);
}

TEST_CASE("averaged run reproduces frozen checkpoints", "[protocols]") {
  ProtocolConfig c = make_config("aslo", "w", 3, 0.01);
  AsloRun r = run_aslo(c);
  REQUIRE(r.quadrature_order == 32);
  REQUIRE(r.fidelity.size() == 11);
  REQUIRE(r.schedule.size() == 10);
  REQUIRE(r.schedule.fingerprint == physics_fingerprint(c));
  REQUIRE_THAT(r.schedule.a1[0], WithinAbs(2.6666666666666674, 1e-10));
  REQUIRE_THAT(r.schedule.a2[0], WithinAbs(-1.2570787221094246, 1e-10));
  REQUIRE_THAT(r.fidelity[10], WithinAbs(0.4893086207278101, 1e-9));
  REQUIRE_THAT(r.times[10], WithinAbs(0.01, 1e-15));
}

TEST_CASE("averaged run converges and its schedule replays", "[protocols]") {
  ProtocolConfig c = make_config("aslo", "w", 3, 3.0);
  AsloRun r = run_aslo(c);
  REQUIRE(r.fidelity.size() == 3001);
  REQUIRE_THAT(r.fidelity[1500], WithinAbs(0.9834135139246251, 1e-7));
  REQUIRE_THAT(r.fidelity[3000], WithinAbs(0.9834094266371082, 1e-7));
  // Late coefficients are tiny compared to the initial ones.
  REQUIRE(std::abs(r.schedule.a1.back()) < 1e-2);
  REQUIRE(std::abs(r.schedule.a2.back()) < 1e-1);

  ProtocolConfig rc = c;
  rc.n_traj = 50;
  EnsembleStats replay = replay_schedule(r.schedule, rc);
  REQUIRE(replay.aborted == 0);
  REQUIRE(replay.mean_fidelity.back() > 0.9);
  REQUIRE(std::abs(replay.mean_fidelity.back() - r.fidelity.back()) < 0.05);

  ProtocolConfig wrong = rc;
  wrong.t_final = 2.0;
  REQUIRE_THROWS_WITH(replay_schedule(r.schedule, wrong),
                      Catch::Matchers::ContainsSubstring("fingerprint"));

  FeedbackSchedule shorter = r.schedule;
  shorter.times.pop_back();
  shorter.a1.pop_back();
  shorter.a2.pop_back();
  REQUIRE_THROWS_WITH(replay_schedule(shorter, rc),
                      Catch::Matchers::ContainsSubstring("length"));
}

TEST_CASE("collective and full representations agree trajectory by trajectory",
          "[protocols]") {
  ProtocolConfig cd = make_config("tea", "w", 3, 0.1);
  ProtocolConfig cf =
      make_config("tea", "w", 3, 0.1, {{"representation", "full"}});

  BuiltProtocol bd = build_protocol(cd);
  BuiltProtocol bf = build_protocol(cf);
  Measurement md(bd.x, cd.k), mf(bf.x, cf.k);
  RotationFactory rd(bd.h_f), rf(bf.h_f);

  for (int traj : {0, 1, 2}) {
    TrajectoryResult td = run_one_tea_trajectory(bd, md, rd, cd, traj);
    TrajectoryResult tf = run_one_tea_trajectory(bf, mf, rf, cf, traj);
    REQUIRE_FALSE(td.aborted);
    REQUIRE_FALSE(tf.aborted);
    for (std::size_t s = 0; s < td.fidelity.size(); ++s)
      REQUIRE_THAT(td.fidelity[s], WithinAbs(tf.fidelity[s], 1e-8));
    for (std::size_t s = 0; s < td.angles.size(); ++s)
      REQUIRE_THAT(td.angles[s], WithinAbs(tf.angles[s], 1e-7));
  }
}

TEST_CASE("parity-pair and full representations agree for ghz",
          "[protocols]") {
  ProtocolConfig cs = make_config("tea", "ghz", 3, 0.1);
  ProtocolConfig cf =
      make_config("tea", "ghz", 3, 0.1, {{"representation", "full"}});

  BuiltProtocol bs = build_protocol(cs);
  BuiltProtocol bf = build_protocol(cf);
  REQUIRE(bs.basis == Basis::GhzSym);
  REQUIRE(bf.basis == Basis::Full);
  Measurement ms(bs.x, cs.k), mf(bf.x, cf.k);
  RotationFactory rs(bs.h_f), rf(bf.h_f);

  for (int traj : {0, 1}) {
    TrajectoryResult ts = run_one_tea_trajectory(bs, ms, rs, cs, traj);
    TrajectoryResult tf = run_one_tea_trajectory(bf, mf, rf, cf, traj);
    for (std::size_t s = 0; s < ts.fidelity.size(); ++s)
      REQUIRE_THAT(ts.fidelity[s], WithinAbs(tf.fidelity[s], 1e-8));
  }
}
