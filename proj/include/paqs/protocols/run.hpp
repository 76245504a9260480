// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "paqs/core/rng.hpp"
#include "paqs/protocols/build.hpp"
#include "paqs/protocols/ensemble.hpp"
#include "paqs/protocols/schedule.hpp"
#include "paqs/sme/averaged.hpp"
#include "paqs/sme/steppers.hpp"

namespace paqs {

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_fidelity;
  std::vector<double> sem;  // sample std / sqrt(n)
  // Fraction of trajectories that needed the large-angle path at least once.
  double large_angle_traj_fraction = 0.0;
  long aborted = 0;
  int n_traj = 0;
};

struct TrajectoryResult {
  std::vector<double> fidelity;  // n_steps + 1 entries, t = 0 first
  std::vector<double> angles;    // n_steps entries
  bool large_angle = false;
  bool aborted = false;
};

namespace detail {

inline double pure_fidelity(const Vec& target, const Vec& psi) {
  return std::norm(target.dot(psi));
}

struct EnsembleAcc {
  std::vector<double> fid_sum, fid_sq;
  long large = 0;
  long aborted = 0;
  void merge(const EnsembleAcc& o) {
    for (std::size_t i = 0; i < fid_sum.size(); ++i) {
      fid_sum[i] += o.fid_sum[i];
      fid_sq[i] += o.fid_sq[i];
    }
    large += o.large;
    aborted += o.aborted;
  }
};

inline void accumulate(EnsembleAcc& acc, const TrajectoryResult& r) {
  if (r.aborted) {
    ++acc.aborted;
    return;
  }
  for (std::size_t i = 0; i < r.fidelity.size(); ++i) {
    acc.fid_sum[i] += r.fidelity[i];
    acc.fid_sq[i] += r.fidelity[i] * r.fidelity[i];
  }
  if (r.large_angle) ++acc.large;
}

inline EnsembleStats finalize(const ProtocolConfig& c, int n_steps,
                              EnsembleAcc&& acc) {
  EnsembleStats out;
  out.n_traj = c.n_traj;
  out.aborted = acc.aborted;
  long n_ok = c.n_traj - acc.aborted;
  require(n_ok >= 1, "ensemble: every trajectory aborted");
  double n = static_cast<double>(n_ok);
  out.times.resize(n_steps + 1);
  out.mean_fidelity.resize(n_steps + 1);
  out.sem.resize(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) {
    out.times[i] = i * c.dt;
    double mean = acc.fid_sum[i] / n;
    out.mean_fidelity[i] = mean;
    double var =
        n < 2 ? 0.0 : (acc.fid_sq[i] - acc.fid_sum[i] * mean) / (n - 1.0);
    out.sem[i] = std::sqrt(std::max(0.0, var) / n);
  }
  out.large_angle_traj_fraction = static_cast<double>(acc.large) / n;
  return out;
}

}  // namespace detail

// One conditioned trajectory with per-step feedback decisions.  The
// trajectory state stays pure: the Kraus update maps pure states to pure
// states, so density matrices appear only as inputs to the decision rule.
inline TrajectoryResult run_one_tea_trajectory(const BuiltProtocol& bp,
                                               const Measurement& meas,
                                               const RotationFactory& rot,
                                               const ProtocolConfig& c,
                                               int traj) {
  int n_steps = c.n_steps();
  TrajectoryResult r;
  r.fidelity.resize(n_steps + 1);
  r.angles.resize(n_steps);
  NoiseStream noise{c.seed, static_cast<std::uint64_t>(traj)};
  Vec psi = bp.psi0;
  r.fidelity[0] = detail::pure_fidelity(bp.target, psi);
  try {
    for (int s = 0; s < n_steps; ++s) {
      Mat rho_pre = pure_density(psi);
      double dw = noise.wiener_increment(static_cast<std::uint64_t>(s), c.dt);
      double dv = meas.sample_outcome(psi, c.dt, dw);
      Vec psi_post = meas.povm_step(psi, c.dt, dv);
      Mat rho_post = pure_density(psi_post);
      DecideInputs in{rho_pre, rho_post, bp.h_f,  bp.x, c.k,
                      c.dt,    dw,       bp.target, rot};
      FeedbackDecision d = decide_feedback(in, bp.policy);
      psi = d.theta == 0.0 ? psi_post : Vec(rot(d.theta) * psi_post);
      r.angles[s] = d.theta;
      if (d.mode == FeedbackMode::LargeAngle) r.large_angle = true;
      r.fidelity[s + 1] = detail::pure_fidelity(bp.target, psi);
    }
  } catch (const TrajectoryAbort&) {
    r.aborted = true;
  }
  return r;
}

inline EnsembleStats run_tea(const ProtocolConfig& c, int workers = 0) {
  require(c.method == Method::Tea, "run_tea: config protocol must be tea");
  BuiltProtocol bp = build_protocol(c);
  Measurement meas(bp.x, c.k);
  RotationFactory rot(bp.h_f);
  int n_steps = c.n_steps();
  auto make_acc = [&] {
    detail::EnsembleAcc a;
    a.fid_sum.assign(n_steps + 1, 0.0);
    a.fid_sq.assign(n_steps + 1, 0.0);
    return a;
  };
  auto body = [&](int traj, detail::EnsembleAcc& acc) {
    detail::accumulate(acc,
                       run_one_tea_trajectory(bp, meas, rot, c, traj));
  };
  return detail::finalize(
      c, n_steps,
      run_chunked_ensemble<detail::EnsembleAcc>(c.n_traj, workers, make_acc,
                                                body));
}

inline EnsembleStats run_baseline(const ProtocolConfig& c, int workers = 0) {
  require(c.method == Method::BaselineNoFeedback,
          "run_baseline: config protocol must be baseline-no-feedback");
  BuiltProtocol bp = build_protocol(c);
  Measurement meas(bp.x, c.k);
  int n_steps = c.n_steps();
  auto make_acc = [&] {
    detail::EnsembleAcc a;
    a.fid_sum.assign(n_steps + 1, 0.0);
    a.fid_sq.assign(n_steps + 1, 0.0);
    return a;
  };
  auto body = [&](int traj, detail::EnsembleAcc& acc) {
    TrajectoryResult r;
    r.fidelity.resize(n_steps + 1);
    NoiseStream noise{c.seed, static_cast<std::uint64_t>(traj)};
    Vec psi = bp.psi0;
    r.fidelity[0] = detail::pure_fidelity(bp.target, psi);
    try {
      for (int s = 0; s < n_steps; ++s) {
        double dw =
            noise.wiener_increment(static_cast<std::uint64_t>(s), c.dt);
        double dv = meas.sample_outcome(psi, c.dt, dw);
        psi = meas.povm_step(psi, c.dt, dv);
        r.fidelity[s + 1] = detail::pure_fidelity(bp.target, psi);
      }
    } catch (const TrajectoryAbort&) {
      r.aborted = true;
    }
    detail::accumulate(acc, r);
  };
  return detail::finalize(
      c, n_steps,
      run_chunked_ensemble<detail::EnsembleAcc>(c.n_traj, workers, make_acc,
                                                body));
}

struct AsloRun {
  std::vector<double> times;     // n_steps + 1 entries
  std::vector<double> fidelity;  // deterministic averaged-state fidelity
  FeedbackSchedule schedule;     // n_steps rows
  int quadrature_order = 0;
};

// Deterministic averaged-state propagation.  Coefficients are evaluated on
// the current averaged state and recorded, so the schedule can later drive
// stochastic replays.  A singular closed form records a zero pair; the
// averaged flow has no rescue concept.
inline AsloRun run_aslo(const ProtocolConfig& c, int quad_order = 0) {
  require(c.method == Method::Aslo, "run_aslo: config protocol must be aslo");
  BuiltProtocol bp = build_protocol(c);
  Measurement meas(bp.x, c.k);
  RotationFactory rot(bp.h_f);
  AveragedChannelStepper stepper(meas, rot, c.dt, quad_order);
  int n_steps = c.n_steps();

  AsloRun out;
  out.quadrature_order = stepper.order();
  out.times.reserve(n_steps + 1);
  out.fidelity.reserve(n_steps + 1);
  out.schedule.fingerprint = physics_fingerprint(c);

  Mat rho = pure_density(bp.psi0);
  out.times.push_back(0.0);
  out.fidelity.push_back(fidelity(rho, bp.target));
  for (int s = 0; s < n_steps; ++s) {
    Coefficients cf = compute_coefficients(rho, bp.h_f, bp.x, c.k, bp.target);
    double a1 = cf.a1, a2 = cf.a2;
    if (std::abs(cf.denominator) < 1e-12) a1 = a2 = 0.0;
    out.schedule.times.push_back(s * c.dt);
    out.schedule.a1.push_back(a1);
    out.schedule.a2.push_back(a2);
    rho = stepper.step(rho, a1, a2);
    out.times.push_back((s + 1) * c.dt);
    out.fidelity.push_back(fidelity(rho, bp.target));
  }
  return out;
}

// Stochastic trajectories driven by a precomputed coefficient schedule:
// theta_s = a1[s] dW + a2[s] dt after each measurement, no per-trajectory
// decisions.
inline EnsembleStats replay_schedule(const FeedbackSchedule& sched,
                                     const ProtocolConfig& c,
                                     int workers = 0) {
  validate_schedule(sched);
  require(sched.fingerprint == physics_fingerprint(c),
          "replay: schedule fingerprint does not match config");
  int n_steps = c.n_steps();
  require(static_cast<int>(sched.size()) == n_steps,
          "replay: schedule length does not match config step count");

  BuiltProtocol bp = build_protocol(c);
  Measurement meas(bp.x, c.k);
  RotationFactory rot(bp.h_f);
  auto make_acc = [&] {
    detail::EnsembleAcc a;
    a.fid_sum.assign(n_steps + 1, 0.0);
    a.fid_sq.assign(n_steps + 1, 0.0);
    return a;
  };
  auto body = [&](int traj, detail::EnsembleAcc& acc) {
    TrajectoryResult r;
    r.fidelity.resize(n_steps + 1);
    NoiseStream noise{c.seed, static_cast<std::uint64_t>(traj)};
    Vec psi = bp.psi0;
    r.fidelity[0] = detail::pure_fidelity(bp.target, psi);
    try {
      for (int s = 0; s < n_steps; ++s) {
        double dw =
            noise.wiener_increment(static_cast<std::uint64_t>(s), c.dt);
        double dv = meas.sample_outcome(psi, c.dt, dw);
        psi = meas.povm_step(psi, c.dt, dv);
        double theta = sched.a1[s] * dw + sched.a2[s] * c.dt;
        if (theta != 0.0) psi = rot(theta) * psi;
        r.fidelity[s + 1] = detail::pure_fidelity(bp.target, psi);
      }
    } catch (const TrajectoryAbort&) {
      r.aborted = true;
    }
    detail::accumulate(acc, r);
  };
  return detail::finalize(
      c, n_steps,
      run_chunked_ensemble<detail::EnsembleAcc>(c.n_traj, workers, make_acc,
                                                body));
}

}  // namespace paqs
