// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "paqs/core/linalg.hpp"
#include "paqs/core/rng.hpp"
#include "paqs/feedback/rotation.hpp"
#include "paqs/protocols/ensemble.hpp"
#include "paqs/sme/averaged.hpp"
#include "paqs/sme/steppers.hpp"
#include "paqs/tangle/three_tangle.hpp"

namespace paqs {

// Chooses the control angle that maximizes the outcome-averaged three-tangle
// of the conditioned state one measurement segment ahead.  The outcome
// density is a Gaussian mixture over the eigenvalue branches of the measured
// observable, so the average is a per-branch Gauss-Hermite sum over
// normalized post-measurement states:
//
//   J(theta) = sum_b P_b(theta) sum_j (w_j / sqrt(pi))
//              tau( Omega(V_bj) U(theta) psi / norm )
//
// with V_bj = lambda_b dt + sqrt(dt / 4k) x_j.  The kernel factors depend
// only on the node record values, so they are tabulated once.
class TangleOptimizer {
 public:
  TangleOptimizer(const Measurement& meas, const RotationFactory& rot,
                  double dt, int quad_order = 16, int grid_points = 128)
      : meas_(meas), rot_(rot), dt_(dt), grid_points_(grid_points) {
    require(meas_.x().rows() == 8, "TangleOptimizer: 3-qubit observable");
    require(meas_.diagonal(),
            "TangleOptimizer: observable must be diagonal in the "
            "computational basis");
    require(grid_points_ >= 8, "TangleOptimizer: grid too coarse");
    GaussHermite rule = gauss_hermite_rule(quad_order);
    branches_ = meas_.branches();
    double spread = std::sqrt(dt_ / (4.0 * meas_.k()));
    const double inv_sqrt_pi = 1.0 / std::sqrt(pi);
    for (const auto& b : branches_) {
      for (int j = 0; j < rule.nodes.size(); ++j) {
        Node n;
        n.branch = static_cast<int>(&b - branches_.data());
        n.weight = rule.raw_weights(j) * inv_sqrt_pi;
        n.factors = meas_.weights(dt_, b.lambda * dt_ + spread * rule.nodes(j))
                        .cast<Complex>();
        nodes_.push_back(std::move(n));
      }
    }
  }

  double objective(const Vec& psi, double theta) const {
    return objective_rotated(theta == 0.0 ? psi : Vec(rot_(theta) * psi));
  }

  // Largest single-branch probability; a state at 1 is measurement-frozen.
  double max_branch_probability(const Vec& psi) const {
    double pmax = 0;
    for (const auto& b : branches_) {
      double p = 0;
      for (auto i : b.indices) p += std::norm(psi(i));
      pmax = std::max(pmax, p);
    }
    return pmax;
  }

  // Scans a uniform angle grid over [0, pi) and refines the best cell by
  // golden-section search to 1e-6.  Ties keep the smallest angle.  Candidate
  // rotations are applied in the generator eigenbasis so the scan costs one
  // basis change total instead of one unitary build per angle.
  double best_angle(const Vec& psi) const {
    const Mat& p = rot_.eigenvectors();
    const RealVec& gen = rot_.eigenvalues();
    Vec base = p.adjoint() * psi;
    Vec tmp(base.size());
    auto eval = [&](double th) {
      if (th == 0.0) return objective_rotated(psi);
      for (Eigen::Index i = 0; i < base.size(); ++i)
        tmp(i) = std::polar(1.0, -th * gen(i)) * base(i);
      return objective_rotated(p * tmp);
    };
    const double period = pi;
    double h = period / grid_points_;
    int best = 0;
    double best_val = eval(0.0);
    double j_zero = best_val;
    for (int i = 1; i < grid_points_; ++i) {
      double v = eval(i * h);
      if (v > best_val + 1e-12) {
        best_val = v;
        best = i;
      }
    }
    double lo = std::max(0.0, (best - 1) * h);
    double hi = std::min(period, (best + 1) * h);
    double theta = golden_max(eval, lo, hi, 1e-6);
    if (eval(theta) <= j_zero + 1e-12) return 0.0;
    return theta;
  }

 private:
  double objective_rotated(const Vec& psi_r) const {
    std::vector<double> pb(branches_.size());
    for (std::size_t b = 0; b < branches_.size(); ++b) {
      double p = 0;
      for (auto i : branches_[b].indices) p += std::norm(psi_r(i));
      pb[b] = p;
    }
    double j_total = 0;
    Vec cond(psi_r.size());
    for (const auto& n : nodes_) {
      if (pb[n.branch] < 1e-300) continue;
      cond = psi_r.cwiseProduct(n.factors);
      double nrm = cond.norm();
      if (nrm < 1e-150) continue;
      cond /= nrm;
      j_total += pb[n.branch] * n.weight * three_tangle(cond);
    }
    return j_total;
  }

  template <typename Eval>
  double golden_max(Eval&& eval, double lo, double hi, double tol) const {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > tol) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = eval(d);
      }
    }
    return 0.5 * (a + b);
  }

  struct Node {
    int branch;
    double weight;
    Vec factors;
  };
  const Measurement& meas_;
  const RotationFactory& rot_;
  double dt_;
  int grid_points_;
  std::vector<Measurement::Branch> branches_;
  std::vector<Node> nodes_;
};

struct TangleRunParams {
  Mat x;  // measured observable, diagonal in the computational basis
  double k = 1.0;
  double dt = 1e-3;
  double t_final = 8.0;
  int n_traj = 100;
  std::uint64_t seed = 1;
  int workers = 0;
  int quad_order = 16;
  int grid_points = 128;
  int n_snapshots = 20;
  int n_bins = 50;
};

struct TangleRunResult {
  std::vector<double> times;
  std::vector<double> mean_tangle, tangle_sem;
  std::vector<double> mean_fidelity, fidelity_sem;
  std::vector<double> mean_purity;
  std::vector<double> snapshot_times;
  // angle_histograms[s][b]: fraction of trajectories whose control angle at
  // snapshot s fell into bin b of [0, pi].
  std::vector<std::vector<double>> angle_histograms;
  long aborted = 0;
  int n_traj = 0;
};

// Trajectory ensemble with tangle-maximizing feedback toward GHZ(3).  The
// control rotation is applied before the measurement segment it was
// optimized for.  States stay pure, so the purity column is a diagnostic of
// the numerical update only.
inline TangleRunResult run_tangle(const TangleRunParams& p) {
  int n_steps = static_cast<int>(std::llround(p.t_final / p.dt));
  require(n_steps >= 1, "run_tangle: t_final shorter than one step");
  require(p.n_traj >= 1, "run_tangle: need at least one trajectory");

  Measurement meas(p.x, p.k);
  Mat gen = 0.5 * (collective_operator(3, 'x') -
                   Mat::Identity(8, 8));
  RotationFactory rot(gen);
  TangleOptimizer opt(meas, rot, p.dt, p.quad_order, p.grid_points);

  Vec psi0 = Vec::Constant(8, Complex(1.0 / std::sqrt(8.0), 0.0));
  Vec ghz = Vec::Zero(8);
  ghz(0) = ghz(7) = Complex(1.0 / std::sqrt(2.0), 0.0);

  std::vector<int> snap_steps(p.n_snapshots);
  std::vector<double> snap_times(p.n_snapshots);
  for (int s = 0; s < p.n_snapshots; ++s) {
    snap_times[s] = (s + 1) * p.t_final / p.n_snapshots;
    int idx = static_cast<int>(std::llround(snap_times[s] / p.dt)) - 1;
    snap_steps[s] = std::min(n_steps - 1, std::max(0, idx));
  }

  struct Acc {
    std::vector<double> tau_sum, tau_sq, fid_sum, fid_sq, pur_sum;
    std::vector<std::vector<long>> hist;
    long aborted = 0;
    void merge(const Acc& o) {
      for (std::size_t i = 0; i < tau_sum.size(); ++i) {
        tau_sum[i] += o.tau_sum[i];
        tau_sq[i] += o.tau_sq[i];
        fid_sum[i] += o.fid_sum[i];
        fid_sq[i] += o.fid_sq[i];
        pur_sum[i] += o.pur_sum[i];
      }
      for (std::size_t s = 0; s < hist.size(); ++s)
        for (std::size_t b = 0; b < hist[s].size(); ++b)
          hist[s][b] += o.hist[s][b];
      aborted += o.aborted;
    }
  };
  auto make_acc = [&]() {
    Acc a;
    a.tau_sum.assign(n_steps + 1, 0.0);
    a.tau_sq.assign(n_steps + 1, 0.0);
    a.fid_sum.assign(n_steps + 1, 0.0);
    a.fid_sq.assign(n_steps + 1, 0.0);
    a.pur_sum.assign(n_steps + 1, 0.0);
    a.hist.assign(p.n_snapshots, std::vector<long>(p.n_bins, 0));
    return a;
  };

  auto body = [&](int traj, Acc& acc) {
    NoiseStream noise{p.seed, static_cast<std::uint64_t>(traj)};
    Vec psi = psi0;
    std::vector<double> tau(n_steps + 1), fid(n_steps + 1);
    std::vector<int> snap_bin(p.n_snapshots, -1);
    tau[0] = three_tangle(psi);
    fid[0] = std::norm(ghz.dot(psi));
    try {
      for (int s = 0; s < n_steps; ++s) {
        double theta = opt.best_angle(psi);
        if (theta == 0.0 &&
            1.0 - opt.max_branch_probability(psi) < 1e-14) {
          // The state lies in one eigenvalue branch and the controller holds
          // it there, so every remaining step reproduces it exactly.
          for (int r = s; r < n_steps; ++r) {
            tau[r + 1] = tau[s];
            fid[r + 1] = fid[s];
          }
          for (int q = 0; q < p.n_snapshots; ++q)
            if (snap_steps[q] >= s) snap_bin[q] = 0;
          break;
        }
        if (theta != 0.0) psi = rot(theta) * psi;
        double dw = noise.wiener_increment(static_cast<std::uint64_t>(s),
                                           p.dt);
        double dv = meas.sample_outcome(psi, p.dt, dw);
        psi = meas.povm_step(psi, p.dt, dv);
        tau[s + 1] = three_tangle(psi);
        fid[s + 1] = std::norm(ghz.dot(psi));
        for (int q = 0; q < p.n_snapshots; ++q)
          if (snap_steps[q] == s) {
            int b = static_cast<int>(theta / (pi / p.n_bins));
            snap_bin[q] = std::min(p.n_bins - 1, std::max(0, b));
          }
      }
    } catch (const TrajectoryAbort&) {
      ++acc.aborted;
      return;
    }
    for (int i = 0; i <= n_steps; ++i) {
      acc.tau_sum[i] += tau[i];
      acc.tau_sq[i] += tau[i] * tau[i];
      acc.fid_sum[i] += fid[i];
      acc.fid_sq[i] += fid[i] * fid[i];
      acc.pur_sum[i] += 1.0;
    }
    for (int q = 0; q < p.n_snapshots; ++q)
      if (snap_bin[q] >= 0) ++acc.hist[q][snap_bin[q]];
  };

  Acc total = run_chunked_ensemble<Acc>(p.n_traj, p.workers, make_acc, body);

  TangleRunResult out;
  out.aborted = total.aborted;
  out.n_traj = p.n_traj;
  long n_ok = p.n_traj - total.aborted;
  require(n_ok >= 1, "run_tangle: every trajectory aborted");
  double n = static_cast<double>(n_ok);
  out.times.resize(n_steps + 1);
  out.mean_tangle.resize(n_steps + 1);
  out.tangle_sem.resize(n_steps + 1);
  out.mean_fidelity.resize(n_steps + 1);
  out.fidelity_sem.resize(n_steps + 1);
  out.mean_purity.assign(n_steps + 1, 1.0);
  auto sem = [n](double sum, double sq) {
    if (n < 2) return 0.0;
    double var = (sq - sum * sum / n) / (n - 1.0);
    return std::sqrt(std::max(0.0, var) / n);
  };
  for (int i = 0; i <= n_steps; ++i) {
    out.times[i] = i * p.dt;
    out.mean_tangle[i] = total.tau_sum[i] / n;
    out.tangle_sem[i] = sem(total.tau_sum[i], total.tau_sq[i]);
    out.mean_fidelity[i] = total.fid_sum[i] / n;
    out.fidelity_sem[i] = sem(total.fid_sum[i], total.fid_sq[i]);
  }
  out.snapshot_times = snap_times;
  out.angle_histograms.assign(p.n_snapshots,
                              std::vector<double>(p.n_bins, 0.0));
  for (int s = 0; s < p.n_snapshots; ++s)
    for (int b = 0; b < p.n_bins; ++b)
      out.angle_histograms[s][b] =
          static_cast<double>(total.hist[s][b]) / n;
  return out;
}

}  // namespace paqs
