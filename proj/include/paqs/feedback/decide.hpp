// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "paqs/feedback/coefficients.hpp"
#include "paqs/feedback/rotation.hpp"

namespace paqs {

enum class FeedbackMode { Infinitesimal, LargeAngle, SkipCommuting };

struct FeedbackDecision {
  double theta = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  FeedbackMode mode = FeedbackMode::SkipCommuting;
  double second_derivative = 0.0;
  // True when the closed-form angle was discarded in favor of theta = 0
  // because it would have lowered fidelity; still reported as the
  // infinitesimal mode with a1 = a2 = 0.
  bool guarded_zero = false;
};

// How the per-step angle is chosen.
//   InfinitesimalWithRescue: closed-form angle, curvature check, global
//     search on failure, and the never-lose-fidelity floor.  Used by the
//     W and Dicke protocols.
//   GhzCandidates: direct comparison of the two analytic candidates
//     {0, pi/2}; ties and sub-threshold gains resolve to 0.
//   LiteralInfinitesimal: the closed-form angle applied verbatim with no
//     rescue and no floor.  This is the honest form of the locally optimal
//     controller when its assumptions are broken, and is what the
//     non-symmetric-observable comparison run uses.
enum class DecidePolicy { InfinitesimalWithRescue, GhzCandidates, LiteralInfinitesimal };

inline double commutator_norm(const Mat& h_f, const Mat& rho) {
  return commutator(h_f, rho).cwiseAbs().maxCoeff();
}

// Brute-force maximizer of <T|U(theta) rho U(theta)^dag|T> over one period,
// grid scan plus golden-section refinement.  Ties break toward the smallest
// angle magnitude; the scan domain is centered on zero so the returned angle
// is the minimal representative.
inline double global_angle_search(const Mat& rho, const RotationFactory& rot,
                                  const Vec& target, int grid_points = 256,
                                  double refine_tol = 1e-10) {
  double period = rot.period();
  double lo = -0.5 * period;
  double best_f = -1.0;
  double best_theta = 0.0;
  double h = period / grid_points;
  for (int i = 0; i < grid_points; ++i) {
    double th = lo + (i + 0.5) * h;
    Mat u = rot(th);
    double f = fidelity(apply_unitary(u, rho), target);
    if (f > best_f + 1e-12 ||
        (f > best_f - 1e-12 && std::abs(th) < std::abs(best_theta) - 1e-12)) {
      best_f = f;
      best_theta = th;
    }
  }
  // Golden-section on the bracketing cell pair.
  double a = best_theta - h, b = best_theta + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  auto eval = [&](double th) {
    return fidelity(apply_unitary(rot(th), rho), target);
  };
  double f1 = eval(c1), f2 = eval(c2);
  while (b - a > refine_tol) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = eval(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = eval(c1);
    }
  }
  double theta = 0.5 * (a + b);
  double f_refined = eval(theta);
  // Tie-break toward zero: if no rotation is within tolerance of the best
  // found angle, return exactly 0.
  if (eval(0.0) >= f_refined - 1e-12) return 0.0;
  return theta;
}

struct DecideInputs {
  const Mat& rho_pre;    // state before the measurement (coefficients)
  const Mat& rho_post;   // state after the measurement (candidates, rescue)
  const Mat& h_f;
  const Mat& x;
  double k;
  double dt;
  double dW;
  const Vec& target;
  const RotationFactory& rot;
};

inline FeedbackDecision decide_feedback(const DecideInputs& in,
                                        DecidePolicy policy,
                                        int grid_points = 256) {
  FeedbackDecision d;

  if (policy == DecidePolicy::GhzCandidates) {
    // Compare the two analytic candidates {0, pi/2} on the post-measurement
    // state.  For three qubits these are provably the only extrema, so the
    // comparison is exact; for larger systems a candidate that sits on
    // non-negative curvature hands over to the full grid search.
    Mat u = in.rot(pi / 2.0);
    Mat r90 = apply_unitary(u, in.rho_post);
    double f0 = fidelity(in.rho_post, in.target);
    double f90 = fidelity(r90, in.target);
    d.mode = FeedbackMode::LargeAngle;
    if (f90 > f0 + 1e-12) {
      d.theta = pi / 2.0;
      d.second_derivative = second_derivative_test(r90, in.h_f, in.target);
    } else {
      d.theta = 0.0;
      d.second_derivative =
          second_derivative_test(in.rho_post, in.h_f, in.target);
    }
    if (d.second_derivative >= 0.0) {
      double theta_g =
          global_angle_search(in.rho_post, in.rot, in.target, grid_points);
      Mat ug = in.rot(theta_g);
      d.theta = theta_g;
      d.second_derivative = second_derivative_test(
          apply_unitary(ug, in.rho_post), in.h_f, in.target);
    }
    return d;
  }

  if (commutator_norm(in.h_f, in.rho_post) < 1e-12) {
    d.mode = FeedbackMode::SkipCommuting;
    d.theta = 0.0;
    d.second_derivative =
        second_derivative_test(in.rho_post, in.h_f, in.target);
    return d;
  }

  Coefficients c =
      compute_coefficients(in.rho_pre, in.h_f, in.x, in.k, in.target);

  if (policy == DecidePolicy::LiteralInfinitesimal) {
    d.mode = FeedbackMode::Infinitesimal;
    if (std::abs(c.denominator) < 1e-12) {
      d.theta = 0.0;  // singular closed form; no rescue in this policy
    } else {
      d.a1 = c.a1;
      d.a2 = c.a2;
      d.theta = optimal_angle(c.a1, c.a2, in.dW, in.dt);
    }
    Mat u = in.rot(d.theta);
    d.second_derivative =
        second_derivative_test(apply_unitary(u, in.rho_post), in.h_f, in.target);
    return d;
  }

  // InfinitesimalWithRescue
  bool escalate = std::abs(c.denominator) < 1e-12;
  if (!escalate) {
    double theta = optimal_angle(c.a1, c.a2, in.dW, in.dt);
    Mat u = in.rot(theta);
    Mat rho_c = apply_unitary(u, in.rho_post);
    double s2 = second_derivative_test(rho_c, in.h_f, in.target);
    if (s2 >= 0.0) {
      escalate = true;  // closed form landed on a local minimum
    } else {
      d.second_derivative = s2;
      double f_c = fidelity(rho_c, in.target);
      double f_0 = fidelity(in.rho_post, in.target);
      if (f_c < f_0 - 1e-12) {
        // Fidelity floor: fall back to no rotation, still infinitesimal.
        d.mode = FeedbackMode::Infinitesimal;
        d.theta = 0.0;
        d.a1 = 0.0;
        d.a2 = 0.0;
        d.guarded_zero = true;
      } else {
        d.mode = FeedbackMode::Infinitesimal;
        d.theta = theta;
        d.a1 = c.a1;
        d.a2 = c.a2;
      }
      return d;
    }
  }

  double theta_g =
      global_angle_search(in.rho_post, in.rot, in.target, grid_points);
  d.mode = FeedbackMode::LargeAngle;
  d.theta = theta_g;
  Mat u = in.rot(theta_g);
  d.second_derivative =
      second_derivative_test(apply_unitary(u, in.rho_post), in.h_f, in.target);
  return d;
}

}  // namespace paqs
