// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "paqs/core/linalg.hpp"

namespace paqs {

// Closed-form coefficients of the locally optimal rotation angle
// theta* = A1 dW + A2 dt, evaluated on the pre-measurement state.
//
// With Y = sqrt(2k) X, target |T>, and the mean-subtracted measurement
// operator H[Y]rho = Y rho + rho Y - 2<Y>rho:
//   A1 = -i <T|[H, H[Y]rho]|T> / <T|[H, [H, rho]]|T>
//   A2 = -<T|[H, i D[Y]rho + A1 [H, H[Y]rho] + i A1^2 D[H]rho]|T>
//        / <T|[H, [H, rho]]|T>
// A2 here multiplies dt alongside the Wiener increment dW; the same angle
// written against the raw record dV instead shifts the drift by -2 A1 <Y>
// (see optimal_angle_from_dV).  The derivation assumes the input is already
// extremal (the previous step ended at a fidelity extremum);
// extremality_residual reports how far the input is from that assumption.
struct Coefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double mean_y = 0.0;               // <Y> on the input state
  double denominator = 0.0;          // <T|[H,[H,rho]]|T>
  double extremality_residual = 0.0; // |<T|[H,rho]|T>|
  double imag_residue = 0.0;         // largest imaginary part discarded
};

inline Complex sandwich(const Vec& t, const Mat& m) {
  return (t.adjoint() * m * t)(0, 0);
}

inline Coefficients compute_coefficients(const Mat& rho, const Mat& h_f,
                                         const Mat& x, double k,
                                         const Vec& target) {
  double s = std::sqrt(2.0 * k);
  Mat y = s * x;
  Coefficients out;
  out.mean_y = expectation(y, rho);
  out.extremality_residual = std::abs(sandwich(target, commutator(h_f, rho)));
  Complex dn = sandwich(target, commutator(h_f, commutator(h_f, rho)));
  out.denominator = dn.real();
  out.imag_residue = std::abs(dn.imag());
  if (std::abs(out.denominator) < 1e-12) return out;  // caller escalates

  Mat hy = innovation(y, rho);
  Complex a1c = Complex(0, -1) * sandwich(target, commutator(h_f, hy)) / dn;
  out.a1 = a1c.real();
  out.imag_residue = std::max(out.imag_residue, std::abs(a1c.imag()));

  Mat inner = Complex(0, 1) * dissipator(y, rho) +
              out.a1 * commutator(h_f, hy) +
              Complex(0, 1) * out.a1 * out.a1 * dissipator(h_f, rho);
  Complex a2c = -sandwich(target, commutator(h_f, inner)) / dn;
  out.a2 = a2c.real();
  out.imag_residue = std::max(out.imag_residue, std::abs(a2c.imag()));
  return out;
}

inline double optimal_angle(double a1, double a2, double dW, double dt) {
  return a1 * dW + a2 * dt;
}

// Same angle written against the measurement record instead of the Wiener
// increment: theta* = sqrt(8k) A1 dV + (A2 - 2 A1 <Y>) dt, with <Y> on the
// pre-measurement state.
inline double optimal_angle_from_dV(double a1, double a2, double dV, double dt,
                                    double k, double expectation_y) {
  return std::sqrt(8.0 * k) * a1 * dV + (a2 - 2.0 * a1 * expectation_y) * dt;
}

// Signed curvature of the post-step fidelity at the candidate state:
// -<T|[H,[H,rho_c]]|T>.  Negative means the candidate sits at a local
// maximum.
inline double second_derivative_test(const Mat& rho_c, const Mat& h_f,
                                     const Vec& target) {
  return -sandwich(target, commutator(h_f, commutator(h_f, rho_c))).real();
}

}  // namespace paqs
