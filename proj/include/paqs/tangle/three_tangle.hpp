// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>

#include "paqs/core/linalg.hpp"

namespace paqs {

// Residual three-way entanglement of a pure 3-qubit state, computed from
// Cayley's 2x2x2 hyperdeterminant: tau = 4|d1 - 2 d2 + 4 d3|.  Amplitude
// index is (q1 q2 q3) with qubit 1 the most significant bit, matching
// kron_chain ordering.
inline double three_tangle(const Vec& psi) {
  require(psi.size() == 8, "three_tangle: 3-qubit state expected");
  const Vec& c = psi;
  Complex d1 = c(0) * c(0) * c(7) * c(7) + c(1) * c(1) * c(6) * c(6) +
               c(2) * c(2) * c(5) * c(5) + c(4) * c(4) * c(3) * c(3);
  Complex d2 = c(0) * c(7) * c(3) * c(4) + c(0) * c(7) * c(5) * c(2) +
               c(0) * c(7) * c(6) * c(1) + c(3) * c(4) * c(5) * c(2) +
               c(3) * c(4) * c(6) * c(1) + c(5) * c(2) * c(6) * c(1);
  Complex d3 = c(0) * c(6) * c(5) * c(3) + c(7) * c(1) * c(2) * c(4);
  double tau = 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
  return std::clamp(tau, 0.0, 1.0);
}

// One-versus-rest tangle tau(A|BC) = 4 det rho_A for qubit 1.
inline double one_vs_rest_tangle(const Vec& psi) {
  require(psi.size() == 8, "one_vs_rest_tangle: 3-qubit state expected");
  Complex r00 = 0, r01 = 0, r11 = 0;
  for (int j = 0; j < 4; ++j) {
    r00 += psi(j) * std::conj(psi(j));
    r11 += psi(4 + j) * std::conj(psi(4 + j));
    r01 += psi(j) * std::conj(psi(4 + j));
  }
  return 4.0 * (r00 * r11 - r01 * std::conj(r01)).real();
}

// Wootters concurrence of the two-qubit marginal obtained by tracing out
// one qubit (drop = 1, 2, or 3).  Used to cross-check the hyperdeterminant
// route through tau(ABC) = tau(A|BC) - C^2(AB) - C^2(AC).
inline double pair_concurrence(const Vec& psi, int drop) {
  require(psi.size() == 8, "pair_concurrence: 3-qubit state expected");
  require(drop >= 1 && drop <= 3, "pair_concurrence: drop qubit 1..3");
  // Reduced density matrix of the two kept qubits, kept order preserved.
  Mat rho = Mat::Zero(4, 4);
  auto split = [&](int b, int& kept, int& dropped) {
    int bits[3] = {(b >> 2) & 1, (b >> 1) & 1, b & 1};
    dropped = bits[drop - 1];
    kept = 0;
    for (int q = 0; q < 3; ++q)
      if (q != drop - 1) kept = (kept << 1) | bits[q];
  };
  for (int b = 0; b < 8; ++b)
    for (int b2 = 0; b2 < 8; ++b2) {
      int ka, da, kb, db;
      split(b, ka, da);
      split(b2, kb, db);
      if (da == db) rho(ka, kb) += psi(b) * std::conj(psi(b2));
    }
  Mat yy = kron_chain({pauli('y'), pauli('y')});
  Mat r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Mat> es(r);
  double lam[4];
  for (int i = 0; i < 4; ++i)
    lam[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  std::sort(lam, lam + 4, std::greater<double>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

inline double three_tangle_via_concurrences(const Vec& psi) {
  double cab = pair_concurrence(psi, 3);
  double cac = pair_concurrence(psi, 2);
  double tau = one_vs_rest_tangle(psi) - cab * cab - cac * cac;
  return std::clamp(tau, 0.0, 1.0);
}

}  // namespace paqs
