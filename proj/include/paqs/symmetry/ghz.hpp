// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "paqs/symmetry/dicke.hpp"

namespace paqs {

inline Eigen::Index ghz_sym_dim(int n) {
  return (n % 2 == 0) ? n / 2 + 1 : (n + 1) / 2;
}

// Spin-flip-even combinations of Dicke states, expressed in Dicke
// coordinates (rows = excitation number 0..N, columns = m).  Column 0 is
// the GHZ state.  For even N the lone half-filled Dicke state closes the
// basis.
inline Mat ghz_sym_basis_in_dicke(int n) {
  require(n >= 2, "ghz_sym_basis: N >= 2");
  Eigen::Index d = ghz_sym_dim(n);
  Mat cols = Mat::Zero(n + 1, d);
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < (n + 1) / 2; ++m) {
    cols(m, m) = inv_sqrt2;
    cols(n - m, m) = inv_sqrt2;
  }
  if (n % 2 == 0) cols(n / 2, d - 1) = 1.0;
  return cols;
}

inline std::vector<Vec> build_ghz_sym_basis(int n) {
  auto dicke = build_dicke_basis(n);
  Mat cols = ghz_sym_basis_in_dicke(n);
  std::vector<Vec> out;
  out.reserve(cols.cols());
  for (Eigen::Index m = 0; m < cols.cols(); ++m) {
    Vec v = Vec::Zero(dicke[0].size());
    for (int k = 0; k <= n; ++k) v += cols(k, m) * dicke[k];
    out.push_back(std::move(v));
  }
  return out;
}

// Pairwise-ZZ observable restricted to the spin-flip-even subspace:
// diagonal with entries C(N,2) - 2m(N-m).
inline Mat ghz_sym_observable(int n) {
  Eigen::Index d = ghz_sym_dim(n);
  Mat x = Mat::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m)
    x(m, m) = 0.5 * n * (n - 1) - 2.0 * double(m) * double(n - m);
  return x;
}

// sum_i X_i restricted to the spin-flip-even subspace.  The collective X
// commutes with the flip operator, so this is an exact restriction rather
// than a truncation.
inline Mat ghz_sym_collective_x(int n) {
  auto ops = dicke_operators(n);
  Mat cols = ghz_sym_basis_in_dicke(n);
  return (cols.adjoint() * ops.sum_x * cols).eval();
}

// Uniform superposition |+>^N expressed in the spin-flip-even basis.
inline Vec ghz_sym_plus_state(int n) {
  Eigen::Index d = ghz_sym_dim(n);
  Vec psi(d);
  double pow2 = std::pow(2.0, n);
  for (Eigen::Index m = 0; m < d; ++m) {
    double c = binomial(n, int(m));
    bool lone = (n % 2 == 0) && (m == d - 1);
    psi(m) = std::sqrt((lone ? c : 2.0 * c) / pow2);
  }
  psi.normalize();
  return psi;
}

// N=3 effective single-qubit picture of the flip-even dynamics: the
// observable becomes I + 2 Z-tilde at four times the measurement strength,
// the rotation axis is (sqrt3/2, 0, -1/2), and angles double.
struct EffectiveQubit {
  double axis[3] = {std::sqrt(3.0) / 2.0, 0.0, -0.5};
  double k_eff;
  double bloch[3];
};

inline EffectiveQubit effective_qubit_map(const Vec& sym2, double k) {
  require(sym2.size() == 2, "effective_qubit_map: dim-2 state expected");
  EffectiveQubit eq;
  eq.k_eff = 4.0 * k;
  Mat rho = pure_density(sym2);
  eq.bloch[0] = 2.0 * rho(0, 1).real();
  eq.bloch[1] = -2.0 * rho(0, 1).imag();
  eq.bloch[2] = (rho(0, 0) - rho(1, 1)).real();
  return eq;
}

}  // namespace paqs
