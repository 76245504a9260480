// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "paqs/core/linalg.hpp"
#include "paqs/core/types.hpp"

namespace paqs {

inline double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
  return out;
}

// Collective spin operators restricted to the fully symmetric ladder,
// dimension N+1, ordered by excitation number k = 0..N (k ones).
// Conventions: sum_i Z_i -> diag(N-2k); sum_i X_i = 2 Jx; sum_i Y_i = 2 Jy,
// with Jx, Jy built from the ladder elements <k-1|J+|k> = sqrt(k(N-k+1)).
struct DickeOperators {
  Mat sum_z;   // sum_i Z_i
  Mat sum_x;   // sum_i X_i
  Mat sum_y;   // sum_i Y_i
  Mat j_plus;  // raising operator toward lower excitation count
};

inline DickeOperators dicke_operators(int n) {
  require(n >= 1, "dicke_operators: N >= 1");
  Eigen::Index dim = n + 1;
  DickeOperators ops;
  ops.sum_z = Mat::Zero(dim, dim);
  for (int k = 0; k <= n; ++k) ops.sum_z(k, k) = double(n - 2 * k);
  ops.j_plus = Mat::Zero(dim, dim);
  for (int k = 1; k <= n; ++k)
    ops.j_plus(k - 1, k) = std::sqrt(double(k) * double(n - k + 1));
  Mat j_minus = ops.j_plus.adjoint();
  Mat jx = 0.5 * (ops.j_plus + j_minus);
  Mat jy = (ops.j_plus - j_minus) / Complex(0, 2);
  ops.sum_x = 2.0 * jx;
  ops.sum_y = 2.0 * jy;
  return ops;
}

// Materialized Dicke vectors in the full 2^N space (memory-guarded).
inline std::vector<Vec> build_dicke_basis(int n) {
  require(n >= 1, "build_dicke_basis: N >= 1");
  require(n <= 12, "build_dicke_basis: full-space vectors materialized only for N <= 12");
  Eigen::Index dim = Eigen::Index(1) << n;
  std::vector<Vec> basis;
  basis.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    Vec v = Vec::Zero(dim);
    double amp = 1.0 / std::sqrt(binomial(n, k));
    for (Eigen::Index b = 0; b < dim; ++b) {
      int ones = 0;
      for (int q = 0; q < n; ++q)
        if ((b >> q) & 1) ++ones;
      if (ones == k) v(b) = amp;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// <basis_i| op |basis_j> for a list of orthonormal vectors.  Used both to
// build reduced operators and to cross-check the ladder construction.
inline Mat project_operator(const Mat& op, const std::vector<Vec>& basis) {
  Eigen::Index d = Eigen::Index(basis.size());
  require(d > 0 && op.rows() == basis[0].size(),
          "project_operator: dimension mismatch");
  // Leak check: op must keep the span invariant, otherwise the projected
  // matrix silently discards dynamics.
  Mat span(op.rows(), d);
  for (Eigen::Index j = 0; j < d; ++j) span.col(j) = basis[j];
  Mat image = op * span;
  Mat coeff = span.adjoint() * image;
  Mat resid = image - span * coeff;
  require(resid.cwiseAbs().maxCoeff() < 1e-10,
          "project_operator: operator does not preserve the symmetric span");
  return coeff;
}

inline Vec embed_state(const Vec& sym, const std::vector<Vec>& basis) {
  require(sym.size() == Eigen::Index(basis.size()), "embed_state: size mismatch");
  Vec out = Vec::Zero(basis[0].size());
  for (Eigen::Index j = 0; j < sym.size(); ++j) out += sym(j) * basis[j];
  return out;
}

inline Vec lift_state(const Vec& full, const std::vector<Vec>& basis) {
  Vec out(Eigen::Index(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j)
    out(Eigen::Index(j)) = basis[j].dot(full);
  Vec back = embed_state(out, basis);
  require((full - back).norm() < 1e-8,
          "lift_state: input lies outside the symmetric span");
  return out;
}

}  // namespace paqs
