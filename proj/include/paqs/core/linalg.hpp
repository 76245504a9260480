// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "paqs/core/types.hpp"

namespace paqs {

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

// Lindblad dissipator D[X]rho = X rho X^dag - (X^dag X rho + rho X^dag X)/2.
inline Mat dissipator(const Mat& x, const Mat& rho) {
  require(x.rows() == rho.rows(), "dissipator: dimension mismatch");
  Mat xdx = x.adjoint() * x;
  return x * rho * x.adjoint() - 0.5 * (xdx * rho + rho * xdx);
}

// Measurement innovation H[X]rho = X rho + rho X^dag - <X + X^dag> rho.
inline Mat innovation(const Mat& x, const Mat& rho) {
  require(x.rows() == rho.rows(), "innovation: dimension mismatch");
  Mat t = x * rho + rho * x.adjoint();
  return t - t.trace() * rho;
}

inline double expectation(const Mat& x, const Mat& rho) {
  return (x * rho).trace().real();
}

inline double fidelity(const Mat& rho, const Vec& target) {
  require(rho.rows() == target.size(), "fidelity: dimension mismatch");
  double f = (target.adjoint() * rho * target)(0, 0).real();
  if (f < 0.0 && f > -1e-10) f = 0.0;
  if (f > 1.0 && f < 1.0 + 1e-10) f = 1.0;
  return f;
}

inline double fidelity(const Vec& psi, const Vec& target) {
  Complex a = target.adjoint() * psi;
  double f = std::norm(a);
  return std::min(f, 1.0);
}

inline Mat pure_density(const Vec& psi) { return psi * psi.adjoint(); }

inline Mat apply_unitary(const Mat& u, const Mat& rho) {
  return u * rho * u.adjoint();
}

// Restore exact Hermiticity after an Euler step; drift is rounding-level but
// compounds over 10^3..10^4 steps if ignored.
inline void hermitize(Mat& rho) { rho = 0.5 * (rho + rho.adjoint()).eval(); }

inline void renormalize(Mat& rho) {
  double tr = rho.trace().real();
  require(tr > 1e-300, "renormalize: vanishing trace");
  rho /= tr;
}

inline void renormalize(Vec& psi) {
  double n = psi.norm();
  require(n > 1e-300, "renormalize: vanishing norm");
  psi /= n;
}

inline double hermiticity_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Mat kron_chain(const std::vector<Mat>& factors) {
  require(!factors.empty(), "kron_chain: empty factor list");
  Mat out = factors.front();
  require(out.rows() == out.cols(), "kron_chain: non-square factor");
  for (size_t i = 1; i < factors.size(); ++i) {
    const Mat& f = factors[i];
    require(f.rows() == f.cols(), "kron_chain: non-square factor");
    Mat next(out.rows() * f.rows(), out.cols() * f.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(r * f.rows(), c * f.cols(), f.rows(), f.cols()) =
            out(r, c) * f;
    out = std::move(next);
  }
  return out;
}

inline Mat pauli(char axis) {
  Mat m(2, 2);
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case 'i': m << 1, 0, 0, 1; break;
    default: throw PaqsError("pauli: unknown axis");
  }
  return m;
}

// Sum of single-qubit Paulis sigma_axis over all N qubits, full 2^N basis.
// Qubit 1 is the leftmost tensor factor (most significant bit).
inline Mat collective_operator(int n, char axis) {
  require(n >= 1, "collective_operator: N >= 1");
  Eigen::Index dim = Eigen::Index(1) << n;
  Mat out = Mat::Zero(dim, dim);
  for (int q = 0; q < n; ++q) {
    std::vector<Mat> fs(n, pauli('i'));
    fs[q] = pauli(axis);
    out += kron_chain(fs);
  }
  return out;
}

// Sum over pairs Z_i Z_j, i<j.  Diagonal: bitstring with m ones maps to
// C(N-m,2) + C(m,2) - m(N-m).
inline Mat two_body_zz_sum(int n) {
  require(n >= 2, "two_body_zz_sum: N >= 2");
  Eigen::Index dim = Eigen::Index(1) << n;
  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    int ones = 0;
    for (int q = 0; q < n; ++q)
      if ((b >> q) & 1) ++ones;
    int m = ones;
    double val = 0.5 * (n - m) * (n - m - 1) + 0.5 * m * (m - 1) -
                 double(m) * (n - m);
    out(b, b) = val;
  }
  return out;
}

inline bool is_unitary(const Mat& u, double tol = 1e-10) {
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() < tol;
}

}  // namespace paqs
