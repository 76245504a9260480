// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "paqs/core/linalg.hpp"

namespace paqs {

// Unitary family U(theta) = exp(-i theta H) from one eigendecomposition of
// the Hermitian generator.
class RotationFactory {
 public:
  explicit RotationFactory(const Mat& h) {
    require(hermiticity_defect(h) < 1e-12,
            "RotationFactory: generator must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  }

  Mat operator()(double theta) const {
    Vec phases(evals_.size());
    for (Eigen::Index i = 0; i < evals_.size(); ++i)
      phases(i) = std::polar(1.0, -theta * evals_(i));
    return evecs_ * phases.asDiagonal() * evecs_.adjoint();
  }

  // Smallest P in {pi, 2pi} such that U(P) acts as the identity on every
  // density matrix.  U(P) is a global phase exactly when all spectral gaps
  // of the generator are multiples of 2*pi/P; checking gaps is
  // state-independent, so the angle-search domain can never be halved by an
  // atypical probe state.
  double period() const {
    bool pi_ok = true, two_pi_ok = true;
    for (Eigen::Index i = 0; i < evals_.size(); ++i)
      for (Eigen::Index j = i + 1; j < evals_.size(); ++j) {
        double gap = evals_(j) - evals_(i);
        if (std::abs(gap - 2.0 * std::round(gap / 2.0)) > 1e-9) pi_ok = false;
        if (std::abs(gap - std::round(gap)) > 1e-9) two_pi_ok = false;
      }
    if (pi_ok) return pi;
    (void)two_pi_ok;  // irrational gaps still search one 2*pi window
    return 2.0 * pi;
  }

  const RealVec& eigenvalues() const { return evals_; }
  const Mat& eigenvectors() const { return evecs_; }

 private:
  RealVec evals_;
  Mat evecs_;
};

}  // namespace paqs
