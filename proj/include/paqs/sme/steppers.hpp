// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "paqs/core/linalg.hpp"
#include "paqs/core/rng.hpp"

namespace paqs {

struct StepParams {
  double dt;  // microseconds
  double k;   // inverse microseconds

  void validate() const {
    require(dt > 0 && k > 0, "StepParams: dt and k must be positive");
    require(k * dt <= 0.01 + 1e-15,
            "StepParams: k*dt exceeds 0.01 (weak-measurement step bound)");
  }
};

struct TrajectoryAbort : PaqsError {
  using PaqsError::PaqsError;
};

// Measurement readout increment dV = <X> dt + dW / sqrt(8k).
inline double readout(const Mat& rho, const Mat& x, double k, double dt,
                      double dW) {
  return expectation(x, rho) * dt + dW / std::sqrt(8.0 * k);
}

inline double readout_pure(const Vec& psi, const RealVec& lam, double k,
                           double dt, double dW) {
  double xm = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    xm += lam(i) * std::norm(psi(i));
  return xm * dt + dW / std::sqrt(8.0 * k);
}

// Euler update of the conditioned master equation
//   drho = 2k D[X]rho dt + sqrt(2k) H[X]rho dW,
// followed by hermitization and renormalization.
inline Mat sme_step(const Mat& rho, const Mat& x, double k, double dt,
                    double dW, const Mat* h_s = nullptr) {
  double s = std::sqrt(2.0 * k);
  Mat y = s * x;
  Mat out = rho + dissipator(y, rho) * dt + innovation(y, rho) * dW;
  if (h_s != nullptr) out -= Complex(0, 1) * commutator(*h_s, rho) * dt;
  hermitize(out);
  renormalize(out);
  return out;
}

// A Hermitian observable prepared for repeated measurement updates: the
// eigenbasis is factored once so both weight application and branch-wise
// outcome statistics are cheap per step.
class Measurement {
 public:
  Measurement(Mat x, double k) : x_(std::move(x)), k_(k) {
    require(hermiticity_defect(x_) < 1e-12, "Measurement: X must be Hermitian");
    require(k_ > 0, "Measurement: k must be positive");
    diagonal_ = true;
    for (Eigen::Index r = 0; r < x_.rows() && diagonal_; ++r)
      for (Eigen::Index c = 0; c < x_.cols(); ++c)
        if (r != c && std::abs(x_(r, c)) > 0) {
          diagonal_ = false;
          break;
        }
    if (diagonal_) {
      lam_ = x_.diagonal().real();
      vecs_ = Mat::Identity(x_.rows(), x_.cols());
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(x_);
      lam_ = es.eigenvalues();
      vecs_ = es.eigenvectors();
    }
  }

  const Mat& x() const { return x_; }
  double k() const { return k_; }
  const RealVec& eigenvalues() const { return lam_; }
  const Mat& eigenvectors() const { return vecs_; }
  bool diagonal() const { return diagonal_; }

  // Distinct eigenvalues with their eigenspace index sets, for Gaussian
  // mixture sampling and outcome quadrature.
  struct Branch {
    double lambda;
    std::vector<Eigen::Index> indices;
  };
  std::vector<Branch> branches() const {
    std::vector<Branch> out;
    for (Eigen::Index i = 0; i < lam_.size(); ++i) {
      bool found = false;
      for (auto& b : out)
        if (std::abs(b.lambda - lam_(i)) < 1e-9) {
          b.indices.push_back(i);
          found = true;
          break;
        }
      if (!found) out.push_back({lam_(i), {i}});
    }
    return out;
  }

  // Eigenbasis weights of the measurement kernel for record increment dV.
  // A common exponent shift is applied; it cancels under normalization and
  // keeps the weights representable for improbable records.
  RealVec weights(double dt, double dV) const {
    double key = dV / dt;
    RealVec expo(lam_.size());
    for (Eigen::Index i = 0; i < lam_.size(); ++i) {
      double d = key - lam_(i);
      expo(i) = -2.0 * k_ * dt * d * d;
    }
    double mx = expo.maxCoeff();
    require(mx > -690.0, "povm_step: outcome of essentially zero likelihood");
    return (expo.array() - mx).exp();
  }

  Mat povm_step(const Mat& rho, double dt, double dV) const {
    RealVec w = weights(dt, dV);
    Mat out;
    if (diagonal_) {
      out = rho;
      for (Eigen::Index r = 0; r < out.rows(); ++r)
        for (Eigen::Index c = 0; c < out.cols(); ++c)
          out(r, c) *= w(r) * w(c);
    } else {
      Mat in_basis = vecs_.adjoint() * rho * vecs_;
      for (Eigen::Index r = 0; r < in_basis.rows(); ++r)
        for (Eigen::Index c = 0; c < in_basis.cols(); ++c)
          in_basis(r, c) *= w(r) * w(c);
      out = vecs_ * in_basis * vecs_.adjoint();
    }
    hermitize(out);
    renormalize(out);
    return out;
  }

  Vec povm_step(const Vec& psi, double dt, double dV) const {
    RealVec w = weights(dt, dV);
    Vec out;
    if (diagonal_) {
      out = psi.cwiseProduct(w.cast<Complex>());
    } else {
      Vec in_basis = vecs_.adjoint() * psi;
      in_basis = in_basis.cwiseProduct(w.cast<Complex>());
      out = vecs_ * in_basis;
    }
    renormalize(out);
    return out;
  }

  // Record sample dV = <X> dt + dW / sqrt(8k) with dW ~ N(0, dt): exact for
  // the Gaussian-mixture outcome law to the same order as the Euler SME.
  double sample_outcome(const Mat& rho, double dt, double dW) const {
    return readout(rho, x_, k_, dt, dW);
  }
  double sample_outcome(const Vec& psi, double dt, double dW) const {
    double xm = 0.0;
    if (diagonal_) {
      for (Eigen::Index i = 0; i < psi.size(); ++i)
        xm += lam_(i) * std::norm(psi(i));
    } else {
      xm = (psi.adjoint() * x_ * psi)(0, 0).real();
    }
    return xm * dt + dW / std::sqrt(8.0 * k_);
  }

 private:
  Mat x_;
  double k_;
  bool diagonal_;
  RealVec lam_;
  Mat vecs_;
};

// Deterministic averaged-evolution step: the controlled master equation with
// every dW term dropped.  All four increments are traceless.
//
// The A1 cross term uses the mean-subtracted H[Y]rho, pairing with the
// coefficient convention of compute_coefficients.  Writing the cross term
// with the bare Y rho + rho Y instead is the same increment once the drift
// coefficient is shifted by -2 A1 <Y>; the two forms are algebraically
// identical, not approximations of each other.
inline Mat aslo_step(const Mat& rho_bar, const Mat& x, double k,
                     const Mat& h_f, double a1, double a2, double dt) {
  double s = std::sqrt(2.0 * k);
  Mat y = s * x;
  Mat out = rho_bar + dissipator(y, rho_bar) * dt -
            Complex(0, 1) * a2 * commutator(h_f, rho_bar) * dt +
            a1 * a1 * dissipator(h_f, rho_bar) * dt -
            Complex(0, 1) * a1 * commutator(h_f, innovation(y, rho_bar)) * dt;
  hermitize(out);
  renormalize(out);
  return out;
}

// Full controlled stochastic step (Ito form, infinitesimal feedback folded
// into the generator).  Agrees with the measure-then-rotate composition to
// O(dt^{3/2}); the dW x dW Ito cross term contracts the rotation with the
// mean-subtracted measurement update, which is why H[Y] and not the bare
// anticommutator appears in the A1 dt term.
inline Mat controlled_sme_step(const Mat& rho, const Mat& x, double k,
                               const Mat& h_f, double a1, double a2, double dt,
                               double dW) {
  double s = std::sqrt(2.0 * k);
  Mat y = s * x;
  double theta = a1 * dW + a2 * dt;
  Mat out = rho + dissipator(y, rho) * dt + innovation(y, rho) * dW -
            Complex(0, 1) * theta * commutator(h_f, rho) +
            a1 * a1 * dissipator(h_f, rho) * dt -
            Complex(0, 1) * a1 * commutator(h_f, innovation(y, rho)) * dt;
  hermitize(out);
  renormalize(out);
  return out;
}

// Positivity monitor.  The cheap per-step check looks at the diagonal; the
// full spectral check is meant for periodic use.
inline void check_state_quick(const Mat& rho) {
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    if (rho(i, i).real() < -1e-8)
      throw TrajectoryAbort("state positivity violated (diagonal)");
}

inline void check_state_full(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw TrajectoryAbort("state positivity violated (spectrum)");
}

}  // namespace paqs
