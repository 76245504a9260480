// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "paqs/feedback/rotation.hpp"
#include "paqs/sme/steppers.hpp"

namespace paqs {

// Gauss-Hermite rule prepared for integrals of the form int dx f(x) where f
// already carries its own Gaussian envelopes: the stored weights are
// w_j exp(x_j^2), normalized to a unit maximum.  Nodes and raw weights come
// from the Golub-Welsch tridiagonal eigenproblem.
struct GaussHermite {
  RealVec nodes;
  RealVec weights;
  RealVec raw_weights;  // plain quadrature weights, sum sqrt(pi)
};

inline GaussHermite gauss_hermite_rule(int q) {
  require(q >= 2, "gauss_hermite_rule: order >= 2");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(q, q);
  for (int i = 1; i < q; ++i) {
    double b = std::sqrt(0.5 * i);
    j(i - 1, i) = b;
    j(i, i - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussHermite rule;
  rule.nodes = es.eigenvalues();
  RealVec logw(q);
  rule.raw_weights.resize(q);
  for (int i = 0; i < q; ++i) {
    double v0 = es.eigenvectors()(0, i);
    double log_raw = 0.5 * std::log(pi) + 2.0 * std::log(std::abs(v0));
    rule.raw_weights(i) = std::exp(log_raw);
    logw(i) = log_raw + rule.nodes(i) * rule.nodes(i);
  }
  double mx = logw.maxCoeff();
  rule.weights = (logw.array() - mx).exp();
  return rule;
}

// Smallest supported order whose node span sqrt(2q+1) covers the outermost
// measurement-kernel center plus a safety margin of Gaussian widths.
inline int recommended_quadrature_order(double max_center, double margin = 5.5) {
  for (int q : {32, 48, 64, 96, 128})
    if (std::sqrt(2.0 * q + 1.0) >= max_center + margin) return q;
  throw PaqsError(
      "recommended_quadrature_order: kernel centers exceed supported span; "
      "reduce k*dt or the observable's spectral radius");
}

// Deterministic propagation of the record-averaged state by exact
// integration of one measure-then-rotate cycle over all outcomes:
//
//   rho' = int dV  U(theta(dV)) Omega_dV rho Omega_dV U(theta(dV))^dag,
//   theta(dV) = a1 dW(dV) + a2 dt,  dW = sqrt(8k)(dV - <X>dt).
//
// In the scaled outcome variable x = dV sqrt(4k/dt) every kernel factor is
// exp(-(x - c_i)^2/2) with c_i = 2 sqrt(k dt) lambda_i, so all intermediate
// products are bounded by one and the quadrature stays well-conditioned for
// any spectral radius.  Integrating the expanded generator instead (Euler on
// aslo_step) is unstable for wide spectra: the expansion's feedback term
// amplifies remote spectral corners that the bounded kernel suppresses.
class AveragedChannelStepper {
 public:
  AveragedChannelStepper(const Measurement& meas, const RotationFactory& rot,
                         double dt, int order = 0)
      : meas_(&meas), rot_(&rot), dt_(dt) {
    require(dt > 0.0, "AveragedChannelStepper: dt must be positive");
    const RealVec& lam = meas.eigenvalues();
    centers_ = 2.0 * std::sqrt(meas.k() * dt) * lam;
    double span = centers_.cwiseAbs().maxCoeff();
    q_ = (order > 0) ? order : recommended_quadrature_order(span);
    rule_ = gauss_hermite_rule(q_);
  }

  int order() const { return q_; }

  // Accumulates in the rotation eigenbasis, where each feedback unitary is a
  // diagonal phase, so the per-node cost is two dense products.
  Mat step(const Mat& rho, double a1, double a2) const {
    double k = meas_->k();
    double xm = expectation(meas_->x(), rho);
    bool diag = meas_->diagonal();
    Mat rho_e = diag ? rho : Mat(meas_->eigenvectors().adjoint() * rho *
                                 meas_->eigenvectors());
    Eigen::Index d = rho.rows();
    const Mat& p = rot_->eigenvectors();
    const RealVec& gen = rot_->eigenvalues();
    Mat acc = Mat::Zero(d, d);
    Mat m(d, d), g(d, d);
    RealVec fac(d);
    Vec phase(d);
    double dv_scale = std::sqrt(dt_ / (4.0 * k));
    for (int jn = 0; jn < q_; ++jn) {
      double xj = rule_.nodes(jn);
      for (Eigen::Index i = 0; i < d; ++i) {
        double u = xj - centers_(i);
        fac(i) = std::exp(-0.5 * u * u);
      }
      m = rho_e;
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) m(r, c) *= fac(r) * fac(c);
      if (!diag)
        m = meas_->eigenvectors() * m * meas_->eigenvectors().adjoint();
      double dW = std::sqrt(8.0 * k) * (dv_scale * xj - xm * dt_);
      double theta = a1 * dW + a2 * dt_;
      g.noalias() = p.adjoint() * m * p;
      double wj = rule_.weights(jn);
      for (Eigen::Index i = 0; i < d; ++i)
        phase(i) = std::polar(1.0, -theta * gen(i));
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r)
          acc(r, c) += wj * phase(r) * g(r, c) * std::conj(phase(c));
    }
    acc = p * acc * p.adjoint();
    hermitize(acc);
    renormalize(acc);
    return acc;
  }

 private:
  const Measurement* meas_;
  const RotationFactory* rot_;
  double dt_;
  int q_;
  RealVec centers_;
  GaussHermite rule_;
};

}  // namespace paqs
