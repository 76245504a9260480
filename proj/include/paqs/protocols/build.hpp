// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "paqs/core/linalg.hpp"
#include "paqs/feedback/decide.hpp"
#include "paqs/feedback/rotation.hpp"
#include "paqs/protocols/config.hpp"
#include "paqs/symmetry/dicke.hpp"
#include "paqs/symmetry/ghz.hpp"

namespace paqs {

// Everything a runner needs: observable, control generator, target and
// prepared initial state in the resolved representation, plus the angle
// policy.  The initial state is the reference product state taken through
// the globally fidelity-maximizing pre-rotation.
struct BuiltProtocol {
  Basis basis = Basis::Dicke;
  int dim = 0;
  Mat x;
  Mat h_f;
  Vec target;
  Vec psi0;
  DecidePolicy policy = DecidePolicy::InfinitesimalWithRescue;
  double pre_rotation = 0.0;
};

inline BuiltProtocol build_protocol(const ProtocolConfig& c) {
  BuiltProtocol bp;
  bp.basis = resolved_representation(c);
  const int n = c.n_qubits;

  if (c.target == TargetKind::W || c.target == TargetKind::Dicke) {
    const int kexc = c.excitation;
    bp.policy = DecidePolicy::InfinitesimalWithRescue;
    if (bp.basis == Basis::Dicke) {
      DickeOperators ops = dicke_operators(n);
      bp.dim = n + 1;
      bp.x = ops.sum_z;
      bp.h_f = 0.5 * ops.sum_y;
      bp.target = Vec::Zero(bp.dim);
      bp.target(kexc) = 1.0;
      Vec ref = Vec::Zero(bp.dim);
      ref(0) = 1.0;
      RotationFactory rot(bp.h_f);
      bp.pre_rotation = global_angle_search(pure_density(ref), rot, bp.target);
      bp.psi0 = rot(bp.pre_rotation) * ref;
    } else {
      require(bp.basis == Basis::Full,
              "build_protocol: dicke targets use the dicke or full basis");
      auto basis_vecs = build_dicke_basis(n);
      bp.dim = 1 << n;
      bp.x = collective_operator(n, 'z');
      bp.h_f = 0.5 * collective_operator(n, 'y');
      bp.target = basis_vecs[kexc];
      Vec ref = Vec::Zero(bp.dim);
      ref(0) = 1.0;  // all qubits in |0>
      RotationFactory rot(bp.h_f);
      bp.pre_rotation = global_angle_search(pure_density(ref), rot, bp.target);
      bp.psi0 = rot(bp.pre_rotation) * ref;
    }
    return bp;
  }

  // GHZ family.  The control generator (sum_i X_i - I)/2 matches the
  // product of single-qubit half-angle rotations up to global phase; the
  // identity shift keeps the restricted two-level picture traceless.
  if (c.observable == ObservableKind::Symmetric) {
    bp.policy = DecidePolicy::GhzCandidates;
    if (bp.basis == Basis::GhzSym) {
      bp.dim = static_cast<int>(ghz_sym_dim(n));
      bp.x = ghz_sym_observable(n);
      bp.h_f = 0.5 * (ghz_sym_collective_x(n) -
                      Mat::Identity(bp.dim, bp.dim));
      bp.target = Vec::Zero(bp.dim);
      bp.target(0) = 1.0;
      bp.psi0 = ghz_sym_plus_state(n);
    } else {
      require(bp.basis == Basis::Full,
              "build_protocol: ghz targets use the ghz-sym or full basis");
      bp.dim = 1 << n;
      bp.x = two_body_zz_sum(n);
      bp.h_f = 0.5 * (collective_operator(n, 'x') -
                      Mat::Identity(bp.dim, bp.dim));
      bp.target = Vec::Zero(bp.dim);
      bp.target(0) = bp.target(bp.dim - 1) = 1.0 / std::sqrt(2.0);
      bp.psi0 = Vec::Constant(bp.dim, Complex(std::pow(2.0, -0.5 * n), 0.0));
    }
    return bp;
  }

  // Non-symmetric one-body observable comparison: X = 2 Z_1 - Z_2 - Z_3 on
  // the full three-qubit space, with the angle formula applied verbatim.
  require(n == 3 && bp.basis == Basis::Full,
          "build_protocol: onebody-nonsym runs on the full 3-qubit space");
  bp.policy = DecidePolicy::LiteralInfinitesimal;
  bp.dim = 8;
  Mat z = pauli('z'), id = Mat::Identity(2, 2);
  bp.x = 2.0 * kron_chain({z, id, id}) - kron_chain({id, z, id}) -
         kron_chain({id, id, z});
  bp.h_f = 0.5 * (collective_operator(3, 'x') - Mat::Identity(8, 8));
  bp.target = Vec::Zero(8);
  bp.target(0) = bp.target(7) = 1.0 / std::sqrt(2.0);
  bp.psi0 = Vec::Constant(8, Complex(std::pow(2.0, -1.5), 0.0));
  return bp;
}

}  // namespace paqs
