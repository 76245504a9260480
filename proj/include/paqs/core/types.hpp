// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace paqs {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

// Basis tag carried by states and operators so mismatched products fail loudly
// instead of producing silently wrong physics.
enum class Basis {
  Full,            // 2^N computational basis
  Dicke,           // N+1 symmetric excitation ladder
  GhzSym,          // spin-flip-even symmetric subspace
  EffectiveQubit,  // 2-dim image of the N=3 GHz-symmetric problem
};

inline const char* basis_name(Basis b) {
  switch (b) {
    case Basis::Full: return "full";
    case Basis::Dicke: return "dicke";
    case Basis::GhzSym: return "ghz-sym";
    case Basis::EffectiveQubit: return "effective-qubit";
  }
  return "?";
}

struct PaqsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PaqsError(msg);
}

}  // namespace paqs
