// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "paqs/core/types.hpp"
#include "paqs/io/sha256.hpp"

namespace paqs {

enum class Method { Tea, Aslo, BaselineNoFeedback, Tangle };
enum class TargetKind { W, Dicke, Ghz };
enum class ObservableKind { Symmetric, OnebodyNonsym };
enum class RepresentationKind { Auto, Full, Symmetric };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Tea: return "tea";
    case Method::Aslo: return "aslo";
    case Method::BaselineNoFeedback: return "baseline-no-feedback";
    case Method::Tangle: return "tangle";
  }
  return "?";
}
inline const char* to_string(TargetKind t) {
  switch (t) {
    case TargetKind::W: return "w";
    case TargetKind::Dicke: return "dicke";
    case TargetKind::Ghz: return "ghz";
  }
  return "?";
}
inline const char* to_string(ObservableKind o) {
  return o == ObservableKind::Symmetric ? "symmetric" : "onebody-nonsym";
}
inline const char* to_string(RepresentationKind r) {
  switch (r) {
    case RepresentationKind::Auto: return "auto";
    case RepresentationKind::Full: return "full";
    case RepresentationKind::Symmetric: return "symmetric";
  }
  return "?";
}

struct ProtocolConfig {
  Method method = Method::Tea;
  TargetKind target = TargetKind::W;
  int n_qubits = 3;
  int excitation = 1;  // Dicke ladder index; 1 for W, ignored for GHZ
  ObservableKind observable = ObservableKind::Symmetric;
  double k = 1.0;       // measurement strength, inverse microseconds
  double dt = 1e-3;     // step, microseconds
  double t_final = 3.0; // horizon, microseconds
  int n_traj = 1000;
  std::uint64_t seed = 1;
  RepresentationKind representation = RepresentationKind::Auto;
  std::string output_dir = "out";

  int n_steps() const {
    return static_cast<int>(std::llround(t_final / dt));
  }
};

// Resolves representation=auto and validates representation constraints.
inline Basis resolved_representation(const ProtocolConfig& c) {
  if (c.observable == ObservableKind::OnebodyNonsym &&
      c.representation == RepresentationKind::Symmetric)
    throw PaqsError(
        "config: onebody-nonsym observable does not commute with qubit "
        "permutations; the symmetric representation cannot host it");
  RepresentationKind r = c.representation;
  if (r == RepresentationKind::Auto) {
    if (c.target == TargetKind::W || c.target == TargetKind::Dicke)
      return Basis::Dicke;
    if (c.observable == ObservableKind::Symmetric) return Basis::GhzSym;
    return Basis::Full;
  }
  if (r == RepresentationKind::Full) {
    if (c.n_qubits > 12)
      throw PaqsError(
          "config: full representation is limited to n_qubits <= 12");
    return Basis::Full;
  }
  return c.target == TargetKind::Ghz ? Basis::GhzSym : Basis::Dicke;
}

namespace detail {

inline std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Canonical one-line JSON echo of a config: fixed key order and %.17g
// numerics so the same config always serializes to the same bytes.
inline std::string canonical_config_json(const ProtocolConfig& c) {
  std::ostringstream os;
  os << "{\"protocol\":\"" << to_string(c.method) << "\""
     << ",\"target\":\"" << to_string(c.target) << "\""
     << ",\"n_qubits\":" << c.n_qubits;
  if (c.target == TargetKind::Dicke) os << ",\"excitation\":" << c.excitation;
  os << ",\"observable\":\"" << to_string(c.observable) << "\""
     << ",\"k_mhz\":" << detail::num17(c.k)
     << ",\"dt_us\":" << detail::num17(c.dt)
     << ",\"t_final_us\":" << detail::num17(c.t_final)
     << ",\"n_traj\":" << c.n_traj << ",\"seed\":" << c.seed
     << ",\"representation\":\"" << to_string(c.representation) << "\""
     << ",\"output_dir\":\"" << c.output_dir << "\"}";
  return os.str();
}

// Digest over the fields that determine the physics of a feedback schedule:
// target, sizes, observable, k, dt, and horizon.  Method, trajectory count,
// seed, representation, and output paths are excluded, so a schedule can be
// replayed under a different sampling setup against the same dynamics.
inline std::string physics_fingerprint(const ProtocolConfig& c) {
  std::ostringstream os;
  os << to_string(c.target) << "|" << c.n_qubits << "|"
     << (c.target == TargetKind::Dicke ? c.excitation
                                       : c.target == TargetKind::W ? 1 : 0)
     << "|" << to_string(c.observable) << "|" << detail::num17(c.k) << "|"
     << detail::num17(c.dt) << "|" << detail::num17(c.t_final);
  return sha256_hex(os.str()).substr(0, 16);
}

inline ProtocolConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PaqsError("config: top level must be an object");

  static const char* known[] = {"protocol", "target",     "n_qubits",
                                "excitation", "observable", "k_mhz",
                                "dt_us",    "t_final_us", "n_traj",
                                "seed",     "representation", "output_dir"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw PaqsError("config: unknown key \"" + it.key() + "\"");
  }

  auto need = [&](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end())
      throw PaqsError(std::string("config: missing required key \"") + key +
                      "\"");
    return *it;
  };
  auto as_int = [](const nlohmann::json& v, const char* key) {
    if (!v.is_number_integer())
      throw PaqsError(std::string("config: key \"") + key +
                      "\" must be an integer");
    return v.get<long long>();
  };
  auto as_num = [](const nlohmann::json& v, const char* key) {
    if (!v.is_number())
      throw PaqsError(std::string("config: key \"") + key +
                      "\" must be a number");
    return v.get<double>();
  };
  auto as_str = [](const nlohmann::json& v, const char* key) {
    if (!v.is_string())
      throw PaqsError(std::string("config: key \"") + key +
                      "\" must be a string");
    return v.get<std::string>();
  };

  ProtocolConfig c;

  std::string proto = as_str(need("protocol"), "protocol");
  if (proto == "tea")
    c.method = Method::Tea;
  else if (proto == "aslo")
    c.method = Method::Aslo;
  else if (proto == "baseline-no-feedback")
    c.method = Method::BaselineNoFeedback;
  else if (proto == "tangle")
    c.method = Method::Tangle;
  else
    throw PaqsError("config: key \"protocol\" must be one of tea, aslo, "
                    "baseline-no-feedback, tangle");

  std::string tgt = as_str(need("target"), "target");
  if (tgt == "w")
    c.target = TargetKind::W;
  else if (tgt == "dicke")
    c.target = TargetKind::Dicke;
  else if (tgt == "ghz")
    c.target = TargetKind::Ghz;
  else
    throw PaqsError("config: key \"target\" must be one of w, dicke, ghz");

  c.n_qubits = static_cast<int>(as_int(need("n_qubits"), "n_qubits"));
  if (c.n_qubits < 2)
    throw PaqsError("config: key \"n_qubits\" must be at least 2");

  if (c.target == TargetKind::Dicke) {
    c.excitation =
        static_cast<int>(as_int(need("excitation"), "excitation"));
    if (c.excitation < 0 || c.excitation > c.n_qubits)
      throw PaqsError("config: excitation out of range [0, n_qubits]");
  } else {
    if (j.find("excitation") != j.end())
      throw PaqsError(
          "config: key \"excitation\" only applies to dicke targets");
    c.excitation = c.target == TargetKind::W ? 1 : 0;
  }

  if (auto it = j.find("observable"); it != j.end()) {
    std::string obs = as_str(*it, "observable");
    if (obs == "symmetric")
      c.observable = ObservableKind::Symmetric;
    else if (obs == "onebody-nonsym")
      c.observable = ObservableKind::OnebodyNonsym;
    else
      throw PaqsError("config: key \"observable\" must be symmetric or "
                      "onebody-nonsym");
  }

  c.k = as_num(need("k_mhz"), "k_mhz");
  if (!(c.k > 0)) throw PaqsError("config: key \"k_mhz\" must be positive");

  if (auto it = j.find("dt_us"); it != j.end()) {
    c.dt = as_num(*it, "dt_us");
  }
  if (!(c.dt > 0)) throw PaqsError("config: key \"dt_us\" must be positive");

  c.t_final = as_num(need("t_final_us"), "t_final_us");
  if (!(c.t_final > 0))
    throw PaqsError("config: key \"t_final_us\" must be positive");
  if (c.n_steps() < 1)
    throw PaqsError("config: key \"t_final_us\" is shorter than one step");

  c.n_traj = static_cast<int>(as_int(need("n_traj"), "n_traj"));
  if (c.n_traj < 1)
    throw PaqsError("config: key \"n_traj\" must be at least 1");

  {
    const nlohmann::json& s = need("seed");
    if (!s.is_number_integer() && !s.is_number_unsigned())
      throw PaqsError("config: key \"seed\" must be an integer");
    c.seed = s.get<std::uint64_t>();
  }

  if (auto it = j.find("representation"); it != j.end()) {
    std::string rep = as_str(*it, "representation");
    if (rep == "auto")
      c.representation = RepresentationKind::Auto;
    else if (rep == "full")
      c.representation = RepresentationKind::Full;
    else if (rep == "symmetric")
      c.representation = RepresentationKind::Symmetric;
    else
      throw PaqsError("config: key \"representation\" must be auto, full, "
                      "or symmetric");
  }

  c.output_dir = as_str(need("output_dir"), "output_dir");
  if (c.output_dir.empty())
    throw PaqsError("config: key \"output_dir\" must be non-empty");

  if (c.k * c.dt > 0.01 * (1.0 + 1e-12))
    throw PaqsError("k·dt exceeds 0.01");

  if (c.observable == ObservableKind::OnebodyNonsym &&
      !(c.target == TargetKind::Ghz && c.n_qubits == 3))
    throw PaqsError(
        "config: observable onebody-nonsym requires target ghz with "
        "n_qubits 3");

  if (c.method == Method::Tangle) {
    if (c.target != TargetKind::Ghz || c.n_qubits != 3)
      throw PaqsError(
          "config: protocol tangle requires target ghz with n_qubits 3");
    if (c.representation == RepresentationKind::Symmetric)
      throw PaqsError(
          "config: protocol tangle runs in the full representation; "
          "per-qubit amplitudes are needed for the tangle");
  }

  if ((c.target == TargetKind::W || c.target == TargetKind::Dicke) &&
      c.n_qubits > 12 && c.method != Method::Aslo)
    throw PaqsError(
        "config: dicke-family targets with n_qubits > 12 run only under "
        "protocol aslo");

  resolved_representation(c);  // validates representation constraints
  return c;
}

inline ProtocolConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PaqsError("config: cannot open \"" + path + "\"");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw PaqsError("config: JSON parse failure in \"" + path +
                    "\": " + e.what());
  }
  return parse_config_json(j);
}

}  // namespace paqs
