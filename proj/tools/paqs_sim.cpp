// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: parses a run config, dispatches the requested
// protocol, and writes CSV artifacts plus a manifest with content digests.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paqs/paqs.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string schedule_path;
  int workers = 0;
  bool raw_steps = false;
};

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

paqs::TangleRunParams tangle_params(const paqs::ProtocolConfig& c) {
  paqs::TangleRunParams p;
  if (c.observable == paqs::ObservableKind::Symmetric) {
    p.x = paqs::two_body_zz_sum(3);
  } else {
    paqs::Mat z = paqs::pauli('z'), id = paqs::Mat::Identity(2, 2);
    p.x = 2.0 * paqs::kron_chain({z, id, id}) -
          paqs::kron_chain({id, z, id}) - paqs::kron_chain({id, id, z});
  }
  p.k = c.k;
  p.dt = c.dt;
  p.t_final = c.t_final;
  p.n_traj = c.n_traj;
  p.seed = c.seed;
  return p;
}

int run_command(const std::string& mode, const CliOptions& opt) {
  paqs::ProtocolConfig cfg = paqs::parse_config(opt.config_path);

  auto check_method = [&](paqs::Method want) {
    if (cfg.method != want)
      throw paqs::PaqsError(std::string("config protocol \"") +
                            paqs::to_string(cfg.method) +
                            "\" does not match subcommand \"" + mode + "\"");
  };
  if (mode == "tea") check_method(paqs::Method::Tea);
  if (mode == "aslo" || mode == "schedule") check_method(paqs::Method::Aslo);
  if (mode == "baseline") check_method(paqs::Method::BaselineNoFeedback);
  if (mode == "tangle") check_method(paqs::Method::Tangle);
  if (mode == "replay" && cfg.method != paqs::Method::Tea &&
      cfg.method != paqs::Method::Aslo)
    throw paqs::PaqsError(
        "replay accepts configs with protocol tea or aslo");

  std::filesystem::create_directories(cfg.output_dir);
  auto t0 = std::chrono::steady_clock::now();
  paqs::RunManifest manifest;
  manifest.config = cfg;
  long aborted = 0;
  std::string summary;

  auto add_artifact = [&](const std::string& name) {
    manifest.artifacts.emplace_back(
        name, paqs::sha256_file(join_path(cfg.output_dir, name)));
  };

  if (mode == "tea" || mode == "baseline" || mode == "replay") {
    paqs::EnsembleStats stats;
    if (mode == "tea") {
      stats = paqs::run_tea(cfg, opt.workers);
    } else if (mode == "baseline") {
      stats = paqs::run_baseline(cfg, opt.workers);
    } else {
      if (opt.schedule_path.empty())
        throw paqs::PaqsError("replay requires --schedule <path>");
      paqs::FeedbackSchedule sched =
          paqs::read_schedule_csv(opt.schedule_path);
      stats = paqs::replay_schedule(sched, cfg, opt.workers);
    }
    aborted = stats.aborted;
    paqs::write_fidelity_csv(join_path(cfg.output_dir, "fidelity.csv"),
                             stats.times, stats.mean_fidelity, stats.sem,
                             opt.raw_steps);
    add_artifact("fidelity.csv");
    std::ostringstream os;
    os << mode << ": " << stats.n_traj << " trajectories, final mean fidelity "
       << stats.mean_fidelity.back() << " (sem " << stats.sem.back() << ")";
    if (mode == "tea")
      os << ", large-angle trajectory fraction "
         << stats.large_angle_traj_fraction;
    summary = os.str();
  } else if (mode == "aslo" || mode == "schedule") {
    paqs::AsloRun run = paqs::run_aslo(cfg);
    paqs::write_schedule_csv(join_path(cfg.output_dir, "schedule.csv"),
                             run.schedule);
    add_artifact("schedule.csv");
    if (mode == "aslo") {
      std::vector<double> zeros(run.times.size(), 0.0);
      paqs::write_fidelity_csv(join_path(cfg.output_dir, "fidelity.csv"),
                               run.times, run.fidelity, zeros, opt.raw_steps);
      add_artifact("fidelity.csv");
    }
    std::ostringstream os;
    os << mode << ": " << run.schedule.size() << " steps, final fidelity "
       << run.fidelity.back() << ", quadrature order "
       << run.quadrature_order;
    summary = os.str();
  } else if (mode == "tangle") {
    paqs::TangleRunParams p = tangle_params(cfg);
    p.workers = opt.workers;
    paqs::TangleRunResult r = paqs::run_tangle(p);
    aborted = r.aborted;
    paqs::write_fidelity_csv(join_path(cfg.output_dir, "fidelity.csv"),
                             r.times, r.mean_fidelity, r.fidelity_sem,
                             opt.raw_steps);
    add_artifact("fidelity.csv");
    paqs::write_fidelity_csv(join_path(cfg.output_dir, "tangle.csv"),
                             r.times, r.mean_tangle, r.tangle_sem,
                             opt.raw_steps, 2000, "mean_tangle");
    add_artifact("tangle.csv");
    paqs::write_histogram_csv(
        join_path(cfg.output_dir, "angle_histogram.csv"), r.snapshot_times,
        r.angle_histograms);
    add_artifact("angle_histogram.csv");
    std::ostringstream os;
    os << "tangle: " << r.n_traj << " trajectories, final mean tangle "
       << r.mean_tangle.back() << ", final mean fidelity "
       << r.mean_fidelity.back();
    summary = os.str();
  }

  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  paqs::write_manifest(join_path(cfg.output_dir, "manifest.json"), manifest);

  std::cout << summary << "\n";
  if (aborted > 0) {
    std::cerr << "error: " << aborted << " trajectories aborted\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-measurement feedback simulator"};
  app.require_subcommand(1);
  CliOptions opt;

  const char* modes[] = {"tea",    "aslo",   "replay",
                         "baseline", "tangle", "schedule"};
  const char* blurbs[] = {
      "Per-trajectory feedback ensemble",
      "Deterministic averaged-state run emitting a coefficient schedule",
      "Stochastic ensemble driven by a precomputed schedule",
      "Measurement-only ensemble, no feedback",
      "Tangle-maximizing feedback study with angle histograms",
      "Averaged-state run that writes only the schedule"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 6; ++i) {
    CLI::App* s = app.add_subcommand(modes[i], blurbs[i]);
    s->add_option("--config", opt.config_path, "Run config JSON path")
        ->required();
    s->add_option("--workers", opt.workers,
                  "Worker threads (0 = auto; PAQS_SIM_WORKERS overrides)");
    s->add_flag("--raw-steps", opt.raw_steps,
                "Write every step instead of thinning to 2000 rows");
    if (std::string(modes[i]) == "replay")
      s->add_option("--schedule", opt.schedule_path,
                    "Schedule CSV from an aslo or schedule run");
    subs.push_back(s);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (int i = 0; i < 6; ++i)
      if (subs[i]->parsed()) return run_command(modes[i], opt);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
