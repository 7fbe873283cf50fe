#pragma once

#include "softreset/config.hpp"
#include "softreset/controllers.hpp"
#include "softreset/integrate.hpp"
#include "softreset/plants.hpp"

namespace softreset {

enum class ExperimentKind { Tora, Manipulator, ScOpt };
enum class ResetMode { Soft, Hard, None };

/// Fully resolved experiment description. Defaults are illustrative and
/// documented in the README; every field can be overridden from the config
/// file.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Tora;
  ResetMode mode = ResetMode::Soft;

  bool gamma_synthesized = false;
  double gamma_value = 0.0;   // constant gain (mode soft)
  double gamma0 = 1.0;        // synthesized gain parameter

  IntegratorConfig integrator;
  HybridConfig hybrid;

  Vec x_p0;  // plant initial condition (absolute coordinates where relevant)
  Vec x_c0;

  std::uint64_t seed = 1;
  std::string out_dir;

  ToraParams tora;
  ForeParams fore;

  ManipulatorParams manip;
  double manip_kappa = 0.005;

  int sc_n = 5;
  int sc_p = 10;
  double sc_L = 1e4;
  double sc_r = 1e-6;
  double sc_K = 1.0;
  double sc_kappa = 0.5;

  /// Consumes the recognized keys and fails on leftovers.
  static ExperimentConfig from_config(Config& cfg);
};

/// Plant + controller + gain + naming, ready to integrate.
struct ExperimentSetup {
  PlantSpec plant;
  Controller controller;
  GammaPolicy gamma = GammaPolicy::none();
  ClosedLoopState x0;
  std::vector<std::string> state_names;
  std::vector<std::string> output_names;
  /// Initial gradient norm for the optimization experiment, 0 otherwise.
  double sc_grad0 = 0.0;
};

ExperimentSetup build_setup(const ExperimentConfig& cfg);

struct RunResult {
  Trajectory traj;
  MonitorReport monitor;
  int exit_code = 0;  // 0 ok, 3 integration failure
  double final_state_norm = 0.0;
  double final_V = 0.0;
  std::string summary;
};

/// Runs one experiment; writes trajectory.csv, energy.csv and summary.txt
/// into cfg.out_dir when it is non-empty.
RunResult run_experiment(const ExperimentConfig& cfg);

struct SweepResult {
  int exit_code = 0;  // 3 when any sub-run failed
  std::vector<RunResult> runs;
};

/// One run per value of the overridden key, assembled into a single wide
/// CSV on a common time grid (out_dir/sweep.csv); each sub-run also writes
/// its own artifacts under out_dir/<param>=<value>/. Sub-runs execute in
/// parallel workers; assembly is serialized.
SweepResult sweep(const Config& base, const std::string& param,
                  const std::vector<std::string>& values,
                  const std::string& out_dir, std::size_t grid_points = 1001);

std::string experiment_name(ExperimentKind k);

}  // namespace softreset
