#pragma once

#include "softreset/interconnect.hpp"

#include <string>
#include <vector>

namespace softreset {

enum class Method { FixedRK4, AdaptiveRK45 };

struct IntegratorConfig {
  Method method = Method::AdaptiveRK45;
  double h = 1e-3;        // fixed-step size (FixedRK4 only)
  double h_min = 1e-12;   // adaptive floor; below this the run aborts
  double h_max = 0.1;
  double rtol = 1e-8;
  double atol = 1e-8;
  /// Boundary-layer base width: the regularized selection is
  /// clamp(phi / (boundary_layer * (1 + |z_c|^2)), -1, 1).
  double boundary_layer = 1e-6;
  double t_end = 10.0;
  int record_stride = 1;  // record every k-th accepted step

  void validate() const;
};

struct JumpRecord {
  double t = 0.0;
  double vc_before = 0.0;
  double vc_after = 0.0;
};

/// Time-indexed run record: states, outputs, sector values and energy
/// samples at accepted (decimated) steps. Jump bookkeeping is populated by
/// hard-reset runs only. `aborted` marks integration failures; the partial
/// trajectory up to the failure is kept.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> y_c;
  std::vector<Vec> y_p;
  std::vector<double> phi_values;
  std::vector<double> V_p;
  std::vector<double> V_c;
  std::vector<double> V;

  long jump_count = 0;
  std::vector<JumpRecord> jumps;
  bool zeno_tripped = false;

  bool aborted = false;
  std::string abort_reason;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Linear interpolation of the state at time t (clamped to the recorded
  /// range). Used to align runs on a common output grid.
  Vec state_at(double t) const;
  double value_at(const std::vector<double>& series, double t) const;
};

struct HybridConfig {
  long max_jumps = 10000;  // Zeno guard: jumps allowed per unit time window
  double jump_dwell = 0.0;  // minimum flow time after a jump

  void validate() const;
};

/// Integrates the boundary-layer regularization of the soft-reset closed
/// loop. The controller energy is only used for trajectory bookkeeping.
Trajectory integrate_soft(const ClosedLoop& loop,
                          const QuadraticEnergy& ctrl_energy,
                          const IntegratorConfig& cfg,
                          const ClosedLoopState& x0);

/// Executes the hard-reset hybrid loop: flows while phi <= 0, locates
/// upward phi crossings by bisection (time tolerance 1e-10) and applies the
/// controller jump map there. Trips the Zeno guard when more than
/// hcfg.max_jumps jumps land in any unit time window.
Trajectory integrate_hard(const PlantSpec& plant, const ControllerSpec& ctrl,
                          const QuadraticEnergy& ctrl_energy,
                          const IntegratorConfig& cfg,
                          const HybridConfig& hcfg,
                          const ClosedLoopState& x0);

struct MonitorReport {
  double max_increment = 0.0;  // max_k (V_{k+1} - V_k)
  bool flagged = false;        // max_increment > tol_abs + tol_rel * V_0
  double v0 = 0.0;
  std::vector<double> increments;
};

/// Scans the recorded energy for upward violations of the expected
/// Lyapunov decrease. Throws std::invalid_argument on an empty trajectory.
MonitorReport lyapunov_monitor(const Trajectory& traj, double tol_abs,
                               double tol_rel);

}  // namespace softreset
