#include "softreset/experiment.hpp"

#include "softreset/csv.hpp"
#include "softreset/gamma_synth.hpp"
#include "softreset/interconnect.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace softreset {

namespace {

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

std::vector<double> default_x0(ExperimentKind kind, int n) {
  switch (kind) {
    case ExperimentKind::Tora:
      return {0.0, 0.0, 1.0, 0.0};  // unit translational offset, at rest
    case ExperimentKind::Manipulator:
      return {M_PI / 2.0, -M_PI / 4.0, 0.0, 0.0};  // absolute joint angles
    case ExperimentKind::ScOpt:
      return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  }
  return {};
}

}  // namespace

std::string experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Tora: return "tora";
    case ExperimentKind::Manipulator: return "manipulator";
    case ExperimentKind::ScOpt: return "sc_opt";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_config(Config& cfg) {
  ExperimentConfig ec;

  const std::string exp = cfg.require_string("experiment");
  if (exp == "tora") {
    ec.kind = ExperimentKind::Tora;
  } else if (exp == "manipulator") {
    ec.kind = ExperimentKind::Manipulator;
  } else if (exp == "sc_opt") {
    ec.kind = ExperimentKind::ScOpt;
  } else {
    throw ConfigError("config key 'experiment': unknown experiment '" + exp +
                      "'");
  }

  const std::string mode = cfg.get_string("mode", "soft");
  if (mode == "soft") {
    ec.mode = ResetMode::Soft;
  } else if (mode == "hard") {
    ec.mode = ResetMode::Hard;
  } else if (mode == "none") {
    ec.mode = ResetMode::None;
  } else {
    throw ConfigError("config key 'mode': expected soft, hard or none");
  }

  const double default_gamma = ec.kind == ExperimentKind::Tora        ? 100.0
                               : ec.kind == ExperimentKind::Manipulator ? 1000.0
                                                                        : 30.0;
  const std::string gamma = cfg.get_string("gamma", "");
  if (gamma.empty()) {
    ec.gamma_value = default_gamma;
  } else if (gamma.rfind("synth(", 0) == 0 && gamma.back() == ')') {
    ec.gamma_synthesized = true;
    const std::string inner = gamma.substr(6, gamma.size() - 7);
    try {
      ec.gamma0 = std::stod(inner);
    } catch (const std::exception&) {
      throw ConfigError("config key 'gamma': bad synth(<gamma0>) value");
    }
    if (ec.gamma0 <= 0.0) {
      throw ConfigError("config key 'gamma': gamma0 must be > 0");
    }
  } else {
    try {
      ec.gamma_value = std::stod(gamma);
    } catch (const std::exception&) {
      throw ConfigError("config key 'gamma': expected a number or synth(g0)");
    }
    if (ec.gamma_value < 0.0) {
      throw ConfigError("config key 'gamma': must be >= 0");
    }
  }

  const double default_t_end = ec.kind == ExperimentKind::Tora        ? 50.0
                               : ec.kind == ExperimentKind::Manipulator ? 10.0
                                                                        : 20.0;
  auto& in = ec.integrator;
  const std::string method = cfg.get_string("method", "rk45");
  if (method == "rk45") {
    in.method = Method::AdaptiveRK45;
  } else if (method == "rk4") {
    in.method = Method::FixedRK4;
  } else {
    throw ConfigError("config key 'method': expected rk45 or rk4");
  }
  in.t_end = cfg.get_double("t_end", default_t_end);
  in.h = cfg.get_double("h", in.h);
  in.h_min = cfg.get_double("h_min", in.h_min);
  in.h_max = cfg.get_double("h_max", in.h_max);
  in.rtol = cfg.get_double("rtol", in.rtol);
  in.atol = cfg.get_double("atol", in.atol);
  in.boundary_layer = cfg.get_double("delta", in.boundary_layer);
  in.record_stride = static_cast<int>(cfg.get_long("record_stride", 1));

  ec.hybrid.max_jumps = cfg.get_long("max_jumps", ec.hybrid.max_jumps);
  ec.hybrid.jump_dwell = cfg.get_double("jump_dwell", ec.hybrid.jump_dwell);

  ec.seed = cfg.get_u64("seed", 1);
  ec.out_dir = cfg.get_string("out", "");

  ec.tora.sigma = cfg.get_double("tora.sigma", ec.tora.sigma);

  ec.fore.a_c = cfg.get_double("fore.a", ec.fore.a_c);
  ec.fore.b_c = cfg.get_double("fore.b", ec.fore.b_c);
  ec.fore.c_c = cfg.get_double("fore.c", ec.fore.c_c);
  ec.fore.d_c = cfg.get_double("fore.d", ec.fore.d_c);
  ec.fore.r_c = cfg.get_double("fore.r", ec.fore.r_c);
  ec.fore.p_c = cfg.get_double("fore.p", ec.fore.p_c);
  ec.fore.kappa = cfg.get_double("fore.kappa", ec.fore.kappa);
  ec.fore.rho0 = cfg.get_double("fore.rho0", ec.fore.rho0);
  ec.fore.eps = cfg.get_double("fore.eps", ec.fore.eps);

  ec.manip.theta1 = cfg.get_double("manip.theta1", ec.manip.theta1);
  ec.manip.theta2 = cfg.get_double("manip.theta2", ec.manip.theta2);
  ec.manip.theta3 = cfg.get_double("manip.theta3", ec.manip.theta3);
  ec.manip.rho = cfg.get_double("manip.rho", ec.manip.rho);
  ec.manip_kappa = cfg.get_double("manip.kappa", ec.manip_kappa);

  ec.sc_n = static_cast<int>(cfg.get_long("sc.n", ec.sc_n));
  ec.sc_p = static_cast<int>(cfg.get_long("sc.p", ec.sc_p));
  ec.sc_L = cfg.get_double("sc.L", ec.sc_L);
  ec.sc_r = cfg.get_double("sc.r", ec.sc_r);
  ec.sc_K = cfg.get_double("sc.K", ec.sc_K);
  ec.sc_kappa = cfg.get_double("sc.kappa", ec.sc_kappa);

  const int n_plant = ec.kind == ExperimentKind::ScOpt ? ec.sc_n : 4;
  const int n_ctrl = ec.kind == ExperimentKind::Tora ? 1
                     : ec.kind == ExperimentKind::Manipulator ? 2
                                                              : ec.sc_n;
  ec.x_p0 = to_vec(cfg.get_vector("x0", default_x0(ec.kind, n_plant)));
  ec.x_c0 = to_vec(cfg.get_vector(
      "xc0", std::vector<double>(static_cast<std::size_t>(n_ctrl), 0.0)));
  if (ec.x_p0.size() != n_plant) {
    throw ConfigError("config key 'x0': expected " + std::to_string(n_plant) +
                      " numbers");
  }
  if (ec.x_c0.size() != n_ctrl) {
    throw ConfigError("config key 'xc0': expected " + std::to_string(n_ctrl) +
                      " numbers");
  }

  cfg.check_all_consumed();
  return ec;
}

namespace {

std::vector<std::string> numbered(const std::string& base, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(base + std::to_string(i));
  return out;
}

}  // namespace

ExperimentSetup build_setup(const ExperimentConfig& cfg) {
  ExperimentSetup s;

  switch (cfg.kind) {
    case ExperimentKind::Tora: {
      s.plant = make_tora(cfg.tora);
      s.controller = make_example1_fore(cfg.fore);
      s.state_names = {"theta", "theta_dot", "x", "x_dot", "xc"};
      s.output_names = {"y_c", "y_p"};
      s.x0 = {cfg.x_p0, cfg.x_c0};
      break;
    }
    case ExperimentKind::Manipulator: {
      s.plant = make_manipulator(cfg.manip);
      MimoForeParams mp;
      mp.A_c = -Mat::Identity(2, 2);
      mp.B_c = 100.0 * Mat::Identity(2, 2);
      mp.C_c = Mat::Identity(2, 2);
      mp.kappa_energy = cfg.manip_kappa;
      s.controller = make_mimo_fore(mp);
      s.state_names = {"q1t", "q2t", "dq1", "dq2", "xc1", "xc2"};
      s.output_names = {"yc1", "yc2", "yp1", "yp2"};
      // Config gives absolute joint angles; the plant state is translated.
      Vec xt(4);
      xt << cfg.x_p0.head(2) - Vec(cfg.manip.q_star), cfg.x_p0.tail(2);
      s.x0 = {xt, cfg.x_c0};
      break;
    }
    case ExperimentKind::ScOpt: {
      const ScObjective obj =
          sc_generate(cfg.sc_n, cfg.sc_p, cfg.sc_L, cfg.sc_r, cfg.seed);
      s.plant = gradient_flow_plant(obj);
      MimoForeParams mp;
      mp.A_c = -cfg.sc_K * Mat::Identity(cfg.sc_n, cfg.sc_n);
      mp.B_c = Mat::Identity(cfg.sc_n, cfg.sc_n);
      mp.C_c = Mat::Identity(cfg.sc_n, cfg.sc_n);
      mp.kappa_energy = cfg.sc_kappa;
      s.controller = make_mimo_fore(mp);
      s.state_names = numbered("xp", cfg.sc_n);
      for (const auto& n : numbered("xc", cfg.sc_n)) s.state_names.push_back(n);
      s.output_names = numbered("yc", cfg.sc_n);
      for (const auto& n : numbered("yp", cfg.sc_n)) s.output_names.push_back(n);
      // Config gives the start point in original coordinates; translate by
      // the precomputed minimizer.
      const Vec x_star = gradient_flow_minimizer(obj);
      s.x0 = {cfg.x_p0 - x_star, cfg.x_c0};
      s.sc_grad0 = s.plant.h_p(s.x0.x_p).norm();
      break;
    }
  }

  switch (cfg.mode) {
    case ResetMode::None:
      s.gamma = GammaPolicy::none();
      break;
    case ResetMode::Soft:
    case ResetMode::Hard:
      if (cfg.gamma_synthesized) {
        // The scalar FORE synthesizes from its own certificate parameters;
        // the multivariable ones satisfy the flow inequality globally, so
        // the sector margin can swallow the whole sector matrix.
        if (cfg.kind == ExperimentKind::Tora) {
          s.gamma = synthesize_gamma(s.controller.spec, s.controller.energy,
                                     cfg.fore.rho0, cfg.fore.eps, cfg.gamma0);
        } else {
          s.gamma = synthesize_gamma(s.controller.spec, s.controller.energy,
                                     1e-3, 0.5, cfg.gamma0);
        }
      } else if (cfg.gamma_value == 0.0) {
        s.gamma = GammaPolicy::none();
      } else {
        s.gamma = GammaPolicy::constant(cfg.gamma_value);
      }
      break;
  }
  return s;
}

namespace {

void write_csvs(const ExperimentConfig& cfg, const ExperimentSetup& setup,
                const RunResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  {
    std::ofstream os(fs::path(cfg.out_dir) / "trajectory.csv");
    CsvWriter w(os);
    std::vector<std::string> names = {"t"};
    names.insert(names.end(), setup.state_names.begin(),
                 setup.state_names.end());
    names.insert(names.end(), {"V_p", "V_c", "V", "phi"});
    names.insert(names.end(), setup.output_names.begin(),
                 setup.output_names.end());
    w.header(names);
    const auto& tr = result.traj;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      std::vector<double> row = {tr.times[k]};
      for (Eigen::Index i = 0; i < tr.states[k].size(); ++i) {
        row.push_back(tr.states[k][i]);
      }
      row.push_back(tr.V_p[k]);
      row.push_back(tr.V_c[k]);
      row.push_back(tr.V[k]);
      row.push_back(tr.phi_values[k]);
      for (Eigen::Index i = 0; i < tr.y_c[k].size(); ++i) {
        row.push_back(tr.y_c[k][i]);
      }
      for (Eigen::Index i = 0; i < tr.y_p[k].size(); ++i) {
        row.push_back(tr.y_p[k][i]);
      }
      w.row(row);
    }
  }

  {
    std::ofstream os(fs::path(cfg.out_dir) / "energy.csv");
    CsvWriter w(os);
    w.header({"t", "V_p", "V_c", "V", "dV"});
    const auto& tr = result.traj;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      const double dv = k == 0 ? 0.0 : tr.V[k] - tr.V[k - 1];
      w.row({tr.times[k], tr.V_p[k], tr.V_c[k], tr.V[k], dv});
    }
  }

  {
    std::ofstream os(fs::path(cfg.out_dir) / "summary.txt");
    os << result.summary;
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  const ExperimentSetup setup = build_setup(cfg);
  RunResult result;

  if (cfg.mode == ResetMode::Hard) {
    result.traj =
        integrate_hard(setup.plant, setup.controller.spec,
                       setup.controller.energy, cfg.integrator, cfg.hybrid,
                       setup.x0);
  } else {
    const ClosedLoop loop =
        interconnect(setup.plant, setup.controller.spec, setup.gamma);
    result.traj =
        integrate_soft(loop, setup.controller.energy, cfg.integrator, setup.x0);
  }

  result.monitor = lyapunov_monitor(result.traj, 0.0, 1e-6);
  result.exit_code = result.traj.aborted ? 3 : 0;
  result.final_state_norm = result.traj.states.back().norm();
  result.final_V = result.traj.V.back();

  std::ostringstream ss;
  ss << "experiment = " << experiment_name(cfg.kind) << "\n";
  ss << "mode = "
     << (cfg.mode == ResetMode::Soft   ? "soft"
         : cfg.mode == ResetMode::Hard ? "hard"
                                       : "none")
     << "\n";
  if (cfg.gamma_synthesized) {
    ss << "gamma = synth(" << format_double(cfg.gamma0) << ")\n";
  } else {
    ss << "gamma = " << format_double(cfg.gamma_value) << "\n";
  }
  ss << "t_end = " << format_double(cfg.integrator.t_end) << "\n";
  ss << "samples = " << result.traj.size() << "\n";
  ss << "final_state_norm = " << format_double(result.final_state_norm) << "\n";
  ss << "final_V = " << format_double(result.final_V) << "\n";
  ss << "jump_count = " << result.traj.jump_count << "\n";
  ss << "zeno_tripped = " << (result.traj.zeno_tripped ? "true" : "false")
     << "\n";
  ss << "aborted = " << (result.traj.aborted ? "true" : "false") << "\n";
  if (result.traj.aborted) {
    ss << "abort_reason = " << result.traj.abort_reason << "\n";
  }
  ss << "monitor_max_increment = " << format_double(result.monitor.max_increment)
     << "\n";
  ss << "monitor_flagged = " << (result.monitor.flagged ? "true" : "false")
     << "\n";
  if (cfg.kind == ExperimentKind::ScOpt && !result.traj.empty()) {
    ss << "grad_norm_initial = " << format_double(setup.sc_grad0) << "\n";
    ss << "grad_norm_final = "
       << format_double(result.traj.y_p.back().norm()) << "\n";
  }
  result.summary = ss.str();

  if (!cfg.out_dir.empty()) {
    write_csvs(cfg, setup, result);
  }
  return result;
}

SweepResult sweep(const Config& base, const std::string& param,
                  const std::vector<std::string>& values,
                  const std::string& out_dir, std::size_t grid_points) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  {
    // The overridden key must be one the experiment recognizes.
    Config probe = base;
    probe.set(param, values.front());
    (void)ExperimentConfig::from_config(probe);
  }

  namespace fs = std::filesystem;
  SweepResult sr;
  sr.runs.resize(values.size());
  std::vector<ExperimentConfig> cfgs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    Config c = base;
    c.set(param, values[i]);
    cfgs[i] = ExperimentConfig::from_config(c);
    if (!out_dir.empty()) {
      cfgs[i].out_dir =
          (fs::path(out_dir) / (param + "=" + values[i])).string();
    } else {
      cfgs[i].out_dir.clear();
    }
  }

  // Sub-runs are independent; run them on parallel workers.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < values.size(); ++i) {
    sr.runs[i] = run_experiment(cfgs[i]);
  }

  for (const auto& r : sr.runs) {
    if (r.exit_code != 0) sr.exit_code = 3;
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    double t_max = 0.0;
    for (const auto& c : cfgs) t_max = std::max(t_max, c.integrator.t_end);

    std::ofstream os(fs::path(out_dir) / "sweep.csv");
    CsvWriter w(os);
    std::vector<std::string> names = {"t"};
    for (const auto& v : values) {
      names.push_back("xnorm[" + param + "=" + v + "]");
      names.push_back("V[" + param + "=" + v + "]");
    }
    w.header(names);
    const std::size_t n = std::max<std::size_t>(grid_points, 2);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = t_max * static_cast<double>(k) /
                       static_cast<double>(n - 1);
      std::vector<double> row = {t};
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& tr = sr.runs[i].traj;
        // A failed or shorter run contributes NaN beyond its last sample.
        if (tr.empty() || t > tr.times.back() + 1e-12) {
          row.push_back(std::numeric_limits<double>::quiet_NaN());
          row.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
          row.push_back(tr.state_at(t).norm());
          row.push_back(tr.value_at(tr.V, t));
        }
      }
      w.row(row);
    }
  }
  return sr;
}

}  // namespace softreset
