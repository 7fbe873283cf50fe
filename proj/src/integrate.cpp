#include "softreset/integrate.hpp"

#include <algorithm>
#include <deque>

namespace softreset {

namespace {

using FieldFn = std::function<Vec(double, const Vec&)>;

Vec rk4_step(const FieldFn& f, double t, const Vec& y, double h) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) pair. k1 is reused across accepted steps (FSAL);
// err receives the difference between the 5th- and 4th-order solutions.
Vec dp45_step(const FieldFn& f, double t, const Vec& y, double h, Vec& k1,
              Vec& k_last, Vec& err) {
  const Vec k2 = f(t + h / 5.0, y + h * (k1 / 5.0));
  const Vec k3 = f(t + 3.0 * h / 10.0, y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
  const Vec k4 = f(t + 4.0 * h / 5.0,
                   y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3));
  const Vec k5 =
      f(t + 8.0 * h / 9.0,
        y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                 64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4));
  const Vec k6 = f(t + h, y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                   46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                   5103.0 / 18656.0 * k5));
  const Vec y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                          125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                          11.0 / 84.0 * k6);
  const Vec k7 = f(t + h, y5);
  err = h * (71.0 / 57600.0 * k1 - 71.0 / 16695.0 * k3 + 71.0 / 1920.0 * k4 -
             17253.0 / 339200.0 * k5 + 22.0 / 525.0 * k6 - 1.0 / 40.0 * k7);
  k_last = k7;
  return y5;
}

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol,
                  double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc =
        atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = err[i] / sc;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

bool finite(const Vec& v) { return v.allFinite(); }

// Shared adaptive/fixed driver. on_accept is called after every accepted
// step with (t_old, x_old, t_new, x_new, h_taken); returning false rewinds
// nothing but stops the march (used by the hybrid executor at events).
class Stepper {
 public:
  Stepper(FieldFn f, const IntegratorConfig& cfg) : f_(std::move(f)), cfg_(cfg) {}

  // One accepted step from (t, x); updates them in place. Returns false on
  // failure with reason set.
  bool advance(double& t, Vec& x, double t_stop, std::string& reason) {
    if (cfg_.method == Method::FixedRK4) {
      const double h = std::min(cfg_.h, t_stop - t);
      const Vec xn = rk4_step(f_, t, x, h);
      if (!finite(xn)) {
        reason = "non-finite state";
        return false;
      }
      t += h;
      x = xn;
      last_h_ = h;
      return true;
    }
    if (!k1_valid_) {
      k1_ = f_(t, x);
      k1_valid_ = true;
    }
    double h = std::min(h_next_, t_stop - t);
    for (;;) {
      Vec err, k_last;
      const Vec xn = dp45_step(f_, t, x, h, k1_, k_last, err);
      double en;
      if (!finite(xn) || !finite(err)) {
        en = 1e10;  // force a rejection
      } else {
        en = error_norm(err, x, xn, cfg_.atol, cfg_.rtol);
      }
      if (en <= 1.0) {
        t += h;
        x = xn;
        k1_ = k_last;  // FSAL
        last_h_ = h;
        const double fac =
            std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
        h_next_ = std::min(h * fac, cfg_.h_max);
        return true;
      }
      const double fac = std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
      h *= fac;
      if (h < cfg_.h_min) {
        reason = "step size underflow";
        return false;
      }
    }
  }

  void reset_fsal() { k1_valid_ = false; }
  double last_h() const { return last_h_; }

 private:
  FieldFn f_;
  IntegratorConfig cfg_;
  Vec k1_;
  bool k1_valid_ = false;
  double h_next_ = 1e-4;
  double last_h_ = 0.0;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (boundary_layer <= 0.0) {
    throw std::invalid_argument("boundary_layer must be > 0");
  }
  if (t_end <= 0.0) throw std::invalid_argument("t_end must be > 0");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (method == Method::FixedRK4) {
    if (h <= 0.0) throw std::invalid_argument("fixed step h must be > 0");
  } else {
    if (h_min <= 0.0 || h_max <= h_min) {
      throw std::invalid_argument("need 0 < h_min < h_max");
    }
    if (rtol <= 0.0 || atol <= 0.0) {
      throw std::invalid_argument("rtol and atol must be > 0");
    }
  }
}

void HybridConfig::validate() const {
  if (max_jumps < 1) throw std::invalid_argument("max_jumps must be >= 1");
  if (jump_dwell < 0.0) throw std::invalid_argument("jump_dwell must be >= 0");
}

Vec Trajectory::state_at(double t) const {
  if (times.empty()) throw std::invalid_argument("empty trajectory");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[i - 1], t1 = times[i];
  if (t1 <= t0) return states[i];
  const double a = (t - t0) / (t1 - t0);
  return (1.0 - a) * states[i - 1] + a * states[i];
}

double Trajectory::value_at(const std::vector<double>& series, double t) const {
  if (times.empty() || series.size() != times.size()) {
    throw std::invalid_argument("series/time mismatch");
  }
  if (t <= times.front()) return series.front();
  if (t >= times.back()) return series.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times.begin());
  const double t0 = times[i - 1], t1 = times[i];
  if (t1 <= t0) return series[i];
  const double a = (t - t0) / (t1 - t0);
  return (1.0 - a) * series[i - 1] + a * series[i];
}

namespace {

void record_sample(Trajectory& traj, const ClosedLoop& loop,
                   const QuadraticEnergy& energy, double t, const Vec& x) {
  const auto s = loop.split(x);
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.y_c.push_back(loop.y_c(t, x));
  traj.y_p.push_back(loop.y_p(x));
  traj.phi_values.push_back(loop.phi_at(t, x));
  const double vp = loop.plant().V_p(s.x_p);
  const double vc = energy.value(s.x_c);
  traj.V_p.push_back(vp);
  traj.V_c.push_back(vc);
  traj.V.push_back(vp + vc);
}

}  // namespace

Trajectory integrate_soft(const ClosedLoop& loop,
                          const QuadraticEnergy& ctrl_energy,
                          const IntegratorConfig& cfg,
                          const ClosedLoopState& x0) {
  cfg.validate();
  if (x0.x_p.size() != loop.plant().n_p || x0.x_c.size() != loop.controller().n_c) {
    throw std::invalid_argument("initial state dimension mismatch");
  }
  // Stiffness guard for the fixed-step method: the pull term makes the
  // field stiff with rate ~2*gamma, and RK4 is only provided for smooth
  // convergence studies.
  if (cfg.method == Method::FixedRK4 && loop.gamma().is_constant() &&
      cfg.h * loop.gamma().lower_bound() > 0.5) {
    throw std::invalid_argument(
        "fixed-step h * gamma exceeds 0.5; use the adaptive method");
  }

  const int n_c = loop.controller().n_c;
  const double delta = cfg.boundary_layer;
  FieldFn field = [&loop, n_c, delta](double t, const Vec& x) -> Vec {
    const double ph = loop.phi_at(t, x);
    const Vec uc = loop.u_c(t, x);
    const double z2 = x.tail(n_c).squaredNorm() + uc.squaredNorm();
    const double s = std::clamp(ph / (delta * (1.0 + z2)), -1.0, 1.0);
    return loop.rhs(t, x, s);
  };

  Trajectory traj;
  Vec x = loop.join(x0);
  double t = 0.0;
  record_sample(traj, loop, ctrl_energy, t, x);

  Stepper stepper(field, cfg);
  std::string reason;
  int since_record = 0;
  const bool per_step_guard =
      cfg.method == Method::FixedRK4 && !loop.gamma().is_constant();
  while (t < cfg.t_end) {
    if (!stepper.advance(t, x, cfg.t_end, reason)) {
      traj.aborted = true;
      traj.abort_reason = reason;
      break;
    }
    if (per_step_guard) {
      const Vec uc = loop.u_c(t, x);
      if (cfg.h * loop.gamma()(x.tail(n_c), uc) > 0.5) {
        traj.aborted = true;
        traj.abort_reason = "stiffness guard: h * gamma > 0.5";
        break;
      }
    }
    if (++since_record >= cfg.record_stride || t >= cfg.t_end) {
      record_sample(traj, loop, ctrl_energy, t, x);
      since_record = 0;
    }
  }
  if (traj.aborted && traj.times.back() < t) {
    record_sample(traj, loop, ctrl_energy, t, x);
  }
  return traj;
}

Trajectory integrate_hard(const PlantSpec& plant, const ControllerSpec& ctrl,
                          const QuadraticEnergy& ctrl_energy,
                          const IntegratorConfig& cfg,
                          const HybridConfig& hcfg,
                          const ClosedLoopState& x0) {
  cfg.validate();
  hcfg.validate();
  // Pure-flow field of the same interconnection; resets enter only through
  // the jump map below.
  ClosedLoop loop(plant, ctrl, GammaPolicy::none(), {});
  if (x0.x_p.size() != plant.n_p || x0.x_c.size() != ctrl.n_c) {
    throw std::invalid_argument("initial state dimension mismatch");
  }

  FieldFn field = [&loop](double t, const Vec& x) { return loop.drift(t, x); };
  auto phi_of = [&loop](double t, const Vec& x) { return loop.phi_at(t, x); };

  Trajectory traj;
  Vec x = loop.join(x0);
  double t = 0.0;
  double dwell_until = 0.0;

  std::deque<double> window;  // jump times within the trailing unit interval
  auto register_jump = [&](double tj) -> bool {
    window.push_back(tj);
    while (!window.empty() && window.front() < tj - 1.0) window.pop_front();
    if (static_cast<long>(window.size()) > hcfg.max_jumps) {
      traj.zeno_tripped = true;
      return false;
    }
    return true;
  };

  // Applies jumps at the current point while the state sits in the jump
  // set and the dwell has elapsed. Returns false when the Zeno guard trips.
  auto attempt_jumps = [&]() -> bool {
    while (phi_of(t, x) >= 0.0 && t >= dwell_until) {
      if (!register_jump(t)) return false;
      const Vec xc = x.tail(ctrl.n_c);
      const Vec uc = loop.u_c(t, x);
      const Vec xc_plus = ctrl.g_c(xc, uc);
      record_sample(traj, loop, ctrl_energy, t, x);
      traj.jumps.push_back(
          {t, ctrl_energy.value(xc), ctrl_energy.value(xc_plus)});
      ++traj.jump_count;
      x.tail(ctrl.n_c) = xc_plus;
      record_sample(traj, loop, ctrl_energy, t, x);
      dwell_until = t + hcfg.jump_dwell;
      if (hcfg.jump_dwell == 0.0 && phi_of(t, x) >= 0.0) {
        // Jump landed back in the jump set with no dwell to force flow;
        // keep jumping until the Zeno guard speaks.
        continue;
      }
      break;
    }
    return true;
  };

  record_sample(traj, loop, ctrl_energy, t, x);
  if (phi_of(t, x) > 0.0) {
    if (!attempt_jumps()) return traj;
  }

  Stepper stepper(field, cfg);
  std::string reason;
  int since_record = 0;
  const double event_tol = 1e-10;  // bisection window in time

  while (t < cfg.t_end) {
    const double t_old = t;
    const Vec x_old = x;
    const double phi_old = phi_of(t_old, x_old);
    if (!stepper.advance(t, x, cfg.t_end, reason)) {
      traj.aborted = true;
      traj.abort_reason = reason;
      break;
    }
    const double h_taken = stepper.last_h();
    const double phi_new = phi_of(t, x);

    const bool dwell_elapsed = t >= dwell_until;
    if (phi_new > 0.0 && dwell_elapsed) {
      if (phi_old <= 0.0) {
        // Bracketed upward crossing: bisect on the step fraction.
        double lo = 0.0, hi = 1.0;
        Vec x_hi = x;
        while ((hi - lo) * h_taken > event_tol) {
          const double mid = 0.5 * (lo + hi);
          const Vec x_mid = rk4_step(field, t_old, x_old, mid * h_taken);
          if (phi_of(t_old + mid * h_taken, x_mid) > 0.0) {
            hi = mid;
            x_hi = x_mid;
          } else {
            lo = mid;
          }
        }
        t = t_old + hi * h_taken;
        x = x_hi;
      }
      // Either we relocated onto the crossing or the whole step sat in the
      // jump set (dwell just expired): jump here.
      if (!attempt_jumps()) break;
      stepper.reset_fsal();
      since_record = 0;
      continue;
    }

    if (++since_record >= cfg.record_stride || t >= cfg.t_end) {
      record_sample(traj, loop, ctrl_energy, t, x);
      since_record = 0;
    }
  }
  if ((traj.aborted || traj.zeno_tripped) && traj.times.back() < t) {
    record_sample(traj, loop, ctrl_energy, t, x);
  }
  return traj;
}

MonitorReport lyapunov_monitor(const Trajectory& traj, double tol_abs,
                               double tol_rel) {
  if (traj.empty()) {
    throw std::invalid_argument("lyapunov_monitor: empty trajectory");
  }
  MonitorReport rep;
  rep.v0 = traj.V.front();
  rep.increments.reserve(traj.V.size() > 0 ? traj.V.size() - 1 : 0);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < traj.V.size(); ++k) {
    const double d = traj.V[k + 1] - traj.V[k];
    rep.increments.push_back(d);
    worst = std::max(worst, d);
  }
  rep.max_increment = worst;
  rep.flagged = worst > tol_abs + tol_rel * rep.v0;
  return rep;
}

}  // namespace softreset
