#pragma once

#include "softreset/di_core.hpp"
#include "softreset/gamma_policy.hpp"

#include <optional>

namespace softreset {

/// Soft-reset right-hand side at one admissible selection s of SGN(phi):
///   f_c(x_c,u_c) - gamma(x_c,u_c) (s+1) (x_c - g_c(x_c,u_c)).
/// Throws std::invalid_argument when the gain evaluates non-positive
/// (the gain must map into the strictly positive reals).
Vec soft_reset_rhs(const ControllerSpec& ctrl, const GammaPolicy& gamma,
                   const Vec& x_c, const Vec& u_c, double s);

/// Exogenous channel of the interconnection: u_c = u1 - y_p, u_p = u2 + y_c.
/// Null functions mean zero, recovering the pure negative feedback loop.
struct Exogenous {
  std::function<Vec(double, const ClosedLoopState&)> u1;
  std::function<Vec(double, const ClosedLoopState&)> u2;
};

/// Negative-feedback interconnection of a passive plant and a soft-reset
/// controller. The closed-loop field decomposes as
///   F(x) = drift(x) + (SGN(phi(x)) + 1) omega(x),
/// and rhs(t, x, s) evaluates one selection. A gain policy of exactly zero
/// (GammaPolicy::none) drops the reset term, which is the "no reset action"
/// override used to demonstrate instability without resets.
class ClosedLoop {
 public:
  ClosedLoop(PlantSpec plant, ControllerSpec ctrl, GammaPolicy gamma,
             Exogenous exo = {});

  int dim() const { return plant_.n_p + ctrl_.n_c; }

  Vec join(const ClosedLoopState& s) const;
  ClosedLoopState split(const Vec& x) const;

  Vec u_c(double t, const Vec& x) const;
  Vec y_p(const Vec& x) const;
  Vec y_c(double t, const Vec& x) const;
  double phi_at(double t, const Vec& x) const;

  /// Flow part of the field (plant driven by u_p, controller by f_c alone).
  Vec drift(double t, const Vec& x) const;
  /// Reset pull direction, zero in the plant block:
  /// -gamma(x_c,u_c) (x_c - g_c(x_c,u_c)).
  Vec omega(double t, const Vec& x) const;
  /// drift + (s+1) omega for one admissible selection s.
  Vec rhs(double t, const Vec& x, double s) const;

  const PlantSpec& plant() const { return plant_; }
  const ControllerSpec& controller() const { return ctrl_; }
  const GammaPolicy& gamma() const { return gamma_; }
  bool has_reset_term() const { return reset_active_; }

 private:
  PlantSpec plant_;
  ControllerSpec ctrl_;
  GammaPolicy gamma_;
  Exogenous exo_;
  bool reset_active_ = true;
};

/// Builds the closed loop; throws std::invalid_argument on m_c != m_p.
ClosedLoop interconnect(PlantSpec plant, ControllerSpec ctrl,
                        GammaPolicy gamma, Exogenous exo = {});

}  // namespace softreset
