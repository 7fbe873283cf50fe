#include "softreset/interconnect.hpp"

namespace softreset {

Vec soft_reset_rhs(const ControllerSpec& ctrl, const GammaPolicy& gamma,
                   const Vec& x_c, const Vec& u_c, double s) {
  detail::require_dims(ctrl, x_c, u_c);
  const double g = gamma(x_c, u_c);
  if (g <= 0.0) {
    throw std::invalid_argument(
        "soft_reset_rhs: gain must evaluate strictly positive");
  }
  return ctrl.f_c(x_c, u_c) - g * (s + 1.0) * (x_c - ctrl.g_c(x_c, u_c));
}

ClosedLoop::ClosedLoop(PlantSpec plant, ControllerSpec ctrl, GammaPolicy gamma,
                       Exogenous exo)
    : plant_(std::move(plant)),
      ctrl_(std::move(ctrl)),
      gamma_(std::move(gamma)),
      exo_(std::move(exo)) {
  if (ctrl_.m_c != plant_.m_p) {
    throw std::invalid_argument(
        "interconnect: controller and plant port dimensions differ");
  }
  reset_active_ = !(gamma_.is_constant() && gamma_.lower_bound() == 0.0);
}

ClosedLoop interconnect(PlantSpec plant, ControllerSpec ctrl,
                        GammaPolicy gamma, Exogenous exo) {
  return ClosedLoop(std::move(plant), std::move(ctrl), std::move(gamma),
                    std::move(exo));
}

Vec ClosedLoop::join(const ClosedLoopState& s) const {
  Vec x(dim());
  x << s.x_p, s.x_c;
  return x;
}

ClosedLoopState ClosedLoop::split(const Vec& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("closed-loop state dimension mismatch");
  }
  return {x.head(plant_.n_p), x.tail(ctrl_.n_c)};
}

Vec ClosedLoop::y_p(const Vec& x) const {
  return plant_.h_p(x.head(plant_.n_p));
}

Vec ClosedLoop::u_c(double t, const Vec& x) const {
  Vec u = -y_p(x);
  if (exo_.u1) u += exo_.u1(t, split(x));
  return u;
}

Vec ClosedLoop::y_c(double t, const Vec& x) const {
  return ctrl_.h_c(x.tail(ctrl_.n_c), u_c(t, x));
}

double ClosedLoop::phi_at(double t, const Vec& x) const {
  return phi(ctrl_, x.tail(ctrl_.n_c), u_c(t, x));
}

Vec ClosedLoop::drift(double t, const Vec& x) const {
  const Vec xp = x.head(plant_.n_p);
  const Vec xc = x.tail(ctrl_.n_c);
  const Vec uc = u_c(t, x);
  Vec up = ctrl_.h_c(xc, uc);
  if (exo_.u2) up += exo_.u2(t, split(x));

  Vec out(dim());
  out << plant_.f_p(xp, up), ctrl_.f_c(xc, uc);
  return out;
}

Vec ClosedLoop::omega(double t, const Vec& x) const {
  Vec out = Vec::Zero(dim());
  if (!reset_active_) return out;
  const Vec xc = x.tail(ctrl_.n_c);
  const Vec uc = u_c(t, x);
  out.tail(ctrl_.n_c) = -gamma_(xc, uc) * (xc - ctrl_.g_c(xc, uc));
  return out;
}

Vec ClosedLoop::rhs(double t, const Vec& x, double s) const {
  if (!reset_active_) return drift(t, x);
  return drift(t, x) + (s + 1.0) * omega(t, x);
}

}  // namespace softreset
