#include "softreset/di_core.hpp"

#include <Eigen/Eigenvalues>

namespace softreset {

SignInterval sgn_set(double s) {
  if (!std::isfinite(s)) {
    throw std::domain_error("sgn_set: argument must be finite");
  }
  if (s > 0.0) return {1.0, 1.0};
  if (s < 0.0) return {-1.0, -1.0};
  return {-1.0, 1.0};
}

namespace detail {
void require_dims(const ControllerSpec& ctrl, const Vec& x_c, const Vec& u_c) {
  if (x_c.size() != ctrl.n_c || u_c.size() != ctrl.m_c) {
    throw std::invalid_argument("controller argument dimension mismatch");
  }
}
}  // namespace detail

namespace {

void check_vanishes(const Vec& v, const char* name, double tol = 0.0) {
  if (v.lpNorm<Eigen::Infinity>() > tol) {
    throw std::invalid_argument(std::string(name) +
                                " must vanish at the origin");
  }
}

}  // namespace

ControllerSpec make_controller(int n_c, int m_c, StateInputMap f_c,
                               StateInputMap g_c, StateInputMap h_c, Mat M) {
  if (n_c < 1 || m_c < 1) {
    throw std::invalid_argument("controller dimensions must be positive");
  }
  const int n = n_c + m_c;
  if (M.rows() != n || M.cols() != n) {
    throw std::invalid_argument("M must be (n_c+m_c) square");
  }
  ControllerSpec ctrl;
  ctrl.n_c = n_c;
  ctrl.m_c = m_c;
  ctrl.f_c = std::move(f_c);
  ctrl.g_c = std::move(g_c);
  ctrl.h_c = std::move(h_c);
  ctrl.M = 0.5 * (M + M.transpose());  // exact symmetry by construction

  const Vec x0 = Vec::Zero(n_c);
  const Vec u0 = Vec::Zero(m_c);
  check_vanishes(ctrl.f_c(x0, u0), "f_c");
  check_vanishes(ctrl.g_c(x0, u0), "g_c");
  check_vanishes(ctrl.h_c(x0, u0), "h_c");
  return ctrl;
}

double phi(const ControllerSpec& ctrl, const Vec& x_c, const Vec& u_c) {
  detail::require_dims(ctrl, x_c, u_c);
  Vec z(ctrl.n_c + ctrl.m_c);
  z << x_c, u_c;
  return z.dot(ctrl.M * z);
}

QuadraticEnergy QuadraticEnergy::from_matrix(Mat P) {
  if (P.rows() != P.cols() || P.rows() < 1) {
    throw std::invalid_argument("P must be square and nonempty");
  }
  QuadraticEnergy e;
  e.P = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(e.P);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 0.0) {
    throw std::invalid_argument("P must be positive definite");
  }
  e.mu = lmin;
  return e;
}

QuadraticEnergy QuadraticEnergy::isotropic(int n, double kappa) {
  if (kappa <= 0.0) {
    throw std::invalid_argument("kappa must be positive");
  }
  QuadraticEnergy e;
  e.P = kappa * Mat::Identity(n, n);
  e.mu = kappa;
  return e;
}

PlantSpec make_plant(int n_p, int m_p, StateInputMap f_p, StateMap h_p,
                     ScalarField V_p, StateMap grad_V_p, double origin_tol) {
  if (n_p < 1 || m_p < 1) {
    throw std::invalid_argument("plant dimensions must be positive");
  }
  PlantSpec plant;
  plant.n_p = n_p;
  plant.m_p = m_p;
  plant.f_p = std::move(f_p);
  plant.h_p = std::move(h_p);
  plant.V_p = std::move(V_p);
  plant.grad_V_p = std::move(grad_V_p);

  const Vec x0 = Vec::Zero(n_p);
  const Vec u0 = Vec::Zero(m_p);
  check_vanishes(plant.f_p(x0, u0), "f_p", origin_tol);
  check_vanishes(plant.h_p(x0), "h_p", origin_tol);
  if (std::abs(plant.V_p(x0)) > origin_tol) {
    throw std::invalid_argument("V_p must vanish at the origin");
  }
  return plant;
}

JumpDecision hard_reset_step(const ControllerSpec& ctrl, const Vec& x_c,
                             const Vec& u_c) {
  detail::require_dims(ctrl, x_c, u_c);
  JumpDecision d;
  if (phi(ctrl, x_c, u_c) >= 0.0) {
    d.jump = true;
    d.x_c_plus = ctrl.g_c(x_c, u_c);
  } else {
    d.jump = false;
    d.x_c_plus = x_c;
  }
  return d;
}

}  // namespace softreset
