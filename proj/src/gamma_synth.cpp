#include "softreset/gamma_synth.hpp"

#include <Eigen/Eigenvalues>

namespace softreset {

void ForeParams::validate() const {
  if (kappa <= 0.0) throw std::invalid_argument("fore: kappa must be > 0");
  if (eps <= 0.0) throw std::invalid_argument("fore: eps must be > 0");
  if (rho0 < 0.0) throw std::invalid_argument("fore: rho0 must be >= 0");
}

Mat m0_matrix(const ForeParams& p) {
  const double m11 = 2.0 * p.kappa * p.a_c + p.rho0 * p.c_c * p.c_c;
  const double m12 = p.kappa * p.b_c + p.rho0 * p.c_c * p.d_c - 0.5 * p.c_c;
  const double m22 = -p.d_c + p.rho0 * p.d_c * p.d_c;
  Mat M0(2, 2);
  M0 << m11, m12, m12, m22;
  return M0;
}

bool is_psd(const Mat& A, double tol) {
  const Mat S = 0.5 * (A + A.transpose());
  if (tol < 0.0) {
    tol = 1e-10 * (1.0 + S.norm());
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool s_procedure_check(const Mat& M, const Mat& M0, double eps, double lambda,
                       double tol) {
  if (M.rows() != M0.rows() || M.cols() != M0.cols()) {
    throw std::invalid_argument("s_procedure_check: matrix sizes differ");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("s_procedure_check: lambda must be >= 0");
  }
  if (tol < 0.0) {
    throw std::invalid_argument("s_procedure_check: tol must be >= 0");
  }
  const Mat lhs =
      lambda * (M - eps * Mat::Identity(M.rows(), M.cols())) - M0;
  if (!is_psd(lhs, tol)) return false;

  // The flow sector must contain more points than just the origin.
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff() <= 0.0;
}

double sigma1(const ControllerSpec& ctrl, const Vec& z) {
  if (z.size() != ctrl.n_c + ctrl.m_c) {
    throw std::invalid_argument("sigma1: z dimension mismatch");
  }
  const Vec x_c = z.head(ctrl.n_c);
  const Vec u_c = z.tail(ctrl.m_c);
  Vec g_hat(z.size());
  g_hat << ctrl.g_c(x_c, u_c), u_c;
  return (ctrl.M * (g_hat + z)).norm();
}

double sigma2(const ControllerSpec& ctrl, const QuadraticEnergy& energy,
              double rho0, double eps, const Vec& z) {
  if (z.size() != ctrl.n_c + ctrl.m_c) {
    throw std::invalid_argument("sigma2: z dimension mismatch");
  }
  const double ph = z.dot(ctrl.M * z);
  if (ph <= eps * z.squaredNorm()) {
    return 0.0;  // inside C_eps the flow inequality already holds
  }
  const Vec x_c = z.head(ctrl.n_c);
  const Vec u_c = z.tail(ctrl.m_c);
  const Vec y_c = ctrl.h_c(x_c, u_c);
  const double excess = energy.gradient(x_c).dot(ctrl.f_c(x_c, u_c)) -
                        y_c.dot(u_c) + rho0 * y_c.squaredNorm();
  return std::max(0.0, excess);
}

GammaPolicy synthesize_gamma(const ControllerSpec& ctrl,
                             const QuadraticEnergy& energy, double rho0,
                             double eps, double gamma0, double floor) {
  MajorantFn s1 = [ctrl](const Vec& z) { return sigma1(ctrl, z); };
  MajorantFn s2 = [ctrl, energy, rho0, eps](const Vec& z) {
    return sigma2(ctrl, energy, rho0, eps, z);
  };
  return GammaPolicy::synthesized(gamma0, eps, energy.mu, std::move(s1),
                                  std::move(s2), floor);
}

}  // namespace softreset
