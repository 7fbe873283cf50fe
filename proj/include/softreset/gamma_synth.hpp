#pragma once

#include "softreset/di_core.hpp"
#include "softreset/gamma_policy.hpp"

namespace softreset {

/// Scalar first-order reset element coefficients plus the certificate
/// parameters (energy gain kappa, dissipation gain rho0, sector margin eps).
struct ForeParams {
  double a_c = 1.0;
  double b_c = 1.0;
  double c_c = 1.0;
  double d_c = 0.01;
  double r_c = 0.0;  // jump map: g_c = r_c x_c + p_c u_c
  double p_c = 0.0;
  double kappa = 0.25;  // V_c(x) = kappa x^2, kappa > 0
  double rho0 = 1e-3;   // rho(y) = rho0 y^2
  double eps = 1e-2;    // sector margin, eps > 0

  void validate() const;
};

/// 2x2 certificate matrix for the scalar FORE:
///   [ 2 kappa a + rho0 c^2          kappa b + rho0 c d - c/2 ]
///   [ kappa b + rho0 c d - c/2      -d + rho0 d^2            ]
Mat m0_matrix(const ForeParams& p);

/// S-procedure feasibility at a fixed multiplier: true iff
/// lambda (M - eps I) - M0 is positive semidefinite (up to -tol on the
/// smallest eigenvalue) and the flow sector {z' M z <= 0} contains a
/// nonzero point (smallest eigenvalue of M <= 0).
bool s_procedure_check(const Mat& M, const Mat& M0, double eps, double lambda,
                       double tol);

/// Symmetric positive-semidefiniteness test: symmetrize, then check the
/// smallest eigenvalue against -tol (default 1e-10 * (1 + |A|)).
bool is_psd(const Mat& A, double tol = -1.0);

/// Exact reset-displacement majorant |M (g_hat(z) + z)| with
/// g_hat(z) = (g_c(x_c,u_c), u_c). Tightest admissible choice.
double sigma1(const ControllerSpec& ctrl, const Vec& z);

/// Flow-excess majorant: max{0, <grad V_c, f_c> - y_c'u_c + rho0 |y_c|^2}
/// outside the relaxed flow sector C_eps = {z' M z <= eps |z|^2}, zero
/// inside it.
double sigma2(const ControllerSpec& ctrl, const QuadraticEnergy& energy,
              double rho0, double eps, const Vec& z);

/// Wraps sigma1/sigma2 for this controller into a synthesized GammaPolicy
/// evaluating max{gamma_bound, floor} (floor <= 0 selects gamma0/(2 mu)).
GammaPolicy synthesize_gamma(const ControllerSpec& ctrl,
                             const QuadraticEnergy& energy, double rho0,
                             double eps, double gamma0, double floor = -1.0);

}  // namespace softreset
