#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace softreset {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using StateInputMap = std::function<Vec(const Vec&, const Vec&)>;
using StateMap = std::function<Vec(const Vec&)>;
using ScalarField = std::function<double(const Vec&)>;

/// Admissible selection set of the set-valued sign map at one argument.
/// Degenerate ([lo,lo]) away from zero, the full interval [-1,1] at zero.
struct SignInterval {
  double lo;
  double hi;

  bool contains(double s) const { return s >= lo && s <= hi; }
  bool degenerate() const { return lo == hi; }
};

/// SGN(s): {1} for s>0, {-1} for s<0, [-1,1] for s=0.
/// Throws std::domain_error on non-finite input.
SignInterval sgn_set(double s);

/// Reset controller data (flow map, jump map, output map, sector matrix).
/// M is stored exactly symmetric; the maps must vanish at the origin.
struct ControllerSpec {
  int n_c = 0;  // state dimension
  int m_c = 0;  // input/output dimension
  StateInputMap f_c;  // flow map
  StateInputMap g_c;  // jump map
  StateInputMap h_c;  // output map
  Mat M;              // (n_c+m_c) x (n_c+m_c), symmetric
};

/// Validating constructor: symmetrizes M, checks dimensions and that
/// f_c, g_c, h_c vanish at the origin.
ControllerSpec make_controller(int n_c, int m_c, StateInputMap f_c,
                               StateInputMap g_c, StateInputMap h_c, Mat M);

/// phi(z) = z' M z with z = (x_c, u_c). Throws on dimension mismatch.
double phi(const ControllerSpec& ctrl, const Vec& x_c, const Vec& u_c);

/// Quadratic storage V(x) = x' P x with P symmetric positive definite.
/// mu is the strong-convexity modulus, equal to the smallest eigenvalue of P.
struct QuadraticEnergy {
  Mat P;
  double mu = 0.0;

  double value(const Vec& x) const { return x.dot(P * x); }
  Vec gradient(const Vec& x) const { return 2.0 * (P * x); }

  /// Builds from P (symmetrized); throws std::invalid_argument unless all
  /// eigenvalues are strictly positive.
  static QuadraticEnergy from_matrix(Mat P);

  /// Scalar/isotropic convenience: V(x) = kappa |x|^2.
  static QuadraticEnergy isotropic(int n, double kappa);
};

/// Passive plant: dynamics f_p(x_p, u_p), state-only output h_p(x_p),
/// storage V_p with gradient. h_p being state-only is what keeps the
/// negative-feedback loop free of algebraic loops.
struct PlantSpec {
  int n_p = 0;
  int m_p = 0;
  StateInputMap f_p;
  StateMap h_p;
  ScalarField V_p;
  StateMap grad_V_p;
};

/// Validating constructor: checks f_p(0,0)=0, h_p(0)=0, V_p(0)=0.
/// origin_tol admits plants translated by a numerically located
/// equilibrium, whose maps vanish at the origin only to solver accuracy.
PlantSpec make_plant(int n_p, int m_p, StateInputMap f_p, StateMap h_p,
                     ScalarField V_p, StateMap grad_V_p,
                     double origin_tol = 0.0);

struct ClosedLoopState {
  Vec x_p;
  Vec x_c;
};

/// Outcome of one hard-reset jump test at (x_c, u_c).
struct JumpDecision {
  bool jump = false;  // false: (x_c,u_c) not in the jump set, flow instead
  Vec x_c_plus;       // g_c(x_c,u_c) when jump is true, x_c otherwise
};

/// Jump when phi >= 0 (membership in D), otherwise signal "flow".
JumpDecision hard_reset_step(const ControllerSpec& ctrl, const Vec& x_c,
                             const Vec& u_c);

namespace detail {
void require_dims(const ControllerSpec& ctrl, const Vec& x_c, const Vec& u_c);
}

}  // namespace softreset
