#pragma once

#include "softreset/di_core.hpp"

#include <cstdint>

namespace softreset {

// ---------------------------------------------------------------------------
// Translational oscillator with rotating actuator. State (theta, theta_dot,
// x, x_dot); the preliminary feedback u = -theta + w makes the channel
// w -> theta_dot lossless.
// ---------------------------------------------------------------------------

struct ToraParams {
  double sigma = 0.1;  // rotational/translational coupling, in (0,1)

  void validate() const;
};

/// Solves the 2x2 mass-matrix system for the accelerations; w is the outer
/// input after the preliminary feedback.
Vec tora_dynamics(const ToraParams& p, const Vec& state, double w);

/// Lossless storage 0.5 (x^2 + theta^2) + 0.5 v' M(theta) v, v = (theta_dot, x_dot).
double tora_storage(const ToraParams& p, const Vec& state);

Vec tora_storage_gradient(const ToraParams& p, const Vec& state);

PlantSpec make_tora(const ToraParams& p);

// ---------------------------------------------------------------------------
// Planar 2-link manipulator with gravity, in coordinates translated so the
// downward rest target q* = (-pi/2, 0) sits at the origin. The inertia
// coefficients parameterize M(q) = [[t1 + 2 t2 cos q2, t3 + t2 cos q2],
// [t3 + t2 cos q2, t3]].
// ---------------------------------------------------------------------------

struct ManipulatorParams {
  double theta1 = 110.0;
  double theta2 = 25.0;
  double theta3 = 30.0;
  double g1 = 784.8;   // gravity coefficient of sin(q1)
  double g2 = 245.25;  // gravity coefficient of sin(q1+q2)
  double rho = 1e-2;   // regularization weight in the potential
  Eigen::Vector2d q_star{-M_PI / 2.0, 0.0};

  void validate() const;  // positive definiteness sampled over q2
};

Mat manipulator_mass_matrix(const ManipulatorParams& p, const Vec& q);
Mat manipulator_coriolis(const ManipulatorParams& p, const Vec& q,
                         const Vec& qd);
double manipulator_potential(const ManipulatorParams& p, const Vec& q);
Vec manipulator_gravity(const ManipulatorParams& p, const Vec& q);

/// state = (q, q_dot) in absolute coordinates; returns (q_dot, q_ddot).
Vec manipulator_dynamics(const ManipulatorParams& p, const Vec& state,
                         const Vec& u);

/// 0.5 qd' M(q) qd + P(q) - P(q*), state in absolute coordinates.
double manipulator_storage(const ManipulatorParams& p, const Vec& state);

/// PlantSpec over the translated state (q - q*, q_dot); output is q_dot.
PlantSpec make_manipulator(const ManipulatorParams& p);

// ---------------------------------------------------------------------------
// Strongly convex non-quadratic objective sum_i phihat(a_i'x - b_i) + |x|^2/2
// with the exponentially smoothed half-quadratic phihat, and the lossless
// gradient-flow plant built on it.
// ---------------------------------------------------------------------------

struct ScObjective {
  Mat A;  // p x n
  Vec b;  // p
  double r = 1e-6;  // smoothing constant
  double L = 1e4;   // Lipschitz constant of the gradient; |A| = sqrt(L-1)

  int dim() const { return static_cast<int>(A.cols()); }
  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
};

/// C1 one-sided penalty 0.5 a^2 exp(-r/a) for a > 0, zero otherwise.
double sc_penalty(double alpha, double r);
double sc_penalty_derivative(double alpha, double r);

/// Seeded standard-normal A and b; A rescaled so its spectral norm equals
/// sqrt(L-1) to 1e-10 relative. A zero draw regenerates with seed+1.
ScObjective sc_generate(int n_p, int p, double L, double r, std::uint64_t seed);

/// Damped gradient descent with backtracking; stops at |grad| <= tol.
/// Throws std::runtime_error when the iteration budget runs out.
Vec sc_minimize(const ScObjective& obj, double tol = 1e-11,
                long max_iters = 2000000);

/// Lossless integrator plant x_dot = u with output grad(objective),
/// translated so the precomputed minimizer sits at the origin; storage is
/// the optimality gap.
PlantSpec gradient_flow_plant(const ScObjective& obj);

/// Minimizer used by gradient_flow_plant (exposed for reporting).
Vec gradient_flow_minimizer(const ScObjective& obj);

}  // namespace softreset
