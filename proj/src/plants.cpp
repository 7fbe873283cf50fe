#include "softreset/plants.hpp"

#include <Eigen/SVD>

#include <random>

namespace softreset {

// ----------------------------------------------------------------- TORA ---

void ToraParams::validate() const {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw std::invalid_argument("tora: sigma must lie in (0,1)");
  }
}

Vec tora_dynamics(const ToraParams& p, const Vec& state, double w) {
  const double th = state[0], thd = state[1], x = state[2], xd = state[3];
  const double u = -th + w;
  const double c = p.sigma * std::cos(th);
  const double det = 1.0 - c * c;  // >= 1 - sigma^2 > 0
  const double b1 = u;
  const double b2 = -x + p.sigma * thd * thd * std::sin(th);
  Vec out(4);
  out << thd, (b1 - c * b2) / det, xd, (b2 - c * b1) / det;
  return out;
}

double tora_storage(const ToraParams& p, const Vec& state) {
  const double th = state[0], thd = state[1], x = state[2], xd = state[3];
  const double c = p.sigma * std::cos(th);
  return 0.5 * (x * x + th * th) +
         0.5 * (thd * thd + 2.0 * c * thd * xd + xd * xd);
}

Vec tora_storage_gradient(const ToraParams& p, const Vec& state) {
  const double th = state[0], thd = state[1], x = state[2], xd = state[3];
  const double c = p.sigma * std::cos(th);
  Vec g(4);
  g << th - p.sigma * std::sin(th) * thd * xd,  // d/dtheta of the M(theta) form
      thd + c * xd, x, c * thd + xd;
  return g;
}

PlantSpec make_tora(const ToraParams& p) {
  p.validate();
  return make_plant(
      4, 1,
      [p](const Vec& x, const Vec& u) { return tora_dynamics(p, x, u[0]); },
      [](const Vec& x) { return Vec::Constant(1, x[1]); },
      [p](const Vec& x) { return tora_storage(p, x); },
      [p](const Vec& x) { return tora_storage_gradient(p, x); });
}

// ---------------------------------------------------------- manipulator ---

void ManipulatorParams::validate() const {
  if (rho <= 0.0) throw std::invalid_argument("manipulator: rho must be > 0");
  // Positive definiteness of the inertia matrix, sampled over the elbow
  // angle (the extremes sit at cos q2 = +-1).
  for (int i = 0; i <= 64; ++i) {
    const double c = -1.0 + 2.0 * i / 64.0;
    const double lead = theta1 + 2.0 * theta2 * c;
    const double det =
        theta3 * (theta1 + 2.0 * theta2 * c) - std::pow(theta3 + theta2 * c, 2);
    if (lead <= 0.0 || det <= 0.0) {
      throw std::invalid_argument(
          "manipulator: inertia coefficients give a non-PD mass matrix");
    }
  }
}

Mat manipulator_mass_matrix(const ManipulatorParams& p, const Vec& q) {
  const double c = std::cos(q[1]);
  Mat M(2, 2);
  M << p.theta1 + 2.0 * p.theta2 * c, p.theta3 + p.theta2 * c,
      p.theta3 + p.theta2 * c, p.theta3;
  return M;
}

Mat manipulator_coriolis(const ManipulatorParams& p, const Vec& q,
                         const Vec& qd) {
  const double s = p.theta2 * std::sin(q[1]);
  Mat C(2, 2);
  C << -s * qd[1], -s * (qd[0] + qd[1]), s * qd[0], 0.0;
  return C;
}

double manipulator_potential(const ManipulatorParams& p, const Vec& q) {
  const double e1 = q[0] - p.q_star[0];
  const double e2 = q[1] - p.q_star[1];
  return p.g1 * std::sin(q[0]) + p.g2 * std::sin(q[0] + q[1]) +
         0.5 * p.rho * (e1 * e1 + e2 * e2);
}

Vec manipulator_gravity(const ManipulatorParams& p, const Vec& q) {
  const double c1 = p.g1 * std::cos(q[0]);
  const double c12 = p.g2 * std::cos(q[0] + q[1]);
  Vec g(2);
  g << c1 + c12 + p.rho * (q[0] - p.q_star[0]), c12 + p.rho * (q[1] - p.q_star[1]);
  return g;
}

Vec manipulator_dynamics(const ManipulatorParams& p, const Vec& state,
                         const Vec& u) {
  const Vec q = state.head(2);
  const Vec qd = state.tail(2);
  const Mat M = manipulator_mass_matrix(p, q);
  const Vec rhs = u - manipulator_coriolis(p, q, qd) * qd -
                  manipulator_gravity(p, q);
  Vec out(4);
  out << qd, M.ldlt().solve(rhs);
  return out;
}

double manipulator_storage(const ManipulatorParams& p, const Vec& state) {
  const Vec q = state.head(2);
  const Vec qd = state.tail(2);
  const Mat M = manipulator_mass_matrix(p, q);
  return 0.5 * qd.dot(M * qd) + manipulator_potential(p, q) -
         manipulator_potential(p, Vec(p.q_star));
}

PlantSpec make_manipulator(const ManipulatorParams& p) {
  p.validate();
  const Vec q_star = p.q_star;
  auto absolute = [q_star](const Vec& xt) {
    Vec s(4);
    s << xt.head(2) + q_star, xt.tail(2);
    return s;
  };
  return make_plant(
      4, 2,
      [p, absolute](const Vec& xt, const Vec& u) {
        return manipulator_dynamics(p, absolute(xt), u);
      },
      [](const Vec& xt) { return Vec(xt.tail(2)); },
      [p, absolute](const Vec& xt) {
        return manipulator_storage(p, absolute(xt));
      },
      [p, absolute](const Vec& xt) {
        const Vec s = absolute(xt);
        const Vec q = s.head(2);
        const Vec qd = s.tail(2);
        // dV/dq2 picks up the configuration dependence of the inertia.
        const double dMdq2_term =
            -p.theta2 * std::sin(q[1]) * (qd[0] * qd[0] + qd[0] * qd[1]);
        const Vec g = manipulator_gravity(p, q);
        Vec grad(4);
        grad << g[0], g[1] + dMdq2_term, manipulator_mass_matrix(p, q) * qd;
        return grad;
      });
}

// ------------------------------------------------- strongly convex plant ---

double sc_penalty(double alpha, double r) {
  if (alpha <= 0.0 || alpha < 1e-300) return 0.0;
  return 0.5 * alpha * alpha * std::exp(-r / alpha);
}

double sc_penalty_derivative(double alpha, double r) {
  if (alpha <= 0.0 || alpha < 1e-300) return 0.0;
  return std::exp(-r / alpha) * (alpha + 0.5 * r);
}

double ScObjective::value(const Vec& x) const {
  const Vec s = A * x - b;
  double acc = 0.5 * x.squaredNorm();
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += sc_penalty(s[i], r);
  return acc;
}

Vec ScObjective::gradient(const Vec& x) const {
  const Vec s = A * x - b;
  Vec pd(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    pd[i] = sc_penalty_derivative(s[i], r);
  }
  return A.transpose() * pd + x;
}

ScObjective sc_generate(int n_p, int p, double L, double r,
                        std::uint64_t seed) {
  if (n_p < 1 || p < 1) {
    throw std::invalid_argument("sc_generate: dimensions must be >= 1");
  }
  if (L <= 1.0) throw std::invalid_argument("sc_generate: L must exceed 1");
  for (;;) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat A(p, n_p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < n_p; ++j) A(i, j) = normal(rng);
    }
    Vec b(p);
    for (int i = 0; i < p; ++i) b[i] = normal(rng);

    Eigen::JacobiSVD<Mat> svd(A);
    const double smax = svd.singularValues()[0];
    if (smax == 0.0) {
      ++seed;  // an all-zero draw cannot be rescaled
      continue;
    }
    A *= std::sqrt(L - 1.0) / smax;
    ScObjective obj;
    obj.A = std::move(A);
    obj.b = std::move(b);
    obj.r = r;
    obj.L = L;
    return obj;
  }
}

Vec sc_minimize(const ScObjective& obj, double tol, long max_iters) {
  Vec x = Vec::Zero(obj.dim());
  double fx = obj.value(x);
  double step = 1.0 / obj.L;
  for (long it = 0; it < max_iters; ++it) {
    const Vec g = obj.gradient(x);
    const double gn2 = g.squaredNorm();
    if (std::sqrt(gn2) <= tol) return x;
    // Backtracking from a step that is allowed to grow between iterations.
    double t = std::min(2.0 * step, 1.0);
    for (;;) {
      const Vec xn = x - t * g;
      const double fn = obj.value(xn);
      if (fn <= fx - 0.5 * t * gn2 || t < 1e-18) {
        x = xn;
        fx = fn;
        step = t;
        break;
      }
      t *= 0.5;
    }
  }
  throw std::runtime_error("sc_minimize: did not reach tolerance");
}

Vec gradient_flow_minimizer(const ScObjective& obj) {
  return sc_minimize(obj, 1e-11);
}

PlantSpec gradient_flow_plant(const ScObjective& obj) {
  const Vec x_star = gradient_flow_minimizer(obj);
  const double f_star = obj.value(x_star);
  const int n = obj.dim();
  return make_plant(
      n, n, [](const Vec&, const Vec& u) { return u; },
      [obj, x_star](const Vec& xt) { return obj.gradient(xt + x_star); },
      [obj, x_star, f_star](const Vec& xt) {
        return obj.value(xt + x_star) - f_star;
      },
      [obj, x_star](const Vec& xt) { return obj.gradient(xt + x_star); },
      /*origin_tol=*/1e-8);
}

}  // namespace softreset
