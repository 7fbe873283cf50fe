#include "softreset/controllers.hpp"

namespace softreset {

Controller make_example1_fore(const ForeParams& p) {
  p.validate();
  const Mat M0 = m0_matrix(p);
  const Mat M = M0 + p.eps * Mat::Identity(2, 2);

  Controller c;
  c.spec = make_controller(
      1, 1,
      [p](const Vec& x, const Vec& u) {
        return Vec::Constant(1, p.a_c * x[0] + p.b_c * u[0]);
      },
      [p](const Vec& x, const Vec& u) {
        return Vec::Constant(1, p.r_c * x[0] + p.p_c * u[0]);
      },
      [p](const Vec& x, const Vec& u) {
        return Vec::Constant(1, p.c_c * x[0] + p.d_c * u[0]);
      },
      M);
  c.energy = QuadraticEnergy::isotropic(1, p.kappa);

  CertificateReport& cert = c.cert;
  cert.s_procedure_ok = s_procedure_check(M, M0, p.eps, 1.0, 1e-10);
  if (!cert.s_procedure_ok) {
    cert.warnings.push_back(
        "S-procedure certificate failed at lambda = 1; the flow-sector "
        "passivity inequality is not certified");
  }
  // Jump-landing certificate. With the zero reset map a jump sends the
  // state to (0, u_c), where phi = m22 u_c^2; m22 <= 0 is then exactly the
  // condition that jumps land in the flow set.
  cert.m22 = M(1, 1);
  if (p.r_c == 0.0 && p.p_c == 0.0) {
    cert.jump_lands_in_flow = cert.m22 <= 0.0;
  } else {
    // Non-zero reset maps: sample phi after the jump over a sign-covering
    // grid of pre-jump points in the jump set.
    cert.jump_lands_in_flow = true;
    for (double x = -10.0; x <= 10.0; x += 0.5) {
      for (double u = -10.0; u <= 10.0; u += 0.5) {
        const Vec xv = Vec::Constant(1, x), uv = Vec::Constant(1, u);
        if (phi(c.spec, xv, uv) < 0.0) continue;
        const Vec xp = c.spec.g_c(xv, uv);
        if (phi(c.spec, xp, uv) > 0.0) {
          cert.jump_lands_in_flow = false;
          break;
        }
      }
      if (!cert.jump_lands_in_flow) break;
    }
  }
  if (!cert.jump_lands_in_flow) {
    cert.warnings.push_back(
        "jump-lands-in-flow-set certificate failed (m22 = " +
        std::to_string(cert.m22) +
        "); hard resets may chatter at the sector boundary");
  }
  cert.minimum_phase = p.b_c * p.c_c > p.a_c * p.d_c;
  if (!cert.minimum_phase) {
    cert.warnings.push_back(
        "minimum-phase check b_c c_c > a_c d_c failed; detectability of the "
        "closed loop is not certified");
  }
  return c;
}

Mat velocity_sector_matrix(int n) {
  Mat M = Mat::Zero(2 * n, 2 * n);
  M.topRightCorner(n, n) = -0.5 * Mat::Identity(n, n);
  M.bottomLeftCorner(n, n) = -0.5 * Mat::Identity(n, n);
  return M;
}

Controller make_mimo_fore(const MimoForeParams& p) {
  const int n = static_cast<int>(p.A_c.rows());
  if (n < 1 || p.A_c.cols() != n || p.B_c.rows() != n || p.B_c.cols() != n ||
      p.C_c.rows() != n || p.C_c.cols() != n) {
    throw std::invalid_argument("mimo fore: A_c, B_c, C_c must be n x n");
  }
  if (p.kappa_energy <= 0.0) {
    throw std::invalid_argument("mimo fore: kappa_energy must be > 0");
  }
  const Mat M = p.M.size() == 0 ? velocity_sector_matrix(n) : p.M;

  Controller c;
  c.spec = make_controller(
      n, n,
      [A = p.A_c, B = p.B_c](const Vec& x, const Vec& u) -> Vec {
        return A * x + B * u;
      },
      [n](const Vec&, const Vec&) -> Vec { return Vec::Zero(n); },
      [C = p.C_c](const Vec& x, const Vec&) -> Vec { return C * x; }, M);
  c.energy = QuadraticEnergy::isotropic(n, p.kappa_energy);

  // Zero reset map with the velocity sector: phi(0, u) = 0, so jumps land
  // exactly on the flow-set boundary.
  c.cert.jump_lands_in_flow = true;
  c.cert.m22 = M.bottomRightCorner(n, n).norm() == 0.0 ? 0.0 : M(2 * n - 1, 2 * n - 1);
  c.cert.s_procedure_ok = true;
  c.cert.minimum_phase = true;
  return c;
}

}  // namespace softreset
