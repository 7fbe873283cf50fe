#pragma once

#include "softreset/di_core.hpp"
#include "softreset/gamma_synth.hpp"

#include <string>
#include <vector>

namespace softreset {

/// Outcome of the construction-time certificate checks. Failures attach
/// warnings; construction still returns.
struct CertificateReport {
  bool s_procedure_ok = false;
  bool jump_lands_in_flow = false;
  bool minimum_phase = false;
  double m22 = 0.0;  // bottom-right entry of M, the jump-landing certificate
  std::vector<std::string> warnings;
};

struct Controller {
  ControllerSpec spec;
  QuadraticEnergy energy;
  CertificateReport cert;
};

/// Scalar first-order reset element with M = M0 + eps I and V_c = kappa x^2.
/// Runs the S-procedure (lambda = 1), jump-landing (m22 sign for the zero
/// reset map) and scalar minimum-phase (b c > a d) checks.
Controller make_example1_fore(const ForeParams& p);

/// Multivariable first-order reset element: f = A_c x + B_c u, zero jump
/// map, h = C_c x, energy kappa_energy |x|^2. M defaults to the
/// velocity-sector form [[0, -I/2], [-I/2, 0]].
struct MimoForeParams {
  Mat A_c;
  Mat B_c;
  Mat C_c;
  double kappa_energy = 0.0;
  Mat M;  // empty selects the default sector matrix
};

Controller make_mimo_fore(const MimoForeParams& p);

/// [[0, -I/2], [-I/2, 0]] of size 2n: phi(z) = -x_c'u_c, the sector that
/// resets whenever the controller state opposes its input.
Mat velocity_sector_matrix(int n);

}  // namespace softreset
