#pragma once

#include "softreset/gamma_policy.hpp"
#include "softreset/interconnect.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace softreset {

/// Worst-case residual of an inequality over a sample set. A residual is
/// "lhs - rhs" of some "lhs <= rhs" claim, so positive values are
/// violations.
struct ScanResult {
  double max_residual = -std::numeric_limits<double>::infinity();
  Vec worst_sample;
  std::size_t n_samples = 0;
  std::size_t n_positive = 0;  // samples with residual > 0
};

/// Uniform i.i.d. samples over the box [lo, hi]^dim, one sample per column.
/// Deterministic in the seed; generation is serial so results do not depend
/// on thread count.
Mat sample_box(std::uint64_t seed, std::size_t n, double lo, double hi,
               int dim);

using ResidualFn = std::function<double(const Vec&)>;

/// Serial reference kernel, kept as the oracle for the parallel one.
ScanResult scan_max_residual_serial(const Mat& samples, const ResidualFn& f);

/// OpenMP kernel; max-reduction over columns. Produces exactly the
/// serial result (max is order-independent).
ScanResult scan_max_residual(const Mat& samples, const ResidualFn& f);

/// Residual of the soft-reset strict-passivity inequality at one point and
/// one selection s:
///   <grad V_c, f_c - gamma (s+1)(x_c - g_c)>
///     - (y_c'u_c - rho0 |y_c|^2 - gamma0 max{0,phi} phi / max{1, sigma1^2}).
double passivity_residual(const ControllerSpec& ctrl,
                          const QuadraticEnergy& energy,
                          const GammaPolicy& gamma, double rho0, double gamma0,
                          const Vec& z, double s);

/// Worst passivity residual over samples, taking the worse of the two
/// extreme selections of SGN(phi) at each point.
ScanResult scan_passivity(const ControllerSpec& ctrl,
                          const QuadraticEnergy& energy,
                          const GammaPolicy& gamma, double rho0, double gamma0,
                          const Mat& samples, bool parallel = true);

/// Worst closed-loop dissipation residual <grad V(x), f> over sampled
/// closed-loop states and extreme selections, relative to tol_rel * |V(x)|.
ScanResult scan_dissipation(const ClosedLoop& loop,
                            const QuadraticEnergy& ctrl_energy,
                            const Mat& samples, bool parallel = true);

/// Worst jump-dissipation residual V_c(g_c(z)) - V_c(x_c) over sampled
/// points of the jump set (samples outside the jump set contribute zero).
ScanResult scan_jump_dissipation(const ControllerSpec& ctrl,
                                 const QuadraticEnergy& energy,
                                 const Mat& samples, bool parallel = true);

}  // namespace softreset
