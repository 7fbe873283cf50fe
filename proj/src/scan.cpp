#include "softreset/scan.hpp"

#include "softreset/gamma_synth.hpp"

#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace softreset {

Mat sample_box(std::uint64_t seed, std::size_t n, double lo, double hi,
               int dim) {
  if (hi <= lo) throw std::invalid_argument("sample_box: need lo < hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  Mat out(dim, static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (int i = 0; i < dim; ++i) out(i, j) = uni(rng);
  }
  return out;
}

ScanResult scan_max_residual_serial(const Mat& samples, const ResidualFn& f) {
  ScanResult res;
  res.n_samples = static_cast<std::size_t>(samples.cols());
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const Vec z = samples.col(j);
    const double r = f(z);
    if (r > 0.0) ++res.n_positive;
    if (r > res.max_residual) {
      res.max_residual = r;
      res.worst_sample = z;
    }
  }
  return res;
}

ScanResult scan_max_residual(const Mat& samples, const ResidualFn& f) {
  const Eigen::Index n = samples.cols();
  ScanResult res;
  res.n_samples = static_cast<std::size_t>(n);

#ifdef _OPENMP
  const int nthreads = omp_get_max_threads();
  std::vector<ScanResult> partial(nthreads);
#pragma omp parallel
  {
    ScanResult local;
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec z = samples.col(j);
      const double r = f(z);
      if (r > 0.0) ++local.n_positive;
      if (r > local.max_residual) {
        local.max_residual = r;
        local.worst_sample = z;
      }
    }
    partial[omp_get_thread_num()] = std::move(local);
  }
  for (const auto& p : partial) {
    res.n_positive += p.n_positive;
    if (p.max_residual > res.max_residual) {
      res.max_residual = p.max_residual;
      res.worst_sample = p.worst_sample;
    }
  }
  return res;
#else
  return scan_max_residual_serial(samples, f);
#endif
}

double passivity_residual(const ControllerSpec& ctrl,
                          const QuadraticEnergy& energy,
                          const GammaPolicy& gamma, double rho0, double gamma0,
                          const Vec& z, double s) {
  const Vec x_c = z.head(ctrl.n_c);
  const Vec u_c = z.tail(ctrl.m_c);
  const double ph = phi(ctrl, x_c, u_c);
  if (!sgn_set(ph).contains(s)) {
    throw std::invalid_argument("passivity_residual: s not in SGN(phi)");
  }
  const Vec rhs = soft_reset_rhs(ctrl, gamma, x_c, u_c, s);
  const Vec y_c = ctrl.h_c(x_c, u_c);
  const double s1 = sigma1(ctrl, z);
  const double penalty =
      gamma0 * std::max(0.0, ph) * ph / std::max(1.0, s1 * s1);
  const double supply = y_c.dot(u_c) - rho0 * y_c.squaredNorm() - penalty;
  return energy.gradient(x_c).dot(rhs) - supply;
}

namespace {

ScanResult run_scan(const Mat& samples, const ResidualFn& f, bool parallel) {
  return parallel ? scan_max_residual(samples, f)
                  : scan_max_residual_serial(samples, f);
}

}  // namespace

ScanResult scan_passivity(const ControllerSpec& ctrl,
                          const QuadraticEnergy& energy,
                          const GammaPolicy& gamma, double rho0, double gamma0,
                          const Mat& samples, bool parallel) {
  ResidualFn f = [&](const Vec& z) {
    const Vec x_c = z.head(ctrl.n_c);
    const Vec u_c = z.tail(ctrl.m_c);
    const auto sel = sgn_set(phi(ctrl, x_c, u_c));
    double worst =
        passivity_residual(ctrl, energy, gamma, rho0, gamma0, z, sel.lo);
    if (!sel.degenerate()) {
      worst = std::max(worst, passivity_residual(ctrl, energy, gamma, rho0,
                                                 gamma0, z, sel.hi));
    }
    return worst;
  };
  return run_scan(samples, f, parallel);
}

ScanResult scan_dissipation(const ClosedLoop& loop,
                            const QuadraticEnergy& ctrl_energy,
                            const Mat& samples, bool parallel) {
  const int n_p = loop.plant().n_p;
  const int n_c = loop.controller().n_c;
  if (samples.rows() != n_p + n_c) {
    throw std::invalid_argument("scan_dissipation: sample dimension mismatch");
  }
  ResidualFn f = [&](const Vec& x) {
    const auto st = loop.split(x);
    Vec grad(x.size());
    grad << loop.plant().grad_V_p(st.x_p), ctrl_energy.gradient(st.x_c);
    const auto sel = sgn_set(loop.phi_at(0.0, x));
    double worst = grad.dot(loop.rhs(0.0, x, sel.lo));
    if (!sel.degenerate()) {
      worst = std::max(worst, grad.dot(loop.rhs(0.0, x, sel.hi)));
    }
    return worst;
  };
  return run_scan(samples, f, parallel);
}

ScanResult scan_jump_dissipation(const ControllerSpec& ctrl,
                                 const QuadraticEnergy& energy,
                                 const Mat& samples, bool parallel) {
  ResidualFn f = [&](const Vec& z) {
    const Vec x_c = z.head(ctrl.n_c);
    const Vec u_c = z.tail(ctrl.m_c);
    if (phi(ctrl, x_c, u_c) < 0.0) return 0.0;  // not in the jump set
    return energy.value(ctrl.g_c(x_c, u_c)) - energy.value(x_c);
  };
  return run_scan(samples, f, parallel);
}

}  // namespace softreset
