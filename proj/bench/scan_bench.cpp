// Compares the serial reference sampling kernels against the OpenMP ones
// on the strict-passivity scan, and reports integrator throughput on the
// oscillator benchmark.

#include "softreset/gamma_synth.hpp"
#include "softreset/controllers.hpp"
#include "softreset/integrate.hpp"
#include "softreset/plants.hpp"
#include "softreset/scan.hpp"

#include <chrono>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace softreset;
using clock_type = std::chrono::high_resolution_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (OpenMP disabled)\n";
#endif

  const Controller fore = make_example1_fore(ForeParams{});
  const GammaPolicy gamma = synthesize_gamma(
      fore.spec, fore.energy, ForeParams{}.rho0, ForeParams{}.eps, 1.0);

  for (const std::size_t n : {100000ul, 1000000ul}) {
    const Mat samples = sample_box(7, n, -10.0, 10.0, 2);

    auto t0 = clock_type::now();
    const ScanResult serial = scan_passivity(fore.spec, fore.energy, gamma,
                                             1e-3, 1.0, samples, false);
    const double ts = seconds_since(t0);

    t0 = clock_type::now();
    const ScanResult par =
        scan_passivity(fore.spec, fore.energy, gamma, 1e-3, 1.0, samples, true);
    const double tp = seconds_since(t0);

    std::cout << "passivity scan n=" << n << ": serial " << ts << " s, omp "
              << tp << " s, speedup " << ts / tp
              << ", max residual serial=" << serial.max_residual
              << " omp=" << par.max_residual << "\n";
    if (serial.max_residual != par.max_residual) {
      std::cout << "MISMATCH between serial and parallel kernels\n";
      return 1;
    }
  }

  {
    const PlantSpec tora = make_tora(ToraParams{});
    const ClosedLoop loop =
        interconnect(tora, fore.spec, GammaPolicy::constant(100.0));
    IntegratorConfig cfg;
    cfg.t_end = 50.0;
    cfg.record_stride = 10;
    Vec xp0(4);
    xp0 << 0.0, 0.0, 1.0, 0.0;
    const Vec xc0 = Vec::Constant(1, 0.1);

    const auto t0 = clock_type::now();
    const Trajectory traj = integrate_soft(loop, fore.energy, cfg, {xp0, xc0});
    const double tt = seconds_since(t0);
    std::cout << "oscillator soft run (gamma=100, T=50): " << tt << " s, "
              << traj.size() << " samples, V(T)=" << traj.V.back() << "\n";
  }
  return 0;
}
