#pragma once

#include "softreset/di_core.hpp"

namespace softreset {

using MajorantFn = std::function<double(const Vec&)>;  // z = (x_c, u_c)

/// Lower bound on the reset gain that certifies the strict-passivity
/// inequality: (1/2mu) * (gamma0 + sigma1(z)^2 sigma2(z) / (eps^2 |z|^4)).
/// The |z|^4 singularity is harmless because sigma2 vanishes near the
/// origin (the origin lies in the relaxed flow sector); a zero z with
/// nonzero sigma2 is rejected as a singularity.
double gamma_bound(double gamma0, double mu, double eps,
                   const MajorantFn& sigma1, const MajorantFn& sigma2,
                   const Vec& z);

/// Reset gain: either a positive constant or a synthesized state-dependent
/// gain evaluating max{gamma_bound, floor}. Strictly positive by
/// construction in both variants.
class GammaPolicy {
 public:
  static GammaPolicy constant(double gamma_bar);

  /// floor <= 0 selects the default floor gamma0/(2 mu), which keeps the
  /// gain continuous and strictly positive inside the relaxed flow sector.
  static GammaPolicy synthesized(double gamma0, double eps, double mu,
                                 MajorantFn sigma1, MajorantFn sigma2,
                                 double floor = -1.0);

  /// The gamma=0 "no reset action" mode used by experiments; not a valid
  /// gain for soft-reset theory (the reset term is identically zero).
  static GammaPolicy none();

  double operator()(const Vec& x_c, const Vec& u_c) const;
  double at(const Vec& z) const;

  bool is_constant() const { return !synth_; }
  /// Constant value (or the floor for synthesized policies): a lower bound
  /// on the gain over all states.
  double lower_bound() const { return synth_ ? floor_ : value_; }
  double gamma0() const { return gamma0_; }

 private:
  GammaPolicy() = default;

  bool synth_ = false;
  double value_ = 0.0;   // constant variant
  double gamma0_ = 0.0;  // synthesized variant
  double eps_ = 0.0;
  double mu_ = 0.0;
  double floor_ = 0.0;
  MajorantFn sigma1_;
  MajorantFn sigma2_;
};

}  // namespace softreset
