#include "softreset/gamma_policy.hpp"

namespace softreset {

double gamma_bound(double gamma0, double mu, double eps,
                   const MajorantFn& sigma1, const MajorantFn& sigma2,
                   const Vec& z) {
  if (gamma0 <= 0.0 || mu <= 0.0 || eps <= 0.0) {
    throw std::invalid_argument("gamma_bound: gamma0, mu, eps must be > 0");
  }
  const double s2 = sigma2(z);
  if (s2 == 0.0) {
    return gamma0 / (2.0 * mu);
  }
  const double zn2 = z.squaredNorm();
  if (zn2 == 0.0) {
    throw std::domain_error("gamma_bound: sigma2 > 0 at z = 0");
  }
  const double s1 = sigma1(z);
  return (gamma0 + s1 * s1 * s2 / (eps * eps * zn2 * zn2)) / (2.0 * mu);
}

GammaPolicy GammaPolicy::constant(double gamma_bar) {
  if (gamma_bar <= 0.0) {
    throw std::invalid_argument("constant gamma must be > 0");
  }
  GammaPolicy p;
  p.value_ = gamma_bar;
  return p;
}

GammaPolicy GammaPolicy::none() {
  GammaPolicy p;
  p.value_ = 0.0;
  return p;
}

GammaPolicy GammaPolicy::synthesized(double gamma0, double eps, double mu,
                                     MajorantFn sigma1, MajorantFn sigma2,
                                     double floor) {
  if (gamma0 <= 0.0 || eps <= 0.0 || mu <= 0.0) {
    throw std::invalid_argument("synthesized gamma: gamma0, eps, mu must be > 0");
  }
  GammaPolicy p;
  p.synth_ = true;
  p.gamma0_ = gamma0;
  p.eps_ = eps;
  p.mu_ = mu;
  p.floor_ = floor > 0.0 ? floor : gamma0 / (2.0 * mu);
  p.sigma1_ = std::move(sigma1);
  p.sigma2_ = std::move(sigma2);
  return p;
}

double GammaPolicy::at(const Vec& z) const {
  if (!synth_) return value_;
  return std::max(gamma_bound(gamma0_, mu_, eps_, sigma1_, sigma2_, z),
                  floor_);
}

double GammaPolicy::operator()(const Vec& x_c, const Vec& u_c) const {
  if (!synth_) return value_;
  Vec z(x_c.size() + u_c.size());
  z << x_c, u_c;
  return at(z);
}

}  // namespace softreset
