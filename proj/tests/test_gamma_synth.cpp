#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softreset/controllers.hpp"
#include "softreset/gamma_synth.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace softreset;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

const ForeParams kSec61{};  // a=b=c=1, d=0.01, kappa=1/4, rho0=1e-3, eps=1e-2

}  // namespace

TEST_CASE("m0 matrix entries") {
  SUBCASE("section 6.1 parameters") {
    const Mat M0 = m0_matrix(kSec61);
    CHECK(M0(0, 0) == doctest::Approx(0.501).epsilon(1e-12));
    CHECK(M0(0, 1) == doctest::Approx(-0.24999).epsilon(1e-12));
    CHECK(M0(1, 0) == M0(0, 1));
    CHECK(M0(1, 1) == doctest::Approx(-0.0099999).epsilon(1e-12));
  }
  SUBCASE("all parameters zero gives the zero matrix") {
    ForeParams p;
    p.a_c = p.b_c = p.c_c = p.d_c = 0.0;
    p.kappa = 0.0;  // only used through products here
    p.rho0 = 0.0;
    CHECK(m0_matrix(p).norm() == 0.0);
  }
  SUBCASE("hand arithmetic") {
    ForeParams p;
    p.kappa = 0.5;
    p.a_c = -1.0;
    p.b_c = 1.0;
    p.c_c = 1.0;
    p.d_c = 0.0;
    p.rho0 = 0.0;
    const Mat M0 = m0_matrix(p);
    CHECK(M0(0, 0) == doctest::Approx(-1.0));
    CHECK(M0(0, 1) == doctest::Approx(0.0));
    CHECK(M0(1, 1) == doctest::Approx(0.0));
  }
}

TEST_CASE("s-procedure feasibility check") {
  const Mat M0 = m0_matrix(kSec61);
  const Mat I2 = Mat::Identity(2, 2);

  SUBCASE("M = M0 + eps I at lambda 1 passes with a nontrivial sector") {
    const Mat M = M0 + kSec61.eps * I2;
    // m22 < 0 in M0 certifies the nontrivial sector after adding eps.
    Eigen::SelfAdjointEigenSolver<Mat> es(M);
    REQUIRE(es.eigenvalues().minCoeff() <= 0.0);
    CHECK(s_procedure_check(M, M0, kSec61.eps, 1.0, 1e-10));
  }

  SUBCASE("positive definite M has an empty sector") {
    CHECK_FALSE(s_procedure_check(I2, Mat::Zero(2, 2), 0.0, 1.0, 1e-10));
  }

  SUBCASE("section 6.1 values with M = M0 + 1e-2 I") {
    CHECK(s_procedure_check(M0 + 1e-2 * I2, M0, 1e-2, 1.0, 1e-10));
  }

  SUBCASE("negative tolerance is rejected") {
    CHECK_THROWS_AS(s_procedure_check(I2, I2, 0.0, 1.0, -1.0),
                    std::invalid_argument);
  }

  SUBCASE("feasibility tracks the smallest eigenvalue of M0") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    int checked = 0;
    while (checked < 200) {
      ForeParams p;
      p.a_c = uni(rng);
      p.b_c = uni(rng);
      p.c_c = uni(rng);
      p.d_c = uni(rng);
      p.kappa = std::abs(uni(rng)) + 0.01;
      p.rho0 = std::abs(uni(rng));
      p.eps = std::abs(uni(rng)) + 1e-3;
      const Mat m0 = m0_matrix(p);
      Eigen::SelfAdjointEigenSolver<Mat> es(m0);
      const double lmin = es.eigenvalues().minCoeff();
      if (std::abs(lmin + p.eps) < 1e-9) continue;  // skip the borderline
      const bool expect = lmin <= -p.eps;
      CHECK(s_procedure_check(m0 + p.eps * Mat::Identity(2, 2), m0, p.eps, 1.0,
                              1e-12) == expect);
      ++checked;
    }
  }
}

TEST_CASE("sigma1 is the exact reset-displacement majorant") {
  // Zero jump map with the velocity sector matrix.
  MimoForeParams mp;
  mp.A_c = -Mat::Identity(1, 1);
  mp.B_c = Mat::Identity(1, 1);
  mp.C_c = Mat::Identity(1, 1);
  mp.kappa_energy = 0.5;
  const Controller c = make_mimo_fore(mp);

  CHECK(sigma1(c.spec, Vec::Zero(2)) == 0.0);
  CHECK(sigma1(c.spec, vec2(1.0, 0.0)) == doctest::Approx(0.5));
  CHECK(sigma1(c.spec, vec2(0.0, 1.0)) == doctest::Approx(1.0));

  SUBCASE("positive homogeneity under scaling for linear jump maps") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-4.0, 4.0);
    const Controller fore = make_example1_fore(kSec61);
    for (int k = 0; k < 200; ++k) {
      const Vec z = vec2(uni(rng), uni(rng));
      const double alpha = uni(rng);
      CHECK(sigma1(fore.spec, alpha * z) ==
            doctest::Approx(std::abs(alpha) * sigma1(fore.spec, z))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("sigma2 clamps inside the relaxed flow sector") {
  const Controller fore = make_example1_fore(kSec61);

  SUBCASE("zero inside C_eps and at the origin") {
    CHECK(sigma2(fore.spec, fore.energy, kSec61.rho0, kSec61.eps,
                 Vec::Zero(2)) == 0.0);
    // Points of the flow set lie inside C_eps.
    const Vec z = vec2(0.1, 1.0);
    REQUIRE(z.dot(fore.spec.M * z) <= kSec61.eps * z.squaredNorm());
    CHECK(sigma2(fore.spec, fore.energy, kSec61.rho0, kSec61.eps, z) == 0.0);
  }

  SUBCASE("outside C_eps it is the exact flow excess") {
    const Vec z = vec2(1.0, 0.0);
    REQUIRE(z.dot(fore.spec.M * z) > kSec61.eps * z.squaredNorm());
    // grad V_c . f_c - y u + rho0 y^2 at (1,0) = 2 kappa a + rho0 c^2.
    CHECK(sigma2(fore.spec, fore.energy, kSec61.rho0, kSec61.eps, z) ==
          doctest::Approx(0.501).epsilon(1e-12));
  }
}

TEST_CASE("gamma bound formula and monotonicity") {
  const MajorantFn zero = [](const Vec&) { return 0.0; };
  const MajorantFn one = [](const Vec&) { return 1.0; };

  SUBCASE("vanishing sigma2 gives gamma0 / (2 mu)") {
    CHECK(gamma_bound(2.0, 1.0, 0.1, one, zero, vec2(1.0, 1.0)) ==
          doctest::Approx(1.0));
    CHECK(gamma_bound(1.0, 0.25, 1e-2, one, zero, vec2(3.0, -2.0)) ==
          doctest::Approx(2.0));
  }

  SUBCASE("zero argument with positive sigma2 is singular") {
    CHECK_THROWS_AS(gamma_bound(1.0, 1.0, 0.1, one, one, Vec::Zero(2)),
                    std::domain_error);
  }

  SUBCASE("section 6.1 composition at z = (1, 0)") {
    const Controller fore = make_example1_fore(kSec61);
    const Vec z = vec2(1.0, 0.0);
    // Independent arithmetic: sigma1 = |M (1,0)| column norm, sigma2 = 0.501.
    const double m11 = fore.spec.M(0, 0), m21 = fore.spec.M(1, 0);
    const double s1 = std::hypot(m11, m21);
    const double expected =
        (1.0 / (2.0 * 0.25)) *
        (1.0 + s1 * s1 * 0.501 / (kSec61.eps * kSec61.eps));
    const MajorantFn s1f = [&](const Vec& zz) { return sigma1(fore.spec, zz); };
    const MajorantFn s2f = [&](const Vec& zz) {
      return sigma2(fore.spec, fore.energy, kSec61.rho0, kSec61.eps, zz);
    };
    CHECK(gamma_bound(1.0, fore.energy.mu, kSec61.eps, s1f, s2f, z) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("nonincreasing in mu, nondecreasing in gamma0") {
    const Vec z = vec2(1.0, 2.0);
    double prev = std::numeric_limits<double>::infinity();
    for (const double mu : {0.1, 0.5, 1.0, 5.0}) {
      const double b = gamma_bound(1.0, mu, 0.1, one, one, z);
      CHECK(b <= prev);
      prev = b;
    }
    prev = 0.0;
    for (const double g0 : {0.5, 1.0, 2.0, 8.0}) {
      const double b = gamma_bound(g0, 1.0, 0.1, one, one, z);
      CHECK(b >= prev);
      prev = b;
    }
  }
}

TEST_CASE("any gain above the bound certifies the passivity inequality") {
  const Controller fore = make_example1_fore(kSec61);
  const double gamma0 = 1.0;
  const double mu = fore.energy.mu;
  const MajorantFn s1f = [&](const Vec& z) { return sigma1(fore.spec, z); };
  const MajorantFn s2f = [&](const Vec& z) {
    return sigma2(fore.spec, fore.energy, kSec61.rho0, kSec61.eps, z);
  };

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::uniform_real_distribution<double> inflate(0.0, 3.0);
  int in_jump_set = 0;
  for (int k = 0; k < 5000 || in_jump_set < 1000; ++k) {
    const Vec z = vec2(uni(rng), uni(rng));
    const double ph = z.dot(fore.spec.M * z);
    if (ph < 0.0 || z.norm() == 0.0) continue;
    ++in_jump_set;
    const double gp =
        gamma_bound(gamma0, mu, kSec61.eps, s1f, s2f, z) * (1.0 + inflate(rng));

    // Residual of the strict-passivity inequality, assembled directly.
    const Vec xc = z.head(1), uc = z.tail(1);
    const double s = 1.0;  // phi >= 0 here; the worse selection
    const Vec rhs = fore.spec.f_c(xc, uc) -
                    gp * (s + 1.0) * (xc - fore.spec.g_c(xc, uc));
    const Vec y = fore.spec.h_c(xc, uc);
    const double s1 = sigma1(fore.spec, z);
    const double supply = y.dot(uc) - kSec61.rho0 * y.squaredNorm() -
                          gamma0 * std::max(0.0, ph) * ph /
                              std::max(1.0, s1 * s1);
    CHECK(fore.energy.gradient(xc).dot(rhs) <= supply + 1e-8);
    if (in_jump_set >= 2000) break;
  }
}

TEST_CASE("synthesized policy dominates the bound and stays positive") {
  const Controller fore = make_example1_fore(kSec61);
  const GammaPolicy g = synthesize_gamma(fore.spec, fore.energy, kSec61.rho0,
                                         kSec61.eps, 1.0);
  CHECK_FALSE(g.is_constant());
  CHECK(g.lower_bound() == doctest::Approx(1.0 / (2.0 * fore.energy.mu)));

  const MajorantFn s1f = [&](const Vec& z) { return sigma1(fore.spec, z); };
  const MajorantFn s2f = [&](const Vec& z) {
    return sigma2(fore.spec, fore.energy, kSec61.rho0, kSec61.eps, z);
  };
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const Vec z = vec2(uni(rng), uni(rng));
    const double val = g.at(z);
    CHECK(val > 0.0);
    if (z.norm() > 0.0) {
      CHECK(val >=
            gamma_bound(1.0, fore.energy.mu, kSec61.eps, s1f, s2f, z) *
                (1.0 - 1e-12));
    }
  }
}
