#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softreset/controllers.hpp"
#include "softreset/di_core.hpp"
#include "softreset/interconnect.hpp"
#include "softreset/plants.hpp"

#include <random>

using namespace softreset;

namespace {

Vec scalar(double v) { return Vec::Constant(1, v); }

}  // namespace

TEST_CASE("sgn_set returns the sign selection set") {
  CHECK(sgn_set(2.0).lo == 1.0);
  CHECK(sgn_set(2.0).hi == 1.0);
  CHECK(sgn_set(-0.5).lo == -1.0);
  CHECK(sgn_set(-0.5).hi == -1.0);
  CHECK(sgn_set(0.0).lo == -1.0);
  CHECK(sgn_set(0.0).hi == 1.0);
  CHECK_THROWS_AS(sgn_set(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(sgn_set(std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("phi evaluates the sector quadratic form") {
  // n_c = m_c = 1 with the velocity sector: phi = -x u.
  const Mat M = velocity_sector_matrix(1);
  auto zero = [](const Vec&, const Vec&) { return Vec::Zero(1); };
  const ControllerSpec ctrl = make_controller(1, 1, zero, zero, zero, M);

  CHECK(phi(ctrl, scalar(1.0), scalar(1.0)) == doctest::Approx(-1.0));
  CHECK(phi(ctrl, scalar(1.0), scalar(-1.0)) == doctest::Approx(1.0));
  CHECK(phi(ctrl, scalar(0.0), scalar(0.0)) == 0.0);
  CHECK_THROWS_AS(phi(ctrl, Vec::Zero(2), scalar(0.0)), std::invalid_argument);
}

TEST_CASE("controller construction enforces symmetry and origin") {
  Mat M(2, 2);
  M << 1.0, 0.3, 0.1, -1.0;  // asymmetric on purpose
  auto zero = [](const Vec&, const Vec&) { return Vec::Zero(1); };
  const ControllerSpec ctrl = make_controller(1, 1, zero, zero, zero, M);
  CHECK(ctrl.M(0, 1) == ctrl.M(1, 0));
  CHECK(ctrl.M(0, 1) == doctest::Approx(0.2));

  auto bad = [](const Vec&, const Vec&) { return Vec::Constant(1, 1.0); };
  CHECK_THROWS_AS(make_controller(1, 1, bad, zero, zero, M),
                  std::invalid_argument);
}

TEST_CASE("quadratic energy carries the strong convexity modulus") {
  Mat P(2, 2);
  P << 2.0, 0.5, 0.5, 1.0;
  const QuadraticEnergy e = QuadraticEnergy::from_matrix(P);
  CHECK(e.mu > 0.0);

  // Quadratics meet the strong-convexity inequality exactly at mu =
  // lambda_min(P); for isotropic P it is an identity at every pair.
  const QuadraticEnergy iso = QuadraticEnergy::isotropic(3, 0.25);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    Vec x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = uni(rng);
      y[i] = uni(rng);
    }
    const double lhs = iso.value(y);
    const double rhs = iso.value(x) + iso.gradient(x).dot(y - x) +
                       iso.mu * (x - y).squaredNorm();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  Mat bad = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(QuadraticEnergy::from_matrix(bad), std::invalid_argument);
}

TEST_CASE("soft reset rhs follows the inclusion formula") {
  // phi < 0 (s = -1) kills the reset term.
  const Controller fore = make_example1_fore(ForeParams{});
  const GammaPolicy ten = GammaPolicy::constant(10.0);

  const Vec xc = scalar(1.0);
  SUBCASE("s = -1 leaves the flow map") {
    const Vec uc = scalar(2.0);  // phi(1,2) < 0 for the example controller
    REQUIRE(phi(fore.spec, xc, uc) < 0.0);
    const Vec r = soft_reset_rhs(fore.spec, ten, xc, uc, -1.0);
    CHECK(r[0] == doctest::Approx(fore.spec.f_c(xc, uc)[0]));
  }

  SUBCASE("zero jump map, unit gain, s = +1 subtracts 2 x_c") {
    const GammaPolicy one = GammaPolicy::constant(1.0);
    const Vec uc = scalar(1.0);
    REQUIRE(phi(fore.spec, xc, uc) > 0.0);
    const Vec r = soft_reset_rhs(fore.spec, one, xc, uc, 1.0);
    CHECK(r[0] == doctest::Approx(fore.spec.f_c(xc, uc)[0] - 2.0 * xc[0]));
  }

  SUBCASE("hand-evaluated scalar case") {
    // f_c = x + u = 2 at (1,1); gain 10, s = +1: 2 - 10*2*1 = -18.
    const Vec uc = scalar(1.0);
    const Vec r = soft_reset_rhs(fore.spec, ten, xc, uc, 1.0);
    CHECK(r[0] == doctest::Approx(-18.0));
  }

  SUBCASE("non-positive gain is a configuration error") {
    CHECK_THROWS_AS(
        soft_reset_rhs(fore.spec, GammaPolicy::none(), xc, scalar(1.0), 1.0),
        std::invalid_argument);
  }
}

TEST_CASE("hard reset step jumps exactly on the jump set") {
  const Controller fore = make_example1_fore(ForeParams{});

  // phi >= 0 with the zero reset map sends the state to zero.
  const Vec xc = scalar(3.0);
  const Vec uc = scalar(0.0);  // phi(3,0) = m11 * 9 > 0
  REQUIRE(phi(fore.spec, xc, uc) > 0.0);
  const JumpDecision d = hard_reset_step(fore.spec, xc, uc);
  CHECK(d.jump);
  CHECK(d.x_c_plus[0] == 0.0);

  const Vec uc2 = scalar(6.0);  // phi(3,6) < 0: inside the flow set
  REQUIRE(phi(fore.spec, xc, uc2) < 0.0);
  const JumpDecision f = hard_reset_step(fore.spec, xc, uc2);
  CHECK_FALSE(f.jump);
  CHECK(f.x_c_plus[0] == xc[0]);
}

TEST_CASE("selection consistency for sampled arguments") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const auto sel = sgn_set(uni(rng));
    CHECK(sel.lo <= sel.hi);
    CHECK(sel.lo >= -1.0);
    CHECK(sel.hi <= 1.0);
    CHECK(sel.contains(sel.lo));
    CHECK(sel.contains(sel.hi));
  }
}

TEST_CASE("interconnection wiring and origin") {
  const PlantSpec tora = make_tora(ToraParams{});
  const Controller fore = make_example1_fore(ForeParams{});
  const ClosedLoop loop =
      interconnect(tora, fore.spec, GammaPolicy::constant(10.0));

  SUBCASE("all maps vanish at the origin") {
    const Vec x0 = Vec::Zero(loop.dim());
    CHECK(loop.drift(0.0, x0).norm() == 0.0);
    CHECK(loop.omega(0.0, x0).norm() == 0.0);
    CHECK(loop.rhs(0.0, x0, 1.0).norm() == 0.0);
  }

  SUBCASE("field matches the direct composition of the pieces") {
    Vec x(5);
    x << 0.3, -0.2, 0.8, 0.1, 0.5;
    const Vec xp = x.head(4);
    const Vec xc = x.tail(1);
    const Vec uc = -tora.h_p(xp);
    const double ph = phi(fore.spec, xc, uc);
    CHECK(loop.phi_at(0.0, x) == doctest::Approx(ph));

    const double s = sgn_set(ph).lo;
    const Vec expected_ctrl =
        soft_reset_rhs(fore.spec, GammaPolicy::constant(10.0), xc, uc, s);
    const Vec up = fore.spec.h_c(xc, uc);
    const Vec expected_plant = tora.f_p(xp, up);
    const Vec got = loop.rhs(0.0, x, s);
    CHECK((got.head(4) - expected_plant).norm() == doctest::Approx(0.0));
    CHECK((got.tail(1) - expected_ctrl).norm() == doctest::Approx(0.0));
    CHECK(got.allFinite());
  }

  SUBCASE("exogenous plant input can cancel the controller output") {
    Exogenous exo;
    exo.u2 = [&](double t, const ClosedLoopState& s) -> Vec {
      // u2 = -y_c with u1 = 0, so u_p = 0 and the plant runs open loop.
      const Vec uc = -tora.h_p(s.x_p);
      return -fore.spec.h_c(s.x_c, uc);
    };
    const ClosedLoop cancel =
        interconnect(tora, fore.spec, GammaPolicy::constant(10.0), exo);
    Vec x(5);
    x << 0.3, -0.2, 0.8, 0.1, 0.5;
    const Vec got = cancel.drift(0.0, x);
    const Vec open_loop = tora.f_p(x.head(4), Vec::Zero(1));
    CHECK((got.head(4) - open_loop).norm() == doctest::Approx(0.0));
  }

  SUBCASE("port dimension mismatch is rejected") {
    MimoForeParams mp;
    mp.A_c = -Mat::Identity(2, 2);
    mp.B_c = Mat::Identity(2, 2);
    mp.C_c = Mat::Identity(2, 2);
    mp.kappa_energy = 0.5;
    const Controller mimo = make_mimo_fore(mp);
    CHECK_THROWS_AS(interconnect(tora, mimo.spec, GammaPolicy::constant(1.0)),
                    std::invalid_argument);
  }
}
