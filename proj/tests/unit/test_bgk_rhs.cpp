#include <doctest.h>

#include <cmath>

#include "bgkpi/bgk_rhs.hpp"
#include "bgkpi/error.hpp"
#include "bgkpi/integrators.hpp"
#include "bgkpi/scenarios.hpp"
#include "helpers.hpp"

using namespace bgkpi;

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Spatially uniform, non-Maxwellian field: a Maxwellian with a bump.
DistributionField skewed_uniform(std::shared_ptr<const PhaseSpace> space) {
  DistributionField f = uniform_equilibrium({1.0, {0.2, 0.0}, 0.9}, space);
  for (std::size_t c = 0; c < space->x.size(); ++c)
    for (std::size_t j = 0; j < space->v.size(); ++j)
      f(c, j) *= 1.0 + 0.3 * std::sin(space->v.component(j, 0));
  return f;
}

}  // namespace

TEST_CASE("uniform Maxwellian is a fixed point") {
  for (auto mode : {MaxwellianMode::analytic, MaxwellianMode::corrected}) {
    auto space = testing::space_1d(10, Boundary::periodic);
    const auto f = uniform_equilibrium({1.0, {0.0, 0.0}, 1.0}, space);
    const auto d = rhs(f, {1e-2, {Reconstruction::weno3, 1e-6}, mode});
    CHECK(max_abs(d.values()) < 1e-10);
  }
  auto space2 = make_phase_space(SpatialGrid({{5, 0, 1, Boundary::outflow}, {4, 0, 1, Boundary::periodic}}),
                                 VelocityGrid(2, 20, 8.0));
  const auto f2 = uniform_equilibrium({0.7, {0.3, -0.2}, 1.4}, space2);
  CHECK(max_abs(rhs(f2, {1.0, {}, MaxwellianMode::analytic}).values()) < 1e-10);
}

TEST_CASE("collision term of a uniform field is (M - f)/eps and scales with 1/eps") {
  auto space = testing::space_1d(3, Boundary::periodic);
  const auto f = skewed_uniform(space);
  const auto m = profile_moments(f.cell(0), space->v);
  const auto M = maxwellian(m.rho, std::span<const double>(m.u.data(), 1), m.T, space->v);

  const auto d1 = rhs(f, {0.5, {}, MaxwellianMode::analytic});
  const auto d2 = rhs(f, {0.25, {}, MaxwellianMode::analytic});
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t j = 0; j < space->v.size(); ++j) {
      CHECK(d1(c, j) == doctest::Approx((M[j] - f(c, j)) / 0.5).epsilon(1e-12));
      CHECK(d2(c, j) == doctest::Approx(2.0 * d1(c, j)).epsilon(1e-12));
    }
}

TEST_CASE("collision conserves mass exactly in corrected mode") {
  auto space = testing::space_1d(4, Boundary::periodic, 24, 6.0);
  const auto f = skewed_uniform(space);
  const auto dc = collision_rhs(f, {1.0, {}, MaxwellianMode::corrected});
  const auto da = collision_rhs(f, {1.0, {}, MaxwellianMode::analytic});
  for (std::size_t c = 0; c < 4; ++c) {
    double mc = 0.0, ma = 0.0, mom = 0.0, en = 0.0;
    for (std::size_t j = 0; j < space->v.size(); ++j) {
      const double v = space->v.component(j, 0);
      mc += space->v.weight() * dc(c, j);
      ma += space->v.weight() * da(c, j);
      mom += space->v.weight() * v * dc(c, j);
      en += space->v.weight() * v * v * dc(c, j);
    }
    CHECK(std::abs(mc) < 1e-12);
    CHECK(std::abs(mom) < 1e-12);
    CHECK(std::abs(en) < 1e-12);
    CHECK(std::abs(ma) < 1e-6);  // quadrature bound on the coarse grid
  }
}

TEST_CASE("collision-only relaxation keeps uniform moments") {
  auto space = testing::space_1d(2, Boundary::periodic, 40, 7.0);
  const auto f = skewed_uniform(space);
  const auto m0 = profile_moments(f.cell(0), space->v);
  BgkSystem system(space, {0.1, {}, MaxwellianMode::corrected});
  MethodSpec m;
  m.method = Method::rk4;
  m.dt = 0.01;
  const auto out = integrate(system, f.values(), m, 0.5);
  const auto m1 = profile_moments(std::span<const double>(out.f).subspan(0, space->v.size()), space->v);
  CHECK(m1.rho == doctest::Approx(m0.rho).epsilon(1e-12));
  CHECK(m1.u[0] == doctest::Approx(m0.u[0]).epsilon(1e-11));
  CHECK(m1.T == doctest::Approx(m0.T).epsilon(1e-11));
}

TEST_CASE("infinite epsilon switches collisions off") {
  auto space = testing::space_1d(6, Boundary::periodic, 10, 4.0);
  const auto f = skewed_uniform(space);
  CHECK(max_abs(rhs(f, {std::numeric_limits<double>::infinity(), {}, MaxwellianMode::analytic}).values()) == 0.0);
  CHECK_THROWS_AS(BgkSystem(space, {0.0, {}, MaxwellianMode::analytic}), Error);
  CHECK_THROWS_AS(BgkSystem(space, {-1.0, {}, MaxwellianMode::analytic}), Error);
}

TEST_CASE("rhs counts evaluations") {
  auto space = testing::space_1d(4, Boundary::periodic, 10, 4.0);
  const auto f = skewed_uniform(space);
  BgkSystem system(space, {1.0, {}, MaxwellianMode::analytic});
  std::vector<double> out(f.values().size());
  system.rhs(f.values(), out);
  system.rhs(f.values(), out);
  CHECK(system.evaluations() == 2);
  system.reset_evaluations();
  CHECK(system.evaluations() == 0);
}

TEST_CASE("unphysical cells abort with the cell index") {
  auto space = testing::space_1d(5, Boundary::periodic, 10, 4.0);
  auto f = uniform_equilibrium({1.0, {0.0, 0.0}, 1.0}, space);
  for (auto& x : f.cell(3)) x = -x;
  try {
    rhs(f, {1.0, {}, MaxwellianMode::analytic});
    FAIL("expected an exception");
  } catch (const InstabilityError& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveDensity);
    REQUIRE(e.context().cell);
    CHECK(*e.context().cell == 3);
  }
}

TEST_CASE("Sod, eps = 1e-1, one RK4 step agrees with a tiny-step forward Euler reference") {
  auto space = testing::space_1d(100, Boundary::outflow);
  const auto f0 = sod_1d(space);
  BgkSystem system(space, {1e-1, {Reconstruction::weno3, 1e-6}, MaxwellianMode::analytic});
  const double dt = 0.1 * 0.01;
  const auto one = rk4_step(system, f0.values(), dt);
  std::vector<double> ref = f0.values();
  for (int i = 0; i < 100; ++i) ref = forward_euler_step(system, ref, dt / 100);
  const auto m = compute_moments(DistributionField(space, one));
  for (std::size_t c = 0; c < 100; ++c) {
    CHECK(m.rho[c] > 0.0);
    CHECK(m.T[c] > 0.0);
  }
  // FE with dt/100 carries an O(dt^2/100) error per unit of f'' magnitude.
  CHECK(testing::max_abs_diff(one, ref) < 1e-4);
}
