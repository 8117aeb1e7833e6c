#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bgkpi/error.hpp"
#include "bgkpi/phase_space.hpp"
#include "helpers.hpp"

using namespace bgkpi;

namespace {

// Moments of a Maxwellian by midpoint quadrature on a very fine grid.
CellMoments fine_moments(double rho, double u, double T) {
  const VelocityGrid fine(1, 4000, 8.0);
  const double uu[1] = {u};
  return profile_moments_full(maxwellian(rho, uu, T, fine), fine);
}

}  // namespace

TEST_CASE("velocity grid is a symmetric midpoint grid") {
  const VelocityGrid g(1, 80, 8.0);
  CHECK(g.size() == 80);
  CHECK(g.spacing() == doctest::Approx(0.2));
  CHECK(g.weight() * g.size() == doctest::Approx(16.0).epsilon(1e-15));
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(g.component(j, 0) == -g.component(g.size() - 1 - j, 0));

  const VelocityGrid g2(2, 30, 10.0);
  CHECK(g2.size() == 900);
  CHECK(g2.weight() * g2.size() == doctest::Approx(400.0).epsilon(1e-14));
  // Node index j = jx * n + jy.
  CHECK(g2.component(31, 0) == g2.axis_nodes()[1]);
  CHECK(g2.component(31, 1) == g2.axis_nodes()[1]);

  CHECK_THROWS_AS(VelocityGrid(3, 10, 5.0), Error);
  CHECK_THROWS_AS(VelocityGrid(1, 0, 5.0), Error);
  CHECK_THROWS_AS(VelocityGrid(1, 10, -1.0), Error);
}

TEST_CASE("spatial grid geometry") {
  const SpatialGrid g({{100, 0.0, 1.0, Boundary::outflow}});
  CHECK(g.axis(0).spacing() * 100 == doctest::Approx(1.0));
  CHECK(g.center(0)[0] == doctest::Approx(0.005));
  const SpatialGrid g2({{4, 0.0, 4.0, Boundary::outflow}, {3, 0.0, 3.0, Boundary::periodic}});
  CHECK(g2.size() == 12);
  CHECK(g2.index(2, 1) == 7);
  CHECK(g2.center(7)[0] == doctest::Approx(2.5));
  CHECK(g2.center(7)[1] == doctest::Approx(1.5));
  CHECK(g2.cell_volume() == doctest::Approx(1.0));
  CHECK_THROWS_AS(SpatialGrid({{0, 0.0, 1.0, Boundary::outflow}}), Error);
  CHECK_THROWS_AS(SpatialGrid({{4, 1.0, 0.0, Boundary::outflow}}), Error);
}

TEST_CASE("phase space rejects more spatial than velocity dimensions") {
  CHECK_THROWS_AS(make_phase_space(SpatialGrid({{4, 0, 1, Boundary::periodic}, {4, 0, 1, Boundary::periodic}}),
                                   VelocityGrid(1, 10, 5.0)),
                  Error);
}

TEST_CASE("maxwellian evaluates the closed form") {
  const VelocityGrid g(1, 81, 8.0);  // odd J contains v = 0
  const double u[1] = {0.0};
  const auto m = maxwellian(1.0, u, 1.0, g);
  CHECK(m[40] == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  for (double x : m) CHECK(x > 0.0);

  CHECK_THROWS_AS(maxwellian(0.0, u, 1.0, g), Error);
  CHECK_THROWS_AS(maxwellian(1.0, u, -1.0, g), Error);
  CHECK_THROWS_AS(maxwellian(1.0, u, std::nan(""), g), Error);
}

TEST_CASE("2D maxwellian peaks at the node nearest u") {
  const VelocityGrid g(2, 30, 10.0);
  const double u[2] = {std::sqrt(5.0 / 3.0) * 7.0 / 16.0, 0.0};
  const auto m = maxwellian(16.0 / 7.0, u, 133.0 / 64.0, g);
  std::size_t best = 0;
  for (std::size_t j = 1; j < m.size(); ++j)
    if (m[j] > m[best]) best = j;
  double nearest = 1e300;
  std::size_t nearest_j = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = std::hypot(g.component(j, 0) - u[0], g.component(j, 1) - u[1]);
    if (d < nearest - 1e-12) {
      nearest = d;
      nearest_j = j;
    }
  }
  // The two nodes nearest u in y are equidistant; compare distances.
  CHECK(std::hypot(g.component(best, 0) - u[0], g.component(best, 1) - u[1]) ==
        doctest::Approx(std::hypot(g.component(nearest_j, 0) - u[0], g.component(nearest_j, 1) - u[1])));
}

TEST_CASE("moments of the standard maxwellian match the fine-quadrature oracle") {
  const VelocityGrid g(1, 80, 8.0);
  const double u[1] = {0.0};
  const auto m = profile_moments_full(maxwellian(1.0, u, 1.0, g), g);
  const auto ref = fine_moments(1.0, 0.0, 1.0);
  CHECK(std::abs(m.rho - ref.rho) < 1e-9);
  CHECK(std::abs(m.u[0] - ref.u[0]) < 1e-9);
  CHECK(std::abs(m.T - ref.T) < 1e-9);
  CHECK(std::abs(m.rho - 1.0) < 1e-9);
  CHECK(std::abs(m.T - 1.0) < 1e-9);
  CHECK(m.E == doctest::Approx(0.5 * m.rho * m.u[0] * m.u[0] + 0.5 * m.rho * m.T).epsilon(1e-14));
  CHECK(std::abs(m.q[0]) < 1e-8);
}

TEST_CASE("constant profile moments") {
  const VelocityGrid g(1, 80, 8.0);
  const std::vector<double> f(80, 0.5);
  const auto m = profile_moments(f, g);
  CHECK(m.rho == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(std::abs(m.u[0]) < 1e-15);
}

TEST_CASE("maxwellian round trip over the admissible parameter box") {
  // Velocity bounds are chosen to cover u +- 6 sqrt(T) as the property requires.
  for (double rho : {0.1, 1.0, 10.0})
    for (double u : {-3.0, 0.0, 1.7, 3.0})
      for (double T : {0.2, 1.0, 4.0}) {
        const double bound = std::abs(u) + 6.0 * std::sqrt(T) + 0.5;
        const VelocityGrid g(1, 200, bound);
        const double uu[1] = {u};
        const auto m = profile_moments(maxwellian(rho, uu, T, g), g);
        CHECK(std::abs(m.rho - rho) / rho < 1e-6);
        CHECK(std::abs(m.u[0] - u) < 1e-6 * std::max(1.0, std::abs(u)));
        CHECK(std::abs(m.T - T) / T < 1e-6);
      }
}

TEST_CASE("corrected maxwellian matches target moments to round-off") {
  const VelocityGrid g(1, 20, 6.0);  // deliberately coarse
  const double u[1] = {0.7};
  std::vector<double> analytic(g.size()), corrected(g.size());
  maxwellian(1.3, u, 0.8, g, analytic);
  corrected_maxwellian(1.3, u, 0.8, g, corrected);
  const auto ma = profile_moments(analytic, g);
  const auto mc = profile_moments(corrected, g);
  CHECK(std::abs(mc.rho - 1.3) < 1e-13);
  CHECK(std::abs(mc.u[0] - 0.7) < 1e-12);
  CHECK(std::abs(mc.T - 0.8) < 1e-12);
  // The coarse grid makes the analytic quadrature error visible.
  CHECK(std::abs(ma.T - 0.8) > std::abs(mc.T - 0.8));

  const VelocityGrid g2(2, 12, 6.0);
  const double u2[2] = {0.3, -0.4};
  std::vector<double> c2(g2.size());
  corrected_maxwellian(0.9, u2, 1.1, g2, c2);
  const auto m2 = profile_moments(c2, g2);
  CHECK(std::abs(m2.rho - 0.9) < 1e-13);
  CHECK(std::abs(m2.u[0] - 0.3) < 1e-12);
  CHECK(std::abs(m2.u[1] + 0.4) < 1e-12);
  CHECK(std::abs(m2.T - 1.1) < 1e-12);
}

TEST_CASE("non-physical profiles are reported") {
  const VelocityGrid g(1, 10, 5.0);
  std::vector<double> f(10, -1.0);
  CHECK_THROWS_AS(profile_moments(f, g), InstabilityError);
  try {
    profile_moments(f, g);
  } catch (const InstabilityError& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveDensity);
  }
  // Mass at a single node: positive density, zero temperature.
  std::vector<double> spike(10, 0.0);
  spike[3] = 1.0;
  try {
    profile_moments(spike, g);
    FAIL("expected an exception");
  } catch (const InstabilityError& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveTemperature);
  }
}

TEST_CASE("compute_moments reports the offending cell") {
  auto space = testing::space_1d(4, Boundary::periodic, 10, 5.0);
  DistributionField f(space);
  const double u[1] = {0.0};
  for (std::size_t c = 0; c < 4; ++c) maxwellian(1.0, u, 1.0, space->v, f.cell(c));
  for (auto& x : f.cell(2)) x = -x;
  try {
    compute_moments(f);
    FAIL("expected an exception");
  } catch (const InstabilityError& e) {
    REQUIRE(e.context().cell.has_value());
    CHECK(*e.context().cell == 2);
    CHECK(std::string(e.what()).find("cell=2") != std::string::npos);
  }
}

TEST_CASE("heat flux") {
  auto space = testing::space_1d(2, Boundary::periodic, 80, 8.0);
  DistributionField f(space);
  const double u0[1] = {0.4};
  maxwellian(1.2, u0, 0.9, space->v, f.cell(0));
  // Single-node mass in cell 1.
  const std::size_t node = 55;
  f(1, node) = 2.0;
  const std::vector<double> u = {0.4, -0.3};
  const auto q = compute_heat_flux(f, u);
  CHECK(std::abs(q[0]) < 1e-8);
  const double c = space->v.component(node, 0) + 0.3;
  CHECK(q[1] == doctest::Approx(0.5 * c * c * c * space->v.weight() * 2.0).epsilon(1e-14));
}

TEST_CASE("heat flux of a symmetric profile vanishes") {
  const VelocityGrid g(1, 40, 6.0);
  auto space = make_phase_space(SpatialGrid({{1, 0.0, 1.0, Boundary::periodic}}), g);
  DistributionField f(space);
  for (std::size_t j = 0; j < 40; ++j) f(0, j) = 1.0 + std::cos(g.component(j, 0));
  const std::vector<double> u = {0.0};
  CHECK(std::abs(compute_heat_flux(f, u)[0]) < 1e-13);
}

TEST_CASE("velocity-domain diagnostic flags hot or fast cells") {
  const VelocityGrid g(1, 80, 8.0);
  MomentField m;
  m.dim = 1;
  m.rho = {1.0, 1.0, 1.0};
  m.u = {0.0, 4.0, 0.0};
  m.T = {1.0, 1.0, 4.0};
  m.E = {0.0, 0.0, 0.0};
  m.q = {0.0, 0.0, 0.0};
  const auto cells = cells_outside_velocity_domain(m, g);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0] == 1);
  CHECK(cells[1] == 2);
}

TEST_CASE("total mass and finiteness") {
  auto space = testing::space_1d(10, Boundary::periodic, 80, 8.0);
  DistributionField f(space);
  const double u[1] = {0.0};
  for (std::size_t c = 0; c < 10; ++c) maxwellian(2.0, u, 1.0, space->v, f.cell(c));
  CHECK(f.total_mass() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.all_finite());
  f(3, 3) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(f.all_finite());
}
