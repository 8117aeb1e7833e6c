#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bgkpi/error.hpp"
#include "bgkpi/integrators.hpp"
#include "bgkpi/transport.hpp"
#include "helpers.hpp"

using namespace bgkpi;

namespace {

constexpr Reconstruction kOrders[] = {Reconstruction::upwind1, Reconstruction::weno2, Reconstruction::weno3};

// One velocity node per cell value, so field values read as a scalar line.
std::shared_ptr<const PhaseSpace> scalar_line(int cells, Boundary bc, double lo = 0.0, double hi = 1.0) {
  return make_phase_space(SpatialGrid({{cells, lo, hi, bc}}), VelocityGrid(1, 1, 1.0));
}

// Max error of the WENO derivative of sin(2 pi x) on a periodic grid.
double sine_derivative_error(int cells, Reconstruction order) {
  const double dx = 1.0 / cells;
  const int g = stencil_radius(order);
  double err = 0.0;
  std::vector<double> s(static_cast<std::size_t>(2 * g + 1));
  for (int i = 0; i < cells; ++i) {
    const double x = (i + 0.5) * dx;
    for (int k = -g; k <= g; ++k) s[static_cast<std::size_t>(k + g)] = std::sin(2 * std::numbers::pi * (x + k * dx));
    err = std::max(err, std::abs(weno_derivative(s, 1, order, dx) - 2 * std::numbers::pi * std::cos(2 * std::numbers::pi * x)));
  }
  return err;
}

// Collisionless periodic advection of a smooth bump through one revolution.
double advection_l1_error(int cells, Reconstruction order) {
  auto space = make_phase_space(SpatialGrid({{cells, 0.0, 1.0, Boundary::periodic}}), VelocityGrid(1, 2, 2.0));
  // nodes are v = -1, +1
  DistributionField f(space);
  const auto bump = [](double x) { return 1.0 + 0.5 * std::sin(2 * std::numbers::pi * x); };
  for (std::size_t c = 0; c < space->x.size(); ++c) {
    const double x = space->x.center(c)[0];
    f(c, 0) = bump(x);
    f(c, 1) = bump(x);
  }
  BgkSystem system(space, {std::numeric_limits<double>::infinity(), {order, 1e-6}, MaxwellianMode::analytic});
  MethodSpec m;
  m.method = Method::rk4;
  m.dt = 0.2 / cells;
  const auto out = integrate(system, f.values(), m, 1.0);
  double err = 0.0;
  for (std::size_t c = 0; c < space->x.size(); ++c)
    err += (std::abs(out.f[2 * c] - f(c, 0)) + std::abs(out.f[2 * c + 1] - f(c, 1))) / cells;
  return err;
}

}  // namespace

TEST_CASE("stencil radius") {
  CHECK(stencil_radius(Reconstruction::upwind1) == 1);
  CHECK(stencil_radius(Reconstruction::weno2) == 2);
  CHECK(stencil_radius(Reconstruction::weno3) == 2);
}

TEST_CASE("periodic ghost cells copy cyclically") {
  auto space = scalar_line(4, Boundary::periodic);
  DistributionField f(space, {1.0, 2.0, 3.0, 4.0});
  const auto p = fill_ghost_cells(f, 2);
  CHECK(p.cell(-2)[0] == 3.0);
  CHECK(p.cell(-1)[0] == 4.0);
  CHECK(p.cell(4)[0] == 1.0);
  CHECK(p.cell(5)[0] == 2.0);
  for (int i = 0; i < 4; ++i) CHECK(p.cell(i)[0] == f(static_cast<std::size_t>(i), 0));
}

TEST_CASE("outflow ghost cells repeat the boundary cell") {
  auto space = scalar_line(4, Boundary::outflow);
  DistributionField f(space, {1.0, 2.0, 3.0, 4.0});
  const auto p = fill_ghost_cells(f, 2);
  CHECK(p.cell(-2)[0] == 1.0);
  CHECK(p.cell(-1)[0] == 1.0);
  CHECK(p.cell(4)[0] == 4.0);
  CHECK(p.cell(5)[0] == 4.0);
}

TEST_CASE("2D ghost corners are filled x first, then y") {
  // outflow in x, periodic in y; value = 10 * ix + iy
  auto space = make_phase_space(SpatialGrid({{3, 0, 3, Boundary::outflow}, {3, 0, 3, Boundary::periodic}}),
                                VelocityGrid(2, 1, 1.0));
  DistributionField f(space);
  for (int ix = 0; ix < 3; ++ix)
    for (int iy = 0; iy < 3; ++iy) f(space->x.index(ix, iy), 0) = 10.0 * ix + iy;
  const auto p = fill_ghost_cells(f, 1);
  CHECK(p.cell(-1, 1)[0] == 1.0);   // outflow copy of (0, 1)
  CHECK(p.cell(3, 0)[0] == 20.0);   // outflow copy of (2, 0)
  CHECK(p.cell(1, -1)[0] == 12.0);  // periodic copy of (1, 2)
  CHECK(p.cell(1, 3)[0] == 10.0);   // periodic copy of (1, 0)
  CHECK(p.cell(-1, -1)[0] == 2.0);  // corner: x-extended (-1, 2) = (0, 2)
  CHECK(p.cell(3, 3)[0] == 20.0);   // corner: x-extended (3, 0) = (2, 0)
}

TEST_CASE("too few cells for the ghost width") {
  auto space = scalar_line(1, Boundary::periodic);
  DistributionField f(space, {1.0});
  CHECK_THROWS_AS(fill_ghost_cells(f, 2), Error);
  try {
    fill_ghost_cells(f, 2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridTooSmall);
  }
}

TEST_CASE("derivative is exact on linear and constant data") {
  for (auto order : kOrders) {
    const int g = stencil_radius(order);
    std::vector<double> lin, cst;
    for (int k = -g; k <= g; ++k) {
      lin.push_back(3.0 - 1.75 * (0.37 + 0.1 * k));
      cst.push_back(2.5);
    }
    for (int sign : {1, -1}) {
      CHECK(weno_derivative(lin, sign, order, 0.1) == doctest::Approx(-1.75).epsilon(1e-12));
      CHECK(weno_derivative(cst, sign, order, 0.1) == 0.0);
    }
    CHECK(weno_derivative(lin, 0, order, 0.1) == 0.0);
  }
}

TEST_CASE("WENO3 derivative converges at order >= 2.5 on a sine") {
  // Coarser grids are pre-asymptotic: the JS weights lose accuracy at the
  // extrema until the smoothness indicators drop below weno_epsilon.
  const double e1 = sine_derivative_error(200, Reconstruction::weno3);
  const double e2 = sine_derivative_error(400, Reconstruction::weno3);
  const double e3 = sine_derivative_error(800, Reconstruction::weno3);
  CHECK(std::log2(e1 / e2) >= 2.5);
  CHECK(std::log2(e2 / e3) >= 2.5);
}

TEST_CASE("WENO3 weights reduce to the linear weights on smooth data") {
  // With epsilon large compared with the smoothness indicators the
  // nonlinear weights equal the linear ones.
  const std::vector<double> s = {0.1, 0.4, 0.2, 0.9, 0.3};
  const auto st = linear_stencil(Reconstruction::weno3);
  double linear = 0.0;
  for (int k = 0; k < 5; ++k) linear += st[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)];
  CHECK(weno_derivative(s, 1, Reconstruction::weno3, 1.0, 1e12) == doctest::Approx(linear).epsilon(1e-10));
  const auto st2 = linear_stencil(Reconstruction::weno2);
  double linear2 = 0.0;
  for (int k = 0; k < 5; ++k) linear2 += st2[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)];
  CHECK(weno_derivative(s, 1, Reconstruction::weno2, 1.0, 1e12) == doctest::Approx(linear2).epsilon(1e-10));
}

TEST_CASE("upwind direction: v > 0 never reads f_{i+2}, v < 0 never reads f_{i-2}") {
  for (auto order : {Reconstruction::weno2, Reconstruction::weno3}) {
    std::vector<double> base = {0.3, 0.7, 0.1, 0.5, 0.9};
    auto probe = base;
    probe[4] += 1.0;
    CHECK(weno_derivative(base, 1, order, 1.0) == weno_derivative(probe, 1, order, 1.0));
    probe = base;
    probe[0] += 1.0;
    CHECK(weno_derivative(base, -1, order, 1.0) == weno_derivative(probe, -1, order, 1.0));
  }
}

TEST_CASE("transport of linear data on an outflow grid") {
  auto space = testing::space_1d(10, Boundary::outflow, 4, 2.0);
  DistributionField f(space);
  for (std::size_t c = 0; c < 10; ++c)
    for (std::size_t j = 0; j < 4; ++j) f(c, j) = 2.0 + 3.0 * space->x.center(c)[0];
  for (auto order : kOrders) {
    const auto out = transport_rhs(f, {order, 1e-6});
    const int g = stencil_radius(order);
    for (std::size_t c = static_cast<std::size_t>(g); c < 10 - static_cast<std::size_t>(g); ++c)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(out(c, j) == doctest::Approx(-space->v.component(j, 0) * 3.0).epsilon(1e-11));
  }
}

TEST_CASE("zero velocity node contributes nothing") {
  auto space = testing::space_1d(8, Boundary::periodic, 5, 2.0);  // odd J includes v = 0
  REQUIRE(space->v.component(2, 0) == 0.0);
  const auto values = testing::random_vector(space->size(), 7, 0.5, 1.5);
  DistributionField f(space, values);
  for (auto order : kOrders) {
    const auto out = transport_rhs(f, {order, 1e-6});
    for (std::size_t c = 0; c < 8; ++c) CHECK(out(c, 2) == 0.0);
  }
}

TEST_CASE("periodic transport conserves each velocity node and is shift-equivariant") {
  auto space = testing::space_1d(16, Boundary::periodic, 6, 3.0);
  const auto values = testing::random_vector(space->size(), 11, 0.1, 2.0);
  DistributionField f(space, values);
  for (auto order : kOrders) {
    const auto out = transport_rhs(f, {order, 1e-6});
    for (std::size_t j = 0; j < 6; ++j) {
      double sum = 0.0, scale = 0.0;
      for (std::size_t c = 0; c < 16; ++c) {
        sum += out(c, j);
        scale += std::abs(out(c, j));
      }
      CHECK(std::abs(sum) <= 1e-13 * scale);
    }
    DistributionField shifted(space);
    for (std::size_t c = 0; c < 16; ++c)
      for (std::size_t j = 0; j < 6; ++j) shifted((c + 1) % 16, j) = f(c, j);
    const auto out_shifted = transport_rhs(shifted, {order, 1e-6});
    for (std::size_t c = 0; c < 16; ++c)
      for (std::size_t j = 0; j < 6; ++j) CHECK(out_shifted((c + 1) % 16, j) == doctest::Approx(out(c, j)));

  }
}

TEST_CASE("transport is homogeneous of degree one") {
  auto space = testing::space_1d(12, Boundary::periodic, 4, 2.0);
  const auto values = testing::random_vector(space->size(), 5, 0.1, 2.0);
  DistributionField f(space, values), g(space, values);
  for (auto& x : g.values()) x *= -2.5;
  // Exact for upwind1; the WENO weights see the scale only through epsilon_w.
  for (auto [order, tol] : {std::pair{Reconstruction::upwind1, 1e-13}, std::pair{Reconstruction::weno2, 1e-4},
                            std::pair{Reconstruction::weno3, 1e-4}}) {
    const auto a = transport_rhs(f, {order, 1e-6});
    const auto b = transport_rhs(g, {order, 1e-6});
    double scale = 0.0;
    for (double x : a.values()) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < a.values().size(); ++i)
      CHECK(std::abs(b.values()[i] + 2.5 * a.values()[i]) <= tol * 2.5 * scale);
  }
}

TEST_CASE("2D transport sums both axis derivatives") {
  auto space = make_phase_space(SpatialGrid({{8, 0, 1, Boundary::periodic}, {6, 0, 1, Boundary::outflow}}),
                                VelocityGrid(2, 4, 2.0));
  DistributionField f(space);
  for (std::size_t c = 0; c < space->x.size(); ++c) {
    const auto x = space->x.center(c);
    for (std::size_t j = 0; j < space->v.size(); ++j) f(c, j) = 1.0 + 0.5 * x[1];
  }
  const auto out = transport_rhs(f, {Reconstruction::weno3, 1e-6});
  for (int ix = 0; ix < 8; ++ix)
    for (int iy = 2; iy < 4; ++iy) {
      const std::size_t c = space->x.index(ix, iy);
      for (std::size_t j = 0; j < space->v.size(); ++j)
        CHECK(out(c, j) == doctest::Approx(-space->v.component(j, 1) * 0.5).epsilon(1e-11));
    }
}

TEST_CASE("collisionless advection converges at order >= 2.5 with WENO3") {
  const double e1 = advection_l1_error(100, Reconstruction::weno3);
  const double e2 = advection_l1_error(200, Reconstruction::weno3);
  const double e3 = advection_l1_error(400, Reconstruction::weno3);
  MESSAGE("WENO3 advection L1 errors " << e1 << " " << e2 << " " << e3);
  CHECK(std::log2(e2 / e3) >= 2.5);
  CHECK(e1 > e2);
}

TEST_CASE("linear stencils match the derivative of a Fourier mode") {
  // sum_k s_k e^{i theta k} is the symbol used by the spectral analysis.
  for (auto order : kOrders) {
    const auto s = linear_stencil(order);
    double sum = 0.0, first = 0.0;
    const int g = static_cast<int>(s.size() / 2);
    for (int k = -g; k <= g; ++k) {
      sum += s[static_cast<std::size_t>(k + g)];
      first += k * s[static_cast<std::size_t>(k + g)];
    }
    CHECK(std::abs(sum) < 1e-15);
    CHECK(first == doctest::Approx(1.0));
  }
}
