#include "bgkpi/scenarios.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "bgkpi/error.hpp"

namespace bgkpi {

namespace {

void require_dims(const PhaseSpace& space, int dx, int dv, const char* name) {
  if (space.x.dim() != dx || space.v.dim() != dv)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(name) + " needs Dx = " + std::to_string(dx) + " and Dv = " +
                    std::to_string(dv) + ", got Dx = " + std::to_string(space.x.dim()) +
                    " and Dv = " + std::to_string(space.v.dim()));
}

DistributionField fill(std::shared_ptr<const PhaseSpace> space,
                       const std::function<MacroState(std::array<double, 2>)>& state_at) {
  DistributionField f(space);
  for (std::size_t c = 0; c < space->x.size(); ++c) {
    const MacroState s = state_at(space->x.center(c));
    maxwellian(s.rho, s.u, s.T, space->v, f.cell(c));
  }
  return f;
}

}  // namespace

MacroState sod_state(double x) {
  if (x <= 0.5) return {1.0, {0.0, 0.0}, 1.0};
  return {0.125, {0.0, 0.0}, 0.25};
}

DistributionField sod_1d(std::shared_ptr<const PhaseSpace> space) {
  require_dims(*space, 1, 1, "sod1d");
  return fill(std::move(space), [](std::array<double, 2> x) { return sod_state(x[0]); });
}

MacroState shock_bubble_state(double x, double y) {
  if (x <= -1.0) return {16.0 / 7.0, {std::sqrt(5.0 / 3.0) * 7.0 / 16.0, 0.0}, 133.0 / 64.0};
  const double r2 = (x - 0.5) * (x - 0.5) + y * y;
  return {1.0 + 1.5 * std::exp(-16.0 * r2), {0.0, 0.0}, 1.0};
}

DistributionField shock_bubble_2d(std::shared_ptr<const PhaseSpace> space) {
  require_dims(*space, 2, 2, "shockbubble2d");
  return fill(std::move(space), [](std::array<double, 2> x) { return shock_bubble_state(x[0], x[1]); });
}

MacroState density_wave_state(double x, const SpatialAxis& axis, double amplitude) {
  const double phase = 2.0 * std::numbers::pi * (x - axis.lo) / axis.length();
  return {1.0 + amplitude * std::sin(phase), {0.0, 0.0}, 1.0};
}

DistributionField density_wave_1d(std::shared_ptr<const PhaseSpace> space, double amplitude) {
  require_dims(*space, 1, 1, "wave1d");
  if (!(std::abs(amplitude) < 1.0))
    throw Error(ErrorKind::NonPositiveInput, "wave amplitude must keep the density positive");
  const SpatialAxis axis = space->x.axis(0);
  return fill(std::move(space),
              [&](std::array<double, 2> x) { return density_wave_state(x[0], axis, amplitude); });
}

DistributionField uniform_equilibrium(const MacroState& state, std::shared_ptr<const PhaseSpace> space) {
  return fill(std::move(space), [&](std::array<double, 2>) { return state; });
}

std::vector<std::string> known_scenarios() { return {"sod1d", "shockbubble2d", "wave1d"}; }

}  // namespace bgkpi
