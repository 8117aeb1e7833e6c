#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "bgkpi/phase_space.hpp"

namespace bgkpi {

struct MacroState {
  double rho = 1.0;
  std::array<double, 2> u{0.0, 0.0};
  double T = 1.0;
};

/// Sod-like Riemann problem on [0, 1]: (1, 0, 1) for x <= 0.5, (0.125, 0, 0.25)
/// beyond. Classification uses cell centres.
MacroState sod_state(double x);
DistributionField sod_1d(std::shared_ptr<const PhaseSpace> space);

/// Shock at x = -1 moving into gas at rest that carries a Gaussian density
/// bubble centred at (0.5, 0).
MacroState shock_bubble_state(double x, double y);
DistributionField shock_bubble_2d(std::shared_ptr<const PhaseSpace> space);

/// Smooth periodic density wave rho = 1 + amplitude sin(2 pi (x - lo) / L),
/// u = 0, T = 1, for convergence and conservation studies.
MacroState density_wave_state(double x, const SpatialAxis& axis, double amplitude);
DistributionField density_wave_1d(std::shared_ptr<const PhaseSpace> space, double amplitude = 0.1);

/// Spatially uniform Maxwellian.
DistributionField uniform_equilibrium(const MacroState& state, std::shared_ptr<const PhaseSpace> space);

/// Names accepted in configuration files.
std::vector<std::string> known_scenarios();

}  // namespace bgkpi
