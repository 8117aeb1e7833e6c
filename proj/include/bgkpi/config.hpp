#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bgkpi/bgk_rhs.hpp"
#include "bgkpi/integrators.hpp"
#include "bgkpi/phase_space.hpp"
#include "bgkpi/transport.hpp"

namespace bgkpi {

inline constexpr int kSchemaVersion = 1;

/// Complete description of one run, read from a YAML document. Grid fields
/// left out of the document take the scenario's defaults.
struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string scenario = "sod1d";

  std::vector<int> cells;
  std::vector<std::array<double, 2>> domain;
  std::vector<Boundary> boundary;
  int velocity_dim = 1;
  int velocity_nodes = 80;
  double velocity_bound = 8.0;

  double epsilon = 1.0;
  Reconstruction reconstruction = Reconstruction::weno3;
  double weno_epsilon = 1e-6;
  MaxwellianMode maxwellian = MaxwellianMode::analytic;

  Method method = Method::rk4;
  ButcherTableau tableau = ButcherTableau::classical_rk4();
  double dt = 0.0;
  int inner_steps = 2;
  double outer_dt = 0.0;
  bool advise = false;
  double cfl_fraction = 0.4;

  double t_end = 0.0;
  std::vector<double> snapshot_times;
  std::string output_dir = "output";
  bool dump_distribution = false;
  long progress_every = 0;
  double wave_amplitude = 0.1;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a configuration document. Throws ParseError (with
/// line and column) for unreadable input and ValidationError listing every
/// violated constraint.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Every constraint violated by `config`; empty when valid.
std::vector<std::string> validate_config(const ScenarioConfig& config);

/// YAML text that parses back to an equal configuration.
std::string serialize_config(const ScenarioConfig& config);

std::string_view to_string(Reconstruction r) noexcept;
std::string_view to_string(Boundary b) noexcept;
std::string_view to_string(MaxwellianMode m) noexcept;

std::shared_ptr<const PhaseSpace> build_phase_space(const ScenarioConfig& config);
DistributionField build_initial_field(const ScenarioConfig& config,
                                      std::shared_ptr<const PhaseSpace> space);
BgkSettings build_settings(const ScenarioConfig& config);

}  // namespace bgkpi
