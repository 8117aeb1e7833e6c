#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bgkpi/config.hpp"
#include "bgkpi/integrators.hpp"
#include "bgkpi/linear_analysis.hpp"
#include "bgkpi/phase_space.hpp"

namespace bgkpi {

/// Moments of one field at one time, ready for CSV output.
struct SnapshotRecord {
  double t = 0.0;
  int dim_x = 1;
  std::vector<std::array<double, 2>> x;
  MomentField moments;

  std::size_t rows() const noexcept { return x.size(); }
};

SnapshotRecord make_snapshot(const DistributionField& f, double t);

/// CSV with header t,x[,y],rho,ux[,uy],T,E,qx[,qy], one row per cell in
/// x-major order, 17 significant digits.
std::string format_snapshot(const SnapshotRecord& record);
void write_snapshot(const SnapshotRecord& record, const std::filesystem::path& path);

/// Full distribution as x[,y],vx[,vy],f rows.
void write_distribution(const DistributionField& f, const std::filesystem::path& path);

std::string format_spectrum(const std::vector<ModeSpectrum>& spectra);
void write_spectrum(const std::vector<ModeSpectrum>& spectra, const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double x);

/// Spectral advice for the grid, epsilon, K and tableau of `config`.
Advice advise_for(const ScenarioConfig& config, Reconstruction symbol = Reconstruction::upwind1);

/// Step sizes the run will use: the explicit ones, or the advised ones.
MethodSpec method_for(const ScenarioConfig& config);

std::vector<ModeSpectrum> spectrum_for(const ScenarioConfig& config, const std::vector<int>& modes,
                                       Reconstruction symbol = Reconstruction::upwind1);

struct RunOptions {
  bool write_files = true;
  bool quiet = false;
  /// Diagnostics and progress; never stdout.
  std::ostream* log = nullptr;
};

struct RunResult {
  StepperState state;
  MethodSpec method;
  std::vector<SnapshotRecord> snapshots;
  std::vector<std::filesystem::path> files;
  std::optional<DistributionField> final_field;
};

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Command-line entry: run | spectrum | advise | validate. Returns 0 on
/// success, 1 for invalid input, 2 for a detected instability.
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bgkpi
