#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bgkpi {

/// Uniform tensor-product velocity grid on the symmetric box [-bound, bound]^dim.
///
/// Nodes sit at cell midpoints, so every node carries the same quadrature
/// weight dv^dim. For dim == 2 the node index is j = jx * nodes_per_axis + jy.
class VelocityGrid {
 public:
  VelocityGrid(int dim, int nodes_per_axis, double bound);

  int dim() const noexcept { return dim_; }
  int nodes_per_axis() const noexcept { return nodes_per_axis_; }
  std::size_t size() const noexcept { return size_; }
  double bound() const noexcept { return bound_; }
  double spacing() const noexcept { return spacing_; }
  double weight() const noexcept { return weight_; }

  /// Coordinates of the 1D nodes shared by every axis.
  std::span<const double> axis_nodes() const noexcept { return axis_nodes_; }
  /// Component `axis` of velocity node j.
  double component(std::size_t j, int axis) const noexcept {
    return nodes_[j * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)];
  }
  double speed_squared(std::size_t j) const noexcept;

  bool operator==(const VelocityGrid& other) const noexcept;

 private:
  int dim_;
  int nodes_per_axis_;
  std::size_t size_;
  double bound_;
  double spacing_;
  double weight_;
  std::vector<double> axis_nodes_;
  std::vector<double> nodes_;
};

enum class Boundary { outflow, periodic };

struct SpatialAxis {
  int cells = 1;
  double lo = 0.0;
  double hi = 1.0;
  Boundary boundary = Boundary::outflow;

  double length() const noexcept { return hi - lo; }
  double spacing() const noexcept { return (hi - lo) / cells; }
  double center(int i) const noexcept { return lo + (i + 0.5) * spacing(); }
  bool operator==(const SpatialAxis&) const = default;
};

/// Cartesian cell-centred mesh in one or two dimensions. Cells are numbered
/// x-major: cell = ix * ny + iy.
class SpatialGrid {
 public:
  explicit SpatialGrid(std::vector<SpatialAxis> axes);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const SpatialAxis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  std::size_t size() const noexcept { return size_; }
  int cells(int a) const { return axis(a).cells; }
  /// Cells along y, 1 for a 1D grid.
  int ny() const noexcept { return dim() == 2 ? axes_[1].cells : 1; }
  std::size_t index(int ix, int iy = 0) const noexcept {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny()) +
           static_cast<std::size_t>(iy);
  }
  std::array<double, 2> center(std::size_t cell) const noexcept;
  /// Volume of one cell (dx or dx*dy).
  double cell_volume() const noexcept;

  bool operator==(const SpatialGrid& other) const noexcept { return axes_ == other.axes_; }

 private:
  std::vector<SpatialAxis> axes_;
  std::size_t size_;
};

struct PhaseSpace {
  SpatialGrid x;
  VelocityGrid v;

  std::size_t size() const noexcept { return x.size() * v.size(); }
};

std::shared_ptr<const PhaseSpace> make_phase_space(SpatialGrid x, VelocityGrid v);

/// Phase-space density f(cell, node), stored space-major with the velocity
/// profile of each cell contiguous.
class DistributionField {
 public:
  explicit DistributionField(std::shared_ptr<const PhaseSpace> space);
  DistributionField(std::shared_ptr<const PhaseSpace> space, std::vector<double> values);

  const PhaseSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const PhaseSpace>& space_ptr() const noexcept { return space_; }
  const SpatialGrid& spatial() const noexcept { return space_->x; }
  const VelocityGrid& velocity() const noexcept { return space_->v; }

  std::span<double> cell(std::size_t c) noexcept {
    return {values_.data() + c * space_->v.size(), space_->v.size()};
  }
  std::span<const double> cell(std::size_t c) const noexcept {
    return {values_.data() + c * space_->v.size(), space_->v.size()};
  }
  double& operator()(std::size_t c, std::size_t j) noexcept {
    return values_[c * space_->v.size() + j];
  }
  double operator()(std::size_t c, std::size_t j) const noexcept {
    return values_[c * space_->v.size() + j];
  }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  /// Sum over cells and nodes of w_j f dx^Dx.
  double total_mass() const noexcept;

 private:
  std::shared_ptr<const PhaseSpace> space_;
  std::vector<double> values_;
};

/// Moments of a single velocity profile.
struct CellMoments {
  double rho = 0.0;
  std::array<double, 2> u{0.0, 0.0};
  double T = 0.0;
  double E = 0.0;
  std::array<double, 2> q{0.0, 0.0};
};

/// Per-cell macroscopic fields. Vector quantities are stored cell-major with
/// `dim` components each.
struct MomentField {
  int dim = 1;
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> T;
  std::vector<double> E;
  std::vector<double> q;

  std::size_t size() const noexcept { return rho.size(); }
  CellMoments at(std::size_t c) const noexcept;
};

/// Discrete Maxwellian rho/(2 pi T)^(D/2) exp(-|v-u|^2/(2T)) at every node.
/// Throws Error(NonPositiveInput) unless rho > 0 and T > 0.
std::vector<double> maxwellian(double rho, std::span<const double> u, double T,
                               const VelocityGrid& grid);
void maxwellian(double rho, std::span<const double> u, double T, const VelocityGrid& grid,
                std::span<double> out);

/// Maxwellian whose *discrete* density, velocity and temperature match the
/// targets to round-off. The inputs are corrected by fixed-point iteration on
/// the quadrature error, then the density is rescaled so mass is exact.
void corrected_maxwellian(double rho, std::span<const double> u, double T,
                          const VelocityGrid& grid, std::span<double> out);

/// Density, velocity and temperature of one profile (E and q left at zero).
/// Throws InstabilityError for rho <= 0 or T <= 0 (including NaN).
CellMoments profile_moments(std::span<const double> f, const VelocityGrid& grid);

/// Full moments (rho, u, T, E, q) of one profile.
CellMoments profile_moments_full(std::span<const double> f, const VelocityGrid& grid);

/// Moments of every cell; failures carry the offending cell index.
MomentField compute_moments(const DistributionField& f);

/// q^d = 1/2 sum_j w |c_j|^2 c_j^d f_j with c = v - u, per cell. `u` holds
/// dim components per cell.
std::vector<double> compute_heat_flux(const DistributionField& f, std::span<const double> u);

/// Cells where |u_d| + 5 sqrt(T) exceeds the velocity bound on some axis,
/// i.e. where the truncated Gaussian tail is no longer negligible.
std::vector<std::size_t> cells_outside_velocity_domain(const MomentField& m,
                                                        const VelocityGrid& grid);

}  // namespace bgkpi
