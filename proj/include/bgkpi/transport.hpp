#pragma once

#include <array>
#include <span>
#include <vector>

#include "bgkpi/phase_space.hpp"

namespace bgkpi {

enum class Reconstruction { upwind1, weno2, weno3 };

/// Ghost cells needed on each side of an axis for the given reconstruction.
int stencil_radius(Reconstruction order) noexcept;

struct TransportOptions {
  Reconstruction order = Reconstruction::weno3;
  double weno_epsilon = 1e-6;
};

/// Copy of a distribution field extended by `ghost` layers of ghost cells on
/// every spatial axis. Padded cell (px, py) maps to interior cell
/// (px - ghost, py - ghost); a 1D field has no y padding.
class PaddedField {
 public:
  PaddedField() = default;
  PaddedField(const SpatialGrid& grid, std::size_t nodes, int ghost);

  int ghost() const noexcept { return ghost_; }
  int extent(int axis) const noexcept { return extent_[static_cast<std::size_t>(axis)]; }
  std::size_t nodes() const noexcept { return nodes_; }

  /// Profile at interior-relative coordinates; ix in [-ghost, nx + ghost).
  std::span<double> cell(int ix, int iy = 0) noexcept {
    return {data_.data() + offset(ix, iy), nodes_};
  }
  std::span<const double> cell(int ix, int iy = 0) const noexcept {
    return {data_.data() + offset(ix, iy), nodes_};
  }
  /// Distance in doubles between neighbouring cells along `axis`.
  std::size_t stride(int axis) const noexcept {
    return axis == 0 ? static_cast<std::size_t>(extent_[1]) * nodes_ : nodes_;
  }
  const double* data() const noexcept { return data_.data(); }

  bool matches(const SpatialGrid& grid, std::size_t nodes, int ghost) const noexcept;

 private:
  std::size_t offset(int ix, int iy) const noexcept {
    const int py = extent_[1] == 1 ? 0 : iy + ghost_;
    return (static_cast<std::size_t>(ix + ghost_) * static_cast<std::size_t>(extent_[1]) +
            static_cast<std::size_t>(py)) *
           nodes_;
  }

  int ghost_ = 0;
  std::array<int, 2> extent_{0, 1};
  std::array<int, 2> cells_{0, 1};
  std::size_t nodes_ = 0;
  std::vector<double> data_;
};

/// Pads `f` with ghost cells: periodic axes copy cyclically, outflow axes
/// repeat the nearest interior cell. The x axis is filled before the y axis,
/// so corners come from the already x-extended data.
/// Throws Error(GridTooSmall) if an axis has fewer cells than `ghost`.
PaddedField fill_ghost_cells(const DistributionField& f, int ghost);
void fill_ghost_cells(std::span<const double> f, const SpatialGrid& grid, std::size_t nodes,
                      PaddedField& out);

/// Upwind-biased approximation of df/dx at the centre of `stencil`, which
/// holds the 2g+1 values f_{i-g} .. f_{i+g} with g = stencil_radius(order).
/// `v_sign` selects the upwind side; v_sign == 0 returns 0.
double weno_derivative(std::span<const double> stencil, int v_sign, Reconstruction order,
                       double dx, double weno_epsilon = 1e-6);

/// Evaluates -sum_axes v^axis d_axis f for a whole field, reusing its ghost
/// and face buffers between calls.
class TransportOperator {
 public:
  explicit TransportOperator(TransportOptions options = {});

  const TransportOptions& options() const noexcept { return options_; }
  void apply(std::span<const double> f, const PhaseSpace& space, std::span<double> out);

 private:
  TransportOptions options_;
  PaddedField padded_;
  std::vector<double> faces_;
};

/// -v . grad_x f for every (cell, node).
DistributionField transport_rhs(const DistributionField& f, const TransportOptions& options = {});

/// Coefficients c_k of the linear-weight stencil df/dx ~ (1/dx) sum_k c_k f_{i+k}
/// for positive velocity, indexed from k = -g.
std::vector<double> linear_stencil(Reconstruction order);

}  // namespace bgkpi
