#include "bgkpi/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bgkpi/error.hpp"

namespace bgkpi {

VelocityGrid::VelocityGrid(int dim, int nodes_per_axis, double bound)
    : dim_(dim), nodes_per_axis_(nodes_per_axis), bound_(bound) {
  if (dim != 1 && dim != 2)
    throw Error(ErrorKind::UnsupportedDimension,
                "velocity dimension must be 1 or 2, got " + std::to_string(dim));
  if (nodes_per_axis < 1)
    throw Error(ErrorKind::InvalidParameters, "velocity grid needs at least one node per axis");
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw Error(ErrorKind::InvalidParameters, "velocity bound must be positive and finite");

  spacing_ = 2.0 * bound / nodes_per_axis;
  weight_ = dim == 1 ? spacing_ : spacing_ * spacing_;
  axis_nodes_.resize(static_cast<std::size_t>(nodes_per_axis));
  // Mirror pairs are computed from the same expression so the grid is exactly
  // symmetric about zero.
  for (int k = 0; k < nodes_per_axis; ++k) {
    const int mirror = nodes_per_axis - 1 - k;
    const double offset = (mirror - k) * 0.5 * spacing_;
    axis_nodes_[static_cast<std::size_t>(k)] = -offset;
  }

  size_ = dim == 1 ? axis_nodes_.size() : axis_nodes_.size() * axis_nodes_.size();
  nodes_.resize(size_ * static_cast<std::size_t>(dim));
  if (dim == 1) {
    nodes_ = axis_nodes_;
  } else {
    std::size_t j = 0;
    for (double vx : axis_nodes_) {
      for (double vy : axis_nodes_) {
        nodes_[2 * j] = vx;
        nodes_[2 * j + 1] = vy;
        ++j;
      }
    }
  }
}

double VelocityGrid::speed_squared(std::size_t j) const noexcept {
  double s = 0.0;
  for (int d = 0; d < dim_; ++d) s += component(j, d) * component(j, d);
  return s;
}

bool VelocityGrid::operator==(const VelocityGrid& other) const noexcept {
  return dim_ == other.dim_ && nodes_per_axis_ == other.nodes_per_axis_ && bound_ == other.bound_;
}

SpatialGrid::SpatialGrid(std::vector<SpatialAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2)
    throw Error(ErrorKind::UnsupportedDimension,
                "spatial dimension must be 1 or 2, got " + std::to_string(axes_.size()));
  size_ = 1;
  for (const auto& a : axes_) {
    if (a.cells < 1) throw Error(ErrorKind::InvalidParameters, "axis needs at least one cell");
    if (!(a.hi > a.lo)) throw Error(ErrorKind::InvalidParameters, "axis bounds must satisfy lo < hi");
    size_ *= static_cast<std::size_t>(a.cells);
  }
}

std::array<double, 2> SpatialGrid::center(std::size_t cell) const noexcept {
  const auto n_y = static_cast<std::size_t>(ny());
  const int ix = static_cast<int>(cell / n_y);
  const int iy = static_cast<int>(cell % n_y);
  return {axes_[0].center(ix), dim() == 2 ? axes_[1].center(iy) : 0.0};
}

double SpatialGrid::cell_volume() const noexcept {
  double vol = 1.0;
  for (const auto& a : axes_) vol *= a.spacing();
  return vol;
}

std::shared_ptr<const PhaseSpace> make_phase_space(SpatialGrid x, VelocityGrid v) {
  if (x.dim() > v.dim())
    throw Error(ErrorKind::DimensionMismatch, "spatial dimension " + std::to_string(x.dim()) +
                                                  " exceeds velocity dimension " +
                                                  std::to_string(v.dim()));
  return std::make_shared<const PhaseSpace>(PhaseSpace{std::move(x), std::move(v)});
}

DistributionField::DistributionField(std::shared_ptr<const PhaseSpace> space)
    : space_(std::move(space)), values_(space_->size(), 0.0) {}

DistributionField::DistributionField(std::shared_ptr<const PhaseSpace> space,
                                     std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->size())
    throw Error(ErrorKind::GridMismatch, "distribution values do not match the phase-space size");
}

bool DistributionField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double DistributionField::total_mass() const noexcept {
  double sum = 0.0;
  for (double x : values_) sum += x;
  return sum * space_->v.weight() * space_->x.cell_volume();
}

CellMoments MomentField::at(std::size_t c) const noexcept {
  CellMoments m;
  m.rho = rho[c];
  m.T = T[c];
  m.E = E[c];
  for (int d = 0; d < dim; ++d) {
    m.u[static_cast<std::size_t>(d)] = u[c * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
    m.q[static_cast<std::size_t>(d)] = q[c * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
  }
  return m;
}

void maxwellian(double rho, std::span<const double> u, double T, const VelocityGrid& grid,
                std::span<double> out) {
  if (!(rho > 0.0) || !(T > 0.0))
    throw Error(ErrorKind::NonPositiveInput, "maxwellian needs rho > 0 and T > 0 (rho=" +
                                                 std::to_string(rho) + ", T=" + std::to_string(T) + ")");
  if (out.size() != grid.size() || u.size() < static_cast<std::size_t>(grid.dim()))
    throw Error(ErrorKind::GridMismatch, "maxwellian output or velocity has the wrong size");

  const int dim = grid.dim();
  const double prefactor = rho / std::pow(2.0 * std::numbers::pi * T, 0.5 * dim);
  const double inv_two_t = 1.0 / (2.0 * T);
  if (dim == 1) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double c = grid.component(j, 0) - u[0];
      out[j] = prefactor * std::exp(-c * c * inv_two_t);
    }
    return;
  }
  // Separable: M(vx, vy) = prefactor * gx(vx) * gy(vy).
  const auto nodes = grid.axis_nodes();
  const std::size_t n = nodes.size();
  std::vector<double> gx(n), gy(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double cx = nodes[k] - u[0];
    const double cy = nodes[k] - u[1];
    gx[k] = std::exp(-cx * cx * inv_two_t);
    gy[k] = std::exp(-cy * cy * inv_two_t);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out[a * n + b] = prefactor * gx[a] * gy[b];
}

std::vector<double> maxwellian(double rho, std::span<const double> u, double T,
                               const VelocityGrid& grid) {
  std::vector<double> out(grid.size());
  maxwellian(rho, u, T, grid, out);
  return out;
}

namespace {

// rho, u, T of a profile without positivity checks; returns false if the
// profile is unphysical.
bool raw_moments(std::span<const double> f, const VelocityGrid& grid, CellMoments& m) {
  const int dim = grid.dim();
  const double w = grid.weight();
  double s0 = 0.0;
  std::array<double, 2> s1{0.0, 0.0};
  if (dim == 1) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      s0 += f[j];
      s1[0] += grid.component(j, 0) * f[j];
    }
  } else {
    for (std::size_t j = 0; j < f.size(); ++j) {
      s0 += f[j];
      s1[0] += grid.component(j, 0) * f[j];
      s1[1] += grid.component(j, 1) * f[j];
    }
  }
  m.rho = w * s0;
  if (!(m.rho > 0.0) || !std::isfinite(m.rho)) return false;
  for (int d = 0; d < dim; ++d) m.u[static_cast<std::size_t>(d)] = s1[static_cast<std::size_t>(d)] / s0;

  double s2 = 0.0;
  if (dim == 1) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double c = grid.component(j, 0) - m.u[0];
      s2 += c * c * f[j];
    }
  } else {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double cx = grid.component(j, 0) - m.u[0];
      const double cy = grid.component(j, 1) - m.u[1];
      s2 += (cx * cx + cy * cy) * f[j];
    }
  }
  m.T = s2 / (dim * s0);
  return m.T > 0.0 && std::isfinite(m.T);
}

void finish_energy(CellMoments& m, int dim) {
  double u2 = 0.0;
  for (int d = 0; d < dim; ++d) u2 += m.u[static_cast<std::size_t>(d)] * m.u[static_cast<std::size_t>(d)];
  m.E = 0.5 * m.rho * u2 + 0.5 * dim * m.rho * m.T;
}

std::array<double, 2> heat_flux(std::span<const double> f, const VelocityGrid& grid,
                                std::span<const double> u) {
  const int dim = grid.dim();
  std::array<double, 2> q{0.0, 0.0};
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::array<double, 2> c{0.0, 0.0};
    double c2 = 0.0;
    for (int d = 0; d < dim; ++d) {
      c[static_cast<std::size_t>(d)] = grid.component(j, d) - u[static_cast<std::size_t>(d)];
      c2 += c[static_cast<std::size_t>(d)] * c[static_cast<std::size_t>(d)];
    }
    for (int d = 0; d < dim; ++d) q[static_cast<std::size_t>(d)] += c2 * c[static_cast<std::size_t>(d)] * f[j];
  }
  for (auto& x : q) x *= 0.5 * grid.weight();
  return q;
}

}  // namespace

CellMoments profile_moments(std::span<const double> f, const VelocityGrid& grid) {
  if (f.size() != grid.size())
    throw Error(ErrorKind::GridMismatch, "profile length does not match the velocity grid");
  CellMoments m;
  if (!raw_moments(f, grid, m)) {
    if (!(m.rho > 0.0) || !std::isfinite(m.rho))
      throw InstabilityError(ErrorKind::NonPositiveDensity, "rho=" + std::to_string(m.rho));
    throw InstabilityError(ErrorKind::NonPositiveTemperature, "T=" + std::to_string(m.T));
  }
  return m;
}

CellMoments profile_moments_full(std::span<const double> f, const VelocityGrid& grid) {
  CellMoments m = profile_moments(f, grid);
  finish_energy(m, grid.dim());
  m.q = heat_flux(f, grid, m.u);
  return m;
}

void corrected_maxwellian(double rho, std::span<const double> u, double T,
                          const VelocityGrid& grid, std::span<double> out) {
  const int dim = grid.dim();
  double rho_in = rho;
  std::array<double, 2> u_in{u[0], dim == 2 ? u[1] : 0.0};
  double t_in = T;
  constexpr int max_iterations = 12;
  for (int it = 0; it < max_iterations; ++it) {
    maxwellian(rho_in, u_in, t_in, grid, out);
    CellMoments got;
    if (!raw_moments(out, grid, got)) break;
    double change = std::abs(got.T / T - 1.0);
    t_in *= T / got.T;
    for (int d = 0; d < dim; ++d) {
      const auto k = static_cast<std::size_t>(d);
      const double du = u[k] - got.u[k];
      change = std::max(change, std::abs(du) / std::sqrt(T));
      u_in[k] += du;
    }
    rho_in *= rho / got.rho;
    if (change < 1e-15) break;
  }
  maxwellian(rho_in, u_in, t_in, grid, out);
  double mass = 0.0;
  for (double x : out) mass += x;
  const double scale = rho / (mass * grid.weight());
  for (double& x : out) x *= scale;
}

MomentField compute_moments(const DistributionField& f) {
  const auto& grid = f.velocity();
  const int dim = grid.dim();
  const std::size_t cells = f.spatial().size();
  MomentField m;
  m.dim = dim;
  m.rho.resize(cells);
  m.T.resize(cells);
  m.E.resize(cells);
  m.u.resize(cells * static_cast<std::size_t>(dim));
  m.q.resize(cells * static_cast<std::size_t>(dim));
  for (std::size_t c = 0; c < cells; ++c) {
    CellMoments cm;
    try {
      cm = profile_moments_full(f.cell(c), grid);
    } catch (InstabilityError& e) {
      e.context().cell = c;
      throw;
    }
    m.rho[c] = cm.rho;
    m.T[c] = cm.T;
    m.E[c] = cm.E;
    for (int d = 0; d < dim; ++d) {
      const auto k = static_cast<std::size_t>(d);
      m.u[c * static_cast<std::size_t>(dim) + k] = cm.u[k];
      m.q[c * static_cast<std::size_t>(dim) + k] = cm.q[k];
    }
  }
  return m;
}

std::vector<double> compute_heat_flux(const DistributionField& f, std::span<const double> u) {
  const auto& grid = f.velocity();
  const auto dim = static_cast<std::size_t>(grid.dim());
  const std::size_t cells = f.spatial().size();
  if (u.size() != cells * dim)
    throw Error(ErrorKind::GridMismatch, "velocity field does not match the number of cells");
  std::vector<double> q(cells * dim);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto qc = heat_flux(f.cell(c), grid, u.subspan(c * dim, dim));
    for (std::size_t d = 0; d < dim; ++d) {
      if (!std::isfinite(qc[d]))
        throw InstabilityError(ErrorKind::StepUnstable, "non-finite heat flux", {.cell = c});
      q[c * dim + d] = qc[d];
    }
  }
  return q;
}

std::vector<std::size_t> cells_outside_velocity_domain(const MomentField& m,
                                                        const VelocityGrid& grid) {
  std::vector<std::size_t> out;
  const auto dim = static_cast<std::size_t>(m.dim);
  for (std::size_t c = 0; c < m.size(); ++c) {
    const double spread = 5.0 * std::sqrt(m.T[c]);
    for (std::size_t d = 0; d < dim; ++d) {
      if (std::abs(m.u[c * dim + d]) + spread > grid.bound()) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

}  // namespace bgkpi
