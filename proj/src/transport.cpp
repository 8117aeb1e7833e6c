#include "bgkpi/transport.hpp"

#include <algorithm>
#include <string>

#include "bgkpi/error.hpp"

namespace bgkpi {

int stencil_radius(Reconstruction order) noexcept {
  switch (order) {
    case Reconstruction::upwind1: return 1;
    case Reconstruction::weno2: return 2;
    case Reconstruction::weno3: return 2;
  }
  return 2;
}

namespace {

// Value at the face between `b` and `c`, reconstructed from the upwind side;
// `a` is the second upwind neighbour. Candidates are the two linear
// interpolants on {a, b} and {b, c}.
template <Reconstruction R>
inline double upwind_face(double a, double b, double c, double eps) {
  if constexpr (R == Reconstruction::upwind1) {
    return b;
  } else {
    constexpr double d0 = R == Reconstruction::weno3 ? 1.0 / 3.0 : 0.5;
    constexpr double d1 = 1.0 - d0;
    const double q0 = 1.5 * b - 0.5 * a;
    const double q1 = 0.5 * (b + c);
    const double s0 = eps + (b - a) * (b - a);
    const double s1 = eps + (c - b) * (c - b);
    const double a0 = d0 / (s0 * s0);
    const double a1 = d1 / (s1 * s1);
    return (a0 * q0 + a1 * q1) / (a0 + a1);
  }
}

// Face values for one grid line. `line` points at interior cell 0 of the
// line inside the padded buffer, `stride` separates neighbours along the
// axis. faces[f * nodes + j] is the face between cells f-1 and f.
template <Reconstruction R>
void line_faces(const double* line, std::ptrdiff_t stride, int n, std::span<const int> sign,
                double eps, double* faces) {
  const std::size_t nodes = sign.size();
  for (int f = 0; f <= n; ++f) {
    const double* m1 = line + (f - 1) * stride;
    const double* p0 = line + f * stride;
    double* out = faces + static_cast<std::size_t>(f) * nodes;
    if constexpr (R == Reconstruction::upwind1) {
      for (std::size_t j = 0; j < nodes; ++j)
        out[j] = sign[j] > 0 ? m1[j] : (sign[j] < 0 ? p0[j] : 0.0);
    } else {
      const double* m2 = line + (f - 2) * stride;
      const double* p1 = line + (f + 1) * stride;
      for (std::size_t j = 0; j < nodes; ++j) {
        if (sign[j] > 0) {
          out[j] = upwind_face<R>(m2[j], m1[j], p0[j], eps);
        } else if (sign[j] < 0) {
          out[j] = upwind_face<R>(p1[j], p0[j], m1[j], eps);
        } else {
          out[j] = 0.0;
        }
      }
    }
  }
}

void check_ghost(const SpatialGrid& grid, int ghost) {
  for (int a = 0; a < grid.dim(); ++a) {
    if (grid.cells(a) < ghost)
      throw Error(ErrorKind::GridTooSmall, "axis " + std::to_string(a) + " has " +
                                               std::to_string(grid.cells(a)) +
                                               " cells, fewer than the ghost width " +
                                               std::to_string(ghost));
  }
}

}  // namespace

PaddedField::PaddedField(const SpatialGrid& grid, std::size_t nodes, int ghost)
    : ghost_(ghost), nodes_(nodes) {
  cells_ = {grid.cells(0), grid.ny()};
  extent_ = {cells_[0] + 2 * ghost, grid.dim() == 2 ? cells_[1] + 2 * ghost : 1};
  data_.assign(static_cast<std::size_t>(extent_[0]) * static_cast<std::size_t>(extent_[1]) * nodes,
               0.0);
}

bool PaddedField::matches(const SpatialGrid& grid, std::size_t nodes, int ghost) const noexcept {
  return ghost_ == ghost && nodes_ == nodes && cells_[0] == grid.cells(0) && cells_[1] == grid.ny() &&
         extent_[1] == (grid.dim() == 2 ? grid.ny() + 2 * ghost : 1);
}

void fill_ghost_cells(std::span<const double> f, const SpatialGrid& grid, std::size_t nodes,
                      PaddedField& out) {
  const int g = out.ghost();
  check_ghost(grid, g);
  if (!out.matches(grid, nodes, g))
    throw Error(ErrorKind::GridMismatch, "padded buffer does not match the grid");
  if (f.size() != grid.size() * nodes)
    throw Error(ErrorKind::GridMismatch, "field size does not match the grid");

  const int nx = grid.cells(0);
  const int ny = grid.ny();
  auto copy = [&](std::span<const double> from, std::span<double> to) {
    std::copy(from.begin(), from.end(), to.begin());
  };

  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      copy(f.subspan(grid.index(ix, iy) * nodes, nodes), out.cell(ix, iy));

  const bool x_periodic = grid.axis(0).boundary == Boundary::periodic;
  for (int iy = 0; iy < ny; ++iy) {
    for (int k = 1; k <= g; ++k) {
      copy(out.cell(x_periodic ? nx - k : 0, iy), out.cell(-k, iy));
      copy(out.cell(x_periodic ? k - 1 : nx - 1, iy), out.cell(nx - 1 + k, iy));
    }
  }
  if (grid.dim() == 2) {
    const bool y_periodic = grid.axis(1).boundary == Boundary::periodic;
    for (int ix = -g; ix < nx + g; ++ix) {
      for (int k = 1; k <= g; ++k) {
        copy(out.cell(ix, y_periodic ? ny - k : 0), out.cell(ix, -k));
        copy(out.cell(ix, y_periodic ? k - 1 : ny - 1), out.cell(ix, ny - 1 + k));
      }
    }
  }
}

PaddedField fill_ghost_cells(const DistributionField& f, int ghost) {
  check_ghost(f.spatial(), ghost);
  PaddedField out(f.spatial(), f.velocity().size(), ghost);
  fill_ghost_cells(f.values(), f.spatial(), f.velocity().size(), out);
  return out;
}

double weno_derivative(std::span<const double> stencil, int v_sign, Reconstruction order,
                       double dx, double weno_epsilon) {
  const int g = stencil_radius(order);
  if (stencil.size() != static_cast<std::size_t>(2 * g + 1))
    throw Error(ErrorKind::GridMismatch, "stencil must hold 2g+1 values");
  if (v_sign == 0) return 0.0;
  const auto s = [&](int k) { return stencil[static_cast<std::size_t>(g + k)]; };
  const double eps = weno_epsilon;
  double right = 0.0;
  double left = 0.0;
  switch (order) {
    case Reconstruction::upwind1:
      right = v_sign > 0 ? s(0) : s(1);
      left = v_sign > 0 ? s(-1) : s(0);
      break;
    case Reconstruction::weno2:
      right = v_sign > 0 ? upwind_face<Reconstruction::weno2>(s(-1), s(0), s(1), eps)
                         : upwind_face<Reconstruction::weno2>(s(2), s(1), s(0), eps);
      left = v_sign > 0 ? upwind_face<Reconstruction::weno2>(s(-2), s(-1), s(0), eps)
                        : upwind_face<Reconstruction::weno2>(s(1), s(0), s(-1), eps);
      break;
    case Reconstruction::weno3:
      right = v_sign > 0 ? upwind_face<Reconstruction::weno3>(s(-1), s(0), s(1), eps)
                         : upwind_face<Reconstruction::weno3>(s(2), s(1), s(0), eps);
      left = v_sign > 0 ? upwind_face<Reconstruction::weno3>(s(-2), s(-1), s(0), eps)
                        : upwind_face<Reconstruction::weno3>(s(1), s(0), s(-1), eps);
      break;
  }
  return (right - left) / dx;
}

TransportOperator::TransportOperator(TransportOptions options) : options_(options) {}

void TransportOperator::apply(std::span<const double> f, const PhaseSpace& space,
                              std::span<double> out) {
  const auto& grid = space.x;
  const auto& vgrid = space.v;
  const std::size_t nodes = vgrid.size();
  const int g = stencil_radius(options_.order);
  if (!padded_.matches(grid, nodes, g)) padded_ = PaddedField(grid, nodes, g);
  fill_ghost_cells(f, grid, nodes, padded_);
  std::fill(out.begin(), out.end(), 0.0);

  std::vector<int> sign(nodes);
  std::vector<double> velocity(nodes);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    for (std::size_t j = 0; j < nodes; ++j) {
      velocity[j] = vgrid.component(j, axis);
      sign[j] = velocity[j] > 0.0 ? 1 : (velocity[j] < 0.0 ? -1 : 0);
    }
    const int n = grid.cells(axis);
    const int lines = grid.dim() == 2 ? grid.cells(1 - axis) : 1;
    const auto stride = static_cast<std::ptrdiff_t>(padded_.stride(axis));
    const double inv_dx = 1.0 / grid.axis(axis).spacing();
    faces_.resize(static_cast<std::size_t>(n + 1) * nodes);

    for (int line = 0; line < lines; ++line) {
      const int ix0 = axis == 0 ? 0 : line;
      const int iy0 = axis == 0 ? line : 0;
      const double* base = padded_.cell(ix0, iy0).data();
      switch (options_.order) {
        case Reconstruction::upwind1:
          line_faces<Reconstruction::upwind1>(base, stride, n, sign, options_.weno_epsilon, faces_.data());
          break;
        case Reconstruction::weno2:
          line_faces<Reconstruction::weno2>(base, stride, n, sign, options_.weno_epsilon, faces_.data());
          break;
        case Reconstruction::weno3:
          line_faces<Reconstruction::weno3>(base, stride, n, sign, options_.weno_epsilon, faces_.data());
          break;
      }
      for (int i = 0; i < n; ++i) {
        const std::size_t cell = axis == 0 ? grid.index(i, iy0) : grid.index(ix0, i);
        double* o = out.data() + cell * nodes;
        const double* right = faces_.data() + static_cast<std::size_t>(i + 1) * nodes;
        const double* left = faces_.data() + static_cast<std::size_t>(i) * nodes;
        for (std::size_t j = 0; j < nodes; ++j) o[j] -= velocity[j] * (right[j] - left[j]) * inv_dx;
      }
    }
  }
}

DistributionField transport_rhs(const DistributionField& f, const TransportOptions& options) {
  TransportOperator op(options);
  DistributionField out(f.space_ptr());
  op.apply(f.values(), f.space(), out.values());
  return out;
}

std::vector<double> linear_stencil(Reconstruction order) {
  switch (order) {
    case Reconstruction::upwind1: return {-1.0, 1.0, 0.0};
    case Reconstruction::weno2: return {0.25, -1.25, 0.75, 0.25, 0.0};
    case Reconstruction::weno3: return {1.0 / 6.0, -1.0, 0.5, 1.0 / 3.0, 0.0};
  }
  return {};
}

}  // namespace bgkpi
