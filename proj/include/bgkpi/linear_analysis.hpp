#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgkpi/integrators.hpp"
#include "bgkpi/phase_space.hpp"
#include "bgkpi/transport.hpp"

namespace bgkpi {

/// (g, h) = sum_j w_j g_j h_j (2 pi)^(-D/2) exp(-|v_j|^2 / 2).
double weighted_inner_product(std::span<const double> g, std::span<const double> h,
                              const VelocityGrid& grid);

/// Gaussian weight (2 pi)^(-D/2) exp(-|v_j|^2 / 2) at every node.
std::vector<double> gaussian_weight(const VelocityGrid& grid);

/// Collision-invariant basis sampled on a velocity grid.
///
/// `analytic` holds the closed-form functions 1, v^1..v^D, (|v|^2 - D) / 2^(D/2)
/// row by row. They are orthonormal only up to quadrature error, so
/// `orthonormal` keeps a copy re-orthonormalised by modified Gram-Schmidt
/// under the discrete weighted product; all projections use that copy.
struct WeightedBasis {
  VelocityGrid grid;
  Eigen::MatrixXd analytic;
  Eigen::MatrixXd orthonormal;
  Eigen::VectorXd gaussian;

  int dim() const noexcept { return grid.dim(); }
  int rank() const noexcept { return grid.dim() + 2; }
};

/// Throws Error(UnsupportedDimension) unless the grid is 1D or 2D.
WeightedBasis build_basis(const VelocityGrid& grid);

/// Discrete Gram matrix of the rows of `functions` under the weighted product.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& functions, const VelocityGrid& grid);

/// Pi f = sum_k Psi_k (Psi_k, f).
std::vector<double> project(std::span<const double> f, const WeightedBasis& basis);

/// Linearised equilibrium around the global Maxwellian; same formula as project().
std::vector<double> linearized_maxwellian(std::span<const double> f, const WeightedBasis& basis);

/// Matrix of Pi acting on nodal values.
Eigen::MatrixXd projection_matrix(const WeightedBasis& basis);

/// Linearised operator -diag(sigma) - (I - Pi)/epsilon for one Fourier mode,
/// in nodal coordinates.
struct LinearOperatorMatrix {
  Eigen::MatrixXcd matrix;
  double epsilon = 1.0;
  int mode = 0;
};

struct FourierAxis {
  double dx = 1.0;
  int cells = 1;
};

/// Fourier symbol sigma_m(v) of the linear-weight discretisation of v d/dx
/// at mode m, i.e. v d/dx e^{i theta i} = sigma e^{i theta i}, theta = 2 pi m / I.
std::complex<double> transport_symbol(double v, int mode, const FourierAxis& axis,
                                      Reconstruction order);

LinearOperatorMatrix linearized_operator(double epsilon, const FourierAxis& axis,
                                         const WeightedBasis& basis, int mode,
                                         Reconstruction order = Reconstruction::upwind1);

/// Eigenvalues of -(I - Pi)/epsilon in ascending order.
std::vector<double> collision_spectrum(double epsilon, const WeightedBasis& basis);

struct ModeSpectrum {
  int mode = 0;
  std::vector<std::complex<double>> eigenvalues;
};

/// Eigenvalues of the per-mode operator for every requested mode (all I
/// modes when `modes` is empty). The operator is self-adjoint up to the
/// diagonal transport symbol in the weighted product, so it is solved in the
/// similar orthonormal frame rather than in nodal coordinates.
std::vector<ModeSpectrum> transport_collision_spectrum(double epsilon, const FourierAxis& axis,
                                                       const WeightedBasis& basis,
                                                       std::span<const int> modes = {},
                                                       Reconstruction order = Reconstruction::upwind1);

/// Amplification factor of one projective step (PFE when the tableau has a
/// single stage) applied to y' = lambda y.
std::complex<double> projective_amplification(std::complex<double> lambda, const ButcherTableau& t,
                                              const ProjectiveParameters& p);

struct AdviceOptions {
  double cfl_fraction = 0.4;
  int inner_steps = 2;
  ButcherTableau tableau = ButcherTableau::classical_rk4();
  Reconstruction symbol = Reconstruction::upwind1;
  std::vector<int> modes;
};

struct Advice {
  ProjectiveParameters parameters;
  double max_amplification = 0.0;
  int worst_mode = 0;
  std::complex<double> worst_eigenvalue{};
  /// The inner steps alone cover the CFL-sized outer step: projection buys
  /// nothing and a direct integrator is the better choice.
  bool recommend_direct = false;
  bool stable = true;

  double margin() const noexcept { return 1.0 - max_amplification; }
};

/// delta_t = epsilon, K inner steps, Delta_t = cfl * dx, checked against the
/// projective amplification of every computed eigenvalue. Throws
/// Error(AdviceRejected) when the check fails for non-degenerate advice.
Advice advise_parameters(double epsilon, const FourierAxis& axis, const WeightedBasis& basis,
                         const AdviceOptions& options = {});

}  // namespace bgkpi
