#include "bgkpi/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bgkpi/error.hpp"

namespace bgkpi {

namespace {

void require_same_grid(std::size_t n, const VelocityGrid& grid) {
  if (n != grid.size())
    throw Error(ErrorKind::GridMismatch, "profile of length " + std::to_string(n) +
                                             " does not match a velocity grid of " +
                                             std::to_string(grid.size()) + " nodes");
}

// Quadrature weight times Gaussian weight per node.
Eigen::VectorXd product_weight(const VelocityGrid& grid) {
  const auto g = gaussian_weight(grid);
  Eigen::VectorXd w(static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j) w[static_cast<Eigen::Index>(j)] = grid.weight() * g[j];
  return w;
}

// Columns are orthonormal in the Euclidean product: Q = W^{1/2} Psi^T.
Eigen::MatrixXd orthonormal_frame(const WeightedBasis& basis) {
  const Eigen::VectorXd root = product_weight(basis.grid).cwiseSqrt();
  return root.asDiagonal() * basis.orthonormal.transpose();
}

double inverse(double epsilon) { return std::isinf(epsilon) ? 0.0 : 1.0 / epsilon; }

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::NonPositiveInput, "epsilon must be positive");
}

}  // namespace

std::vector<double> gaussian_weight(const VelocityGrid& grid) {
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim());
  std::vector<double> g(grid.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = norm * std::exp(-0.5 * grid.speed_squared(j));
  return g;
}

double weighted_inner_product(std::span<const double> g, std::span<const double> h,
                              const VelocityGrid& grid) {
  require_same_grid(g.size(), grid);
  require_same_grid(h.size(), grid);
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim());
  double sum = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    sum += g[j] * h[j] * std::exp(-0.5 * grid.speed_squared(j));
  return sum * norm * grid.weight();
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& functions, const VelocityGrid& grid) {
  require_same_grid(static_cast<std::size_t>(functions.cols()), grid);
  const Eigen::VectorXd w = product_weight(grid);
  return functions * w.asDiagonal() * functions.transpose();
}

WeightedBasis build_basis(const VelocityGrid& grid) {
  const int dim = grid.dim();
  if (dim != 1 && dim != 2)
    throw Error(ErrorKind::UnsupportedDimension, "basis is defined for 1 or 2 velocity dimensions");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const int rank = dim + 2;
  WeightedBasis basis{grid, Eigen::MatrixXd(rank, n), Eigen::MatrixXd(rank, n), Eigen::VectorXd(n)};

  const double energy_norm = std::pow(2.0, 0.5 * dim);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto node = static_cast<std::size_t>(j);
    basis.analytic(0, j) = 1.0;
    for (int d = 0; d < dim; ++d) basis.analytic(1 + d, j) = grid.component(node, d);
    basis.analytic(dim + 1, j) = (grid.speed_squared(node) - dim) / energy_norm;
  }
  const auto g = gaussian_weight(grid);
  for (Eigen::Index j = 0; j < n; ++j) basis.gaussian[j] = g[static_cast<std::size_t>(j)];

  // Modified Gram-Schmidt, two sweeps.
  const Eigen::VectorXd w = product_weight(grid);
  Eigen::MatrixXd psi = basis.analytic;
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int k = 0; k < rank; ++k) {
      for (int l = 0; l < k; ++l) {
        const double overlap = psi.row(k).cwiseProduct(w.transpose()).dot(psi.row(l));
        psi.row(k) -= overlap * psi.row(l);
      }
      const double norm = std::sqrt(psi.row(k).cwiseProduct(w.transpose()).dot(psi.row(k)));
      psi.row(k) /= norm;
    }
  }
  basis.orthonormal = psi;
  return basis;
}

std::vector<double> project(std::span<const double> f, const WeightedBasis& basis) {
  require_same_grid(f.size(), basis.grid);
  const auto n = static_cast<Eigen::Index>(f.size());
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), n);
  const Eigen::VectorXd w = product_weight(basis.grid);
  const Eigen::VectorXd coeffs = basis.orthonormal * w.cwiseProduct(fv);
  const Eigen::VectorXd out = basis.orthonormal.transpose() * coeffs;
  return {out.data(), out.data() + n};
}

std::vector<double> linearized_maxwellian(std::span<const double> f, const WeightedBasis& basis) {
  return project(f, basis);
}

Eigen::MatrixXd projection_matrix(const WeightedBasis& basis) {
  const Eigen::VectorXd w = product_weight(basis.grid);
  return basis.orthonormal.transpose() * basis.orthonormal * w.asDiagonal();
}

std::complex<double> transport_symbol(double v, int mode, const FourierAxis& axis,
                                      Reconstruction order) {
  if (v == 0.0) return {0.0, 0.0};
  const double theta = 2.0 * std::numbers::pi * mode / axis.cells;
  const auto coeffs = linear_stencil(order);
  const int g = stencil_radius(order);
  std::complex<double> s{0.0, 0.0};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double shift = static_cast<double>(static_cast<int>(k) - g);
    s += coeffs[k] * std::polar(1.0, shift * theta);
  }
  // The stencil for v < 0 is the mirror image c'_k = -c_{-k}.
  return std::abs(v) / axis.dx * (v > 0.0 ? s : std::conj(s));
}

LinearOperatorMatrix linearized_operator(double epsilon, const FourierAxis& axis,
                                         const WeightedBasis& basis, int mode,
                                         Reconstruction order) {
  require_epsilon(epsilon);
  const auto n = static_cast<Eigen::Index>(basis.grid.size());
  const Eigen::MatrixXd complement = Eigen::MatrixXd::Identity(n, n) - projection_matrix(basis);
  LinearOperatorMatrix op{(-inverse(epsilon) * complement).cast<std::complex<double>>(), epsilon, mode};
  for (Eigen::Index j = 0; j < n; ++j)
    op.matrix(j, j) -= transport_symbol(basis.grid.component(static_cast<std::size_t>(j), 0), mode,
                                        axis, order);
  return op;
}

std::vector<double> collision_spectrum(double epsilon, const WeightedBasis& basis) {
  require_epsilon(epsilon);
  const Eigen::MatrixXd q = orthonormal_frame(basis);
  const auto n = q.rows();
  const Eigen::MatrixXd op =
      -inverse(epsilon) * (Eigen::MatrixXd::Identity(n, n) - q * q.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::EigensolverFailure, "collision spectrum did not converge");
  const Eigen::VectorXd ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ModeSpectrum> transport_collision_spectrum(double epsilon, const FourierAxis& axis,
                                                       const WeightedBasis& basis,
                                                       std::span<const int> modes,
                                                       Reconstruction order) {
  require_epsilon(epsilon);
  if (axis.cells < 1 || !(axis.dx > 0.0))
    throw Error(ErrorKind::InvalidParameters, "Fourier axis needs cells >= 1 and dx > 0");
  std::vector<int> all;
  if (modes.empty()) {
    for (int m = 0; m < axis.cells; ++m) all.push_back(m);
    modes = all;
  }
  const Eigen::MatrixXd q = orthonormal_frame(basis);
  const auto n = q.rows();
  const Eigen::MatrixXcd collision =
      (-inverse(epsilon) * (Eigen::MatrixXd::Identity(n, n) - q * q.transpose()))
          .cast<std::complex<double>>();

  std::vector<ModeSpectrum> out;
  out.reserve(modes.size());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  for (int m : modes) {
    Eigen::MatrixXcd op = collision;
    for (Eigen::Index j = 0; j < n; ++j)
      op(j, j) -= transport_symbol(basis.grid.component(static_cast<std::size_t>(j), 0), m, axis, order);
    solver.compute(op, false);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::EigensolverFailure, "spectrum of mode " + std::to_string(m) + " did not converge");
    const Eigen::VectorXcd ev = solver.eigenvalues();
    ModeSpectrum spec{m, {ev.data(), ev.data() + ev.size()}};
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
              [](const auto& a, const auto& b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
              });
    out.push_back(std::move(spec));
  }
  return out;
}

std::complex<double> projective_amplification(std::complex<double> lambda, const ButcherTableau& t,
                                              const ProjectiveParameters& p) {
  using cd = std::complex<double>;
  // Each inner chain maps y -> tau^{K+1} y and its chord slope is lambda tau^K y.
  const cd tau = 1.0 + p.inner_dt * lambda;
  const cd tau_k = std::pow(tau, p.inner_steps);
  const cd chain = tau_k * tau;
  const cd slope = lambda * tau_k;
  const int s_count = t.stages();
  std::vector<cd> k;
  k.reserve(static_cast<std::size_t>(s_count));
  k.push_back(slope);
  for (int s = 1; s < s_count; ++s) {
    const double cs = t.c[static_cast<std::size_t>(s)];
    cd direction{0.0, 0.0};
    for (int l = 0; l < s; ++l) direction += t.coeff(s, l) / cs * k[static_cast<std::size_t>(l)];
    const cd seed = chain + (cs * p.outer_dt - p.inner_span()) * direction;
    k.push_back(slope * seed);
  }
  cd combined{0.0, 0.0};
  for (int s = 0; s < s_count; ++s) combined += t.b[static_cast<std::size_t>(s)] * k[static_cast<std::size_t>(s)];
  return chain + (p.outer_dt - p.inner_span()) * combined;
}

Advice advise_parameters(double epsilon, const FourierAxis& axis, const WeightedBasis& basis,
                         const AdviceOptions& options) {
  require_epsilon(epsilon);
  if (std::isinf(epsilon)) throw Error(ErrorKind::InvalidParameters, "advice needs a finite epsilon");
  if (!(axis.dx > 0.0) || !(options.cfl_fraction > 0.0))
    throw Error(ErrorKind::NonPositiveInput, "dx and cfl fraction must be positive");

  Advice advice;
  advice.parameters.inner_dt = epsilon;
  advice.parameters.inner_steps = options.inner_steps;
  double min_node = 1.0;
  for (std::size_t s = 1; s < options.tableau.c.size(); ++s) min_node = std::min(min_node, options.tableau.c[s]);
  const double floor = advice.parameters.inner_span() / min_node;
  const double cfl_step = options.cfl_fraction * axis.dx;
  advice.recommend_direct = cfl_step < floor;
  advice.parameters.outer_dt = std::max(cfl_step, floor);

  const auto spectra = transport_collision_spectrum(epsilon, axis, basis, options.modes, options.symbol);
  for (const auto& spec : spectra) {
    for (const auto& lambda : spec.eigenvalues) {
      const double amp = std::abs(projective_amplification(lambda, options.tableau, advice.parameters));
      if (amp > advice.max_amplification) {
        advice.max_amplification = amp;
        advice.worst_mode = spec.mode;
        advice.worst_eigenvalue = lambda;
      }
    }
  }
  advice.stable = advice.max_amplification <= 1.0 + 1e-8;
  if (!advice.stable && !advice.recommend_direct) {
    std::ostringstream os;
    os.precision(10);
    os << "amplification " << advice.max_amplification << " > 1 at mode " << advice.worst_mode
       << ", eigenvalue " << advice.worst_eigenvalue.real() << (advice.worst_eigenvalue.imag() < 0 ? "" : "+")
       << advice.worst_eigenvalue.imag() << "i";
    throw Error(ErrorKind::AdviceRejected, os.str());
  }
  return advice;
}

}  // namespace bgkpi
