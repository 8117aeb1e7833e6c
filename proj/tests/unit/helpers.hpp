#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "bgkpi/bgk_rhs.hpp"
#include "bgkpi/phase_space.hpp"

namespace testing {

inline std::shared_ptr<const bgkpi::PhaseSpace> space_1d(int cells, bgkpi::Boundary bc = bgkpi::Boundary::periodic,
                                                         int nodes = 80, double bound = 8.0, double lo = 0.0,
                                                         double hi = 1.0) {
  return bgkpi::make_phase_space(bgkpi::SpatialGrid({{cells, lo, hi, bc}}),
                                 bgkpi::VelocityGrid(1, nodes, bound));
}

/// y' = lambda y, componentwise.
class LinearSystem final : public bgkpi::OdeSystem {
 public:
  LinearSystem(std::size_t n, double lambda) : n_(n), lambda_(lambda) {}
  std::size_t size() const override { return n_; }

 protected:
  void evaluate(std::span<const double> y, std::span<double> dydt) override {
    for (std::size_t i = 0; i < y.size(); ++i) dydt[i] = lambda_ * y[i];
  }

 private:
  std::size_t n_;
  double lambda_;
};

inline std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing
