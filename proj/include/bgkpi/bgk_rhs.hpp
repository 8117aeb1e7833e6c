#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "bgkpi/phase_space.hpp"
#include "bgkpi/transport.hpp"

namespace bgkpi {

/// Autonomous ODE system y' = F(y). Every call through rhs() is counted so
/// run costs can be compared across methods.
class OdeSystem {
 public:
  virtual ~OdeSystem() = default;

  virtual std::size_t size() const = 0;
  void rhs(std::span<const double> y, std::span<double> dydt) {
    ++evaluations_;
    evaluate(y, dydt);
  }
  std::size_t evaluations() const noexcept { return evaluations_; }
  void reset_evaluations() noexcept { evaluations_ = 0; }

 protected:
  virtual void evaluate(std::span<const double> y, std::span<double> dydt) = 0;

 private:
  std::size_t evaluations_ = 0;
};

enum class MaxwellianMode { analytic, corrected };

struct BgkSettings {
  /// Relaxation time; +infinity switches the collision term off.
  double epsilon = 1.0;
  TransportOptions transport{};
  MaxwellianMode maxwellian = MaxwellianMode::analytic;
};

/// Semidiscrete BGK system  f' = -D_{x,v}(f) + (M(f) - f) / epsilon.
/// Moments and the local Maxwellian are recomputed on every evaluation.
class BgkSystem final : public OdeSystem {
 public:
  BgkSystem(std::shared_ptr<const PhaseSpace> space, BgkSettings settings);

  std::size_t size() const override { return space_->size(); }
  const BgkSettings& settings() const noexcept { return settings_; }
  const PhaseSpace& space() const noexcept { return *space_; }

  /// (M(f) - f) / epsilon alone.
  void collision(std::span<const double> f, std::span<double> out) const;

 protected:
  void evaluate(std::span<const double> f, std::span<double> dfdt) override;

 private:
  std::shared_ptr<const PhaseSpace> space_;
  BgkSettings settings_;
  TransportOperator transport_;
  std::vector<double> collision_buffer_;
};

/// One-shot evaluation of the full tendency for a field.
DistributionField rhs(const DistributionField& f, const BgkSettings& settings);

/// (M - f) / epsilon for a field.
DistributionField collision_rhs(const DistributionField& f, const BgkSettings& settings);

}  // namespace bgkpi
