#include "bgkpi/bgk_rhs.hpp"

#include <algorithm>
#include <cmath>

#include "bgkpi/error.hpp"

namespace bgkpi {

BgkSystem::BgkSystem(std::shared_ptr<const PhaseSpace> space, BgkSettings settings)
    : space_(std::move(space)), settings_(settings), transport_(settings.transport) {
  if (!(settings_.epsilon > 0.0))
    throw Error(ErrorKind::NonPositiveInput, "epsilon must be positive");
}

void BgkSystem::collision(std::span<const double> f, std::span<double> out) const {
  const auto& vgrid = space_->v;
  const std::size_t nodes = vgrid.size();
  const std::size_t cells = space_->x.size();
  if (std::isinf(settings_.epsilon)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double rate = 1.0 / settings_.epsilon;
  std::vector<double> eq(nodes);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto fc = f.subspan(c * nodes, nodes);
    CellMoments m;
    try {
      m = profile_moments(fc, vgrid);
    } catch (InstabilityError& e) {
      e.context().cell = c;
      throw;
    }
    const std::span<const double> u(m.u.data(), static_cast<std::size_t>(vgrid.dim()));
    if (settings_.maxwellian == MaxwellianMode::corrected)
      corrected_maxwellian(m.rho, u, m.T, vgrid, eq);
    else
      maxwellian(m.rho, u, m.T, vgrid, eq);
    double* o = out.data() + c * nodes;
    for (std::size_t j = 0; j < nodes; ++j) o[j] = rate * (eq[j] - fc[j]);
  }
}

void BgkSystem::evaluate(std::span<const double> f, std::span<double> dfdt) {
  if (f.size() != size() || dfdt.size() != size())
    throw Error(ErrorKind::GridMismatch, "state size does not match the BGK system");
  collision_buffer_.resize(size());
  collision(f, collision_buffer_);
  transport_.apply(f, *space_, dfdt);
  for (std::size_t k = 0; k < dfdt.size(); ++k) dfdt[k] += collision_buffer_[k];
}

DistributionField rhs(const DistributionField& f, const BgkSettings& settings) {
  BgkSystem system(f.space_ptr(), settings);
  DistributionField out(f.space_ptr());
  system.rhs(f.values(), out.values());
  return out;
}

DistributionField collision_rhs(const DistributionField& f, const BgkSettings& settings) {
  BgkSystem system(f.space_ptr(), settings);
  DistributionField out(f.space_ptr());
  system.collision(f.values(), out.values());
  return out;
}

}  // namespace bgkpi
