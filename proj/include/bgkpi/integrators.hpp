#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgkpi/bgk_rhs.hpp"

namespace bgkpi {

/// Explicit Runge-Kutta coefficients. `a` is stored row-major S x S and must
/// be strictly lower triangular.
struct ButcherTableau {
  std::string name;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  int stages() const noexcept { return static_cast<int>(b.size()); }
  double coeff(int s, int l) const noexcept {
    return a[static_cast<std::size_t>(s) * b.size() + static_cast<std::size_t>(l)];
  }
  bool operator==(const ButcherTableau&) const = default;

  static ButcherTableau forward_euler();
  static ButcherTableau midpoint();
  static ButcherTableau heun();
  static ButcherTableau ssp_rk3();
  static ButcherTableau classical_rk4();
  static ButcherTableau three_eighths_rk4();
};

/// Names accepted by tableau_by_name().
std::vector<std::string> known_tableaus();
/// Throws Error(InvalidTableau) for an unknown name.
ButcherTableau tableau_by_name(std::string_view name);

/// Every violated consistency condition, one message per violation; empty
/// when the tableau is usable as a projective outer method.
std::vector<std::string> validate_tableau(const ButcherTableau& t);

struct ProjectiveParameters {
  double inner_dt = 0.0;
  int inner_steps = 2;
  double outer_dt = 0.0;

  /// Time covered by the K+1 inner steps.
  double inner_span() const noexcept { return (inner_steps + 1) * inner_dt; }
  bool operator==(const ProjectiveParameters&) const = default;
};

/// outer >= span up to a relative rounding tolerance, so that e.g.
/// outer = 3e-5 covers 3 * 1e-5.
inline bool covers_span(double outer, double span) noexcept {
  return outer >= span * (1.0 - 1e-12);
}

/// Violations of delta_t > 0, K >= 1 and Delta_t >= (K+1) delta_t.
std::vector<std::string> validate_projective(const ProjectiveParameters& p);

/// f + dt * F(f). Throws InstabilityError(StepUnstable) on a non-finite result.
std::vector<double> forward_euler_step(OdeSystem& system, std::span<const double> f, double dt);

/// One step of the explicit Runge-Kutta method `t` with step h.
std::vector<double> rk_step(OdeSystem& system, std::span<const double> f, const ButcherTableau& t,
                            double h);
std::vector<double> rk4_step(OdeSystem& system, std::span<const double> f, double h);

/// K+1 inner forward-Euler steps followed by extrapolation along the last
/// chord over the rest of the outer step.
std::vector<double> pfe_step(OdeSystem& system, std::span<const double> f,
                             const ProjectiveParameters& p);

/// Projective Runge-Kutta step: every stage derivative of `t` is replaced by
/// the chord slope of K+1 fresh inner steps started from the stage seed.
std::vector<double> prk_step(OdeSystem& system, std::span<const double> f, const ButcherTableau& t,
                             const ProjectiveParameters& p);

enum class Method { fe, rk4, pfe, prk };

std::string_view to_string(Method m) noexcept;

struct MethodSpec {
  Method method = Method::rk4;
  /// Step of FE/RK4, or the inner step of PFE/PRK.
  double dt = 0.0;
  int inner_steps = 2;
  double outer_dt = 0.0;
  ButcherTableau tableau = ButcherTableau::classical_rk4();

  bool projective() const noexcept { return method == Method::pfe || method == Method::prk; }
  ProjectiveParameters projective_parameters() const noexcept { return {dt, inner_steps, outer_dt}; }
  /// Nominal outer step: outer_dt for projective methods, dt otherwise.
  double step() const noexcept { return projective() ? outer_dt : dt; }
};

struct StepperState {
  std::vector<double> f;
  double t = 0.0;
  long outer_steps = 0;
  /// Outer steps that were too short for the projective method and were
  /// covered by plain forward Euler instead.
  long fallback_steps = 0;
  std::size_t rhs_evaluations = 0;
  Method method = Method::rk4;
};

using StepSink = std::function<void(const StepperState&)>;

struct IntegrateOptions {
  std::vector<double> snapshot_times;
  StepSink on_snapshot;
  long progress_every = 0;
  StepSink on_progress;
};

/// Advances `f0` from t = 0 to t_end. Steps are shortened so that every
/// snapshot time and t_end are hit exactly; a shortened projective step that
/// cannot hold K+1 inner steps per stage is replaced by forward Euler steps of
/// size dt. Failures are rethrown with the outer step and time attached.
StepperState integrate(OdeSystem& system, std::vector<double> f0, const MethodSpec& method,
                       double t_end, const IntegrateOptions& options = {});

}  // namespace bgkpi
