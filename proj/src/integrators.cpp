#include "bgkpi/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bgkpi/error.hpp"

namespace bgkpi {

namespace {

ButcherTableau make_tableau(std::string name, std::vector<std::vector<double>> rows,
                            std::vector<double> b, std::vector<double> c) {
  const std::size_t s = b.size();
  ButcherTableau t{std::move(name), std::vector<double>(s * s, 0.0), std::move(b), std::move(c)};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t l = 0; l < rows[i].size(); ++l) t.a[i * s + l] = rows[i][l];
  return t;
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void check_finite(std::span<const double> y) {
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (!std::isfinite(y[k]))
      throw InstabilityError(ErrorKind::StepUnstable,
                             "non-finite value at state index " + std::to_string(k));
  }
}

// y <- x + alpha * d
void axpy(std::span<const double> x, double alpha, std::span<const double> d, std::span<double> y) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] + alpha * d[k];
}

struct Chain {
  std::vector<double> last;
  std::vector<double> previous;
};

// K+1 forward Euler steps from `seed`; keeps the final two iterates.
Chain inner_chain(OdeSystem& system, std::vector<double> seed, const ProjectiveParameters& p,
                  int stage) {
  Chain chain{std::move(seed), {}};
  std::vector<double> slope(chain.last.size());
  for (int k = 0; k <= p.inner_steps; ++k) {
    try {
      system.rhs(chain.last, slope);
      chain.previous.swap(chain.last);
      chain.last.resize(chain.previous.size());
      axpy(chain.previous, p.inner_dt, slope, chain.last);
      check_finite(chain.last);
    } catch (InstabilityError& e) {
      e.context().stage = stage;
      e.context().inner_step = k;
      throw;
    }
  }
  return chain;
}

std::vector<double> chord(const Chain& chain, double dt) {
  std::vector<double> k(chain.last.size());
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = (chain.last[i] - chain.previous[i]) / dt;
  return k;
}

void require_projective(const ProjectiveParameters& p) {
  const auto problems = validate_projective(p);
  if (!problems.empty()) throw Error(ErrorKind::InvalidParameters, problems.front());
}

}  // namespace

ButcherTableau ButcherTableau::forward_euler() { return make_tableau("euler", {}, {1.0}, {0.0}); }

ButcherTableau ButcherTableau::midpoint() {
  return make_tableau("midpoint", {{}, {0.5}}, {0.0, 1.0}, {0.0, 0.5});
}

ButcherTableau ButcherTableau::heun() {
  return make_tableau("heun", {{}, {1.0}}, {0.5, 0.5}, {0.0, 1.0});
}

ButcherTableau ButcherTableau::ssp_rk3() {
  return make_tableau("ssprk3", {{}, {1.0}, {0.25, 0.25}}, {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
                      {0.0, 1.0, 0.5});
}

ButcherTableau ButcherTableau::classical_rk4() {
  return make_tableau("rk4", {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
                      {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}, {0.0, 0.5, 0.5, 1.0});
}

ButcherTableau ButcherTableau::three_eighths_rk4() {
  return make_tableau("rk4_38", {{}, {1.0 / 3.0}, {-1.0 / 3.0, 1.0}, {1.0, -1.0, 1.0}},
                      {1.0 / 8.0, 3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0}, {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
}

std::vector<std::string> known_tableaus() {
  return {"euler", "midpoint", "heun", "ssprk3", "rk4", "rk4_38"};
}

ButcherTableau tableau_by_name(std::string_view name) {
  if (name == "euler") return ButcherTableau::forward_euler();
  if (name == "midpoint") return ButcherTableau::midpoint();
  if (name == "heun") return ButcherTableau::heun();
  if (name == "ssprk3") return ButcherTableau::ssp_rk3();
  if (name == "rk4") return ButcherTableau::classical_rk4();
  if (name == "rk4_38") return ButcherTableau::three_eighths_rk4();
  throw Error(ErrorKind::InvalidTableau, "unknown tableau '" + std::string(name) + "'");
}

std::vector<std::string> validate_tableau(const ButcherTableau& t) {
  constexpr double tol = 1e-12;
  std::vector<std::string> out;
  const std::size_t s = t.b.size();
  if (s == 0) return {"tableau has no stages"};
  if (t.c.size() != s) out.push_back("c has " + std::to_string(t.c.size()) + " entries, expected " + std::to_string(s));
  if (t.a.size() != s * s) out.push_back("a has " + std::to_string(t.a.size()) + " entries, expected " + std::to_string(s * s));
  if (!out.empty()) return out;

  double bsum = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    bsum += t.b[i];
    if (t.b[i] < -tol || t.b[i] > 1.0 + tol)
      out.push_back("b_" + std::to_string(i + 1) + " = " + fmt_num(t.b[i]) + " outside [0, 1]");
    if (t.c[i] < -tol || t.c[i] > 1.0 + tol)
      out.push_back("c_" + std::to_string(i + 1) + " = " + fmt_num(t.c[i]) + " outside [0, 1]");
  }
  if (std::abs(bsum - 1.0) > tol) out.push_back("sum(b) = " + fmt_num(bsum) + " != 1");
  if (std::abs(t.c[0]) > tol) out.push_back("c_1 = " + fmt_num(t.c[0]) + " != 0");

  for (std::size_t i = 0; i < s; ++i) {
    double row = 0.0;
    for (std::size_t l = 0; l < s; ++l) {
      const double a = t.a[i * s + l];
      if (l >= i && a != 0.0)
        out.push_back("a_" + std::to_string(i + 1) + "," + std::to_string(l + 1) +
                      " = " + fmt_num(a) + " is not strictly lower triangular");
      if (l < i) row += a;
    }
    if (i > 0) {
      if (std::abs(row - t.c[i]) > tol)
        out.push_back("row " + std::to_string(i + 1) + ": sum(a) = " + fmt_num(row) + " != c_" +
                      std::to_string(i + 1) + " = " + fmt_num(t.c[i]));
      if (std::abs(t.c[i]) <= tol)
        out.push_back("c_" + std::to_string(i + 1) + " = 0 beyond the first stage (stage seed divides by c)");
    }
  }
  return out;
}

std::vector<std::string> validate_projective(const ProjectiveParameters& p) {
  std::vector<std::string> out;
  if (!(p.inner_dt > 0.0) || !std::isfinite(p.inner_dt)) out.push_back("inner step must be positive");
  if (p.inner_steps < 1) out.push_back("number of inner steps K must be at least 1");
  if (!covers_span(p.outer_dt, p.inner_span()))
    out.push_back("projective constraint violated: outer step " + fmt_num(p.outer_dt) +
                  " < (K+1) * inner step = " + fmt_num(p.inner_span()));
  return out;
}

std::vector<double> forward_euler_step(OdeSystem& system, std::span<const double> f, double dt) {
  std::vector<double> slope(f.size());
  std::vector<double> out(f.size());
  system.rhs(f, slope);
  axpy(f, dt, slope, out);
  check_finite(out);
  return out;
}

std::vector<double> rk_step(OdeSystem& system, std::span<const double> f, const ButcherTableau& t,
                            double h) {
  const int s_count = t.stages();
  const std::size_t n = f.size();
  std::vector<std::vector<double>> k(static_cast<std::size_t>(s_count), std::vector<double>(n));
  std::vector<double> stage(n);
  for (int s = 0; s < s_count; ++s) {
    std::copy(f.begin(), f.end(), stage.begin());
    for (int l = 0; l < s; ++l) {
      const double a = t.coeff(s, l);
      if (a != 0.0) axpy(stage, h * a, k[static_cast<std::size_t>(l)], stage);
    }
    try {
      system.rhs(stage, k[static_cast<std::size_t>(s)]);
    } catch (InstabilityError& e) {
      e.context().stage = s + 1;
      throw;
    }
  }
  std::vector<double> out(f.begin(), f.end());
  for (int s = 0; s < s_count; ++s) {
    const double b = t.b[static_cast<std::size_t>(s)];
    if (b != 0.0) axpy(out, h * b, k[static_cast<std::size_t>(s)], out);
  }
  check_finite(out);
  return out;
}

std::vector<double> rk4_step(OdeSystem& system, std::span<const double> f, double h) {
  static const ButcherTableau rk4 = ButcherTableau::classical_rk4();
  return rk_step(system, f, rk4, h);
}

std::vector<double> pfe_step(OdeSystem& system, std::span<const double> f,
                             const ProjectiveParameters& p) {
  require_projective(p);
  const Chain chain = inner_chain(system, std::vector<double>(f.begin(), f.end()), p, 1);
  const std::vector<double> slope = chord(chain, p.inner_dt);
  std::vector<double> out(f.size());
  axpy(chain.last, p.outer_dt - p.inner_span(), slope, out);
  check_finite(out);
  return out;
}

std::vector<double> prk_step(OdeSystem& system, std::span<const double> f, const ButcherTableau& t,
                             const ProjectiveParameters& p) {
  const auto problems = validate_tableau(t);
  if (!problems.empty()) throw Error(ErrorKind::InvalidTableau, problems.front());
  require_projective(p);
  const int s_count = t.stages();
  for (int s = 1; s < s_count; ++s) {
    if (!covers_span(t.c[static_cast<std::size_t>(s)] * p.outer_dt, p.inner_span()))
      throw Error(ErrorKind::InvalidParameters,
                  "stage " + std::to_string(s + 1) + ": c_s * outer step = " +
                      fmt_num(t.c[static_cast<std::size_t>(s)] * p.outer_dt) +
                      " < (K+1) * inner step = " + fmt_num(p.inner_span()));
  }

  const std::size_t n = f.size();
  std::vector<std::vector<double>> k;
  k.reserve(static_cast<std::size_t>(s_count));
  const Chain first = inner_chain(system, std::vector<double>(f.begin(), f.end()), p, 1);
  k.push_back(chord(first, p.inner_dt));
  const std::vector<double>& base = first.last;

  for (int s = 1; s < s_count; ++s) {
    const double cs = t.c[static_cast<std::size_t>(s)];
    std::vector<double> direction(n, 0.0);
    for (int l = 0; l < s; ++l) {
      const double a = t.coeff(s, l);
      if (a != 0.0) axpy(direction, a / cs, k[static_cast<std::size_t>(l)], direction);
    }
    std::vector<double> seed(n);
    axpy(base, cs * p.outer_dt - p.inner_span(), direction, seed);
    const Chain chain = inner_chain(system, std::move(seed), p, s + 1);
    k.push_back(chord(chain, p.inner_dt));
  }

  std::vector<double> combined(n, 0.0);
  for (int s = 0; s < s_count; ++s) {
    const double b = t.b[static_cast<std::size_t>(s)];
    if (b != 0.0) axpy(combined, b, k[static_cast<std::size_t>(s)], combined);
  }
  std::vector<double> out(n);
  axpy(base, p.outer_dt - p.inner_span(), combined, out);
  check_finite(out);
  return out;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::fe: return "fe";
    case Method::rk4: return "rk4";
    case Method::pfe: return "pfe";
    case Method::prk: return "prk";
  }
  return "?";
}

namespace {

bool fits_projective(const MethodSpec& m, double step) {
  if (!covers_span(step, m.dt * (m.inner_steps + 1))) return false;
  if (m.method == Method::prk) {
    for (std::size_t s = 1; s < m.tableau.c.size(); ++s)
      if (!covers_span(m.tableau.c[s] * step, m.dt * (m.inner_steps + 1))) return false;
  }
  return true;
}

// Plain forward Euler steps of size dt covering `span`, the last one shortened.
std::vector<double> fallback_euler(OdeSystem& system, std::vector<double> f, double dt, double span) {
  double covered = 0.0;
  while (covered < span) {
    const double remaining = span - covered;
    const double h = remaining <= dt * (1.0 + 1e-9) ? remaining : dt;
    f = forward_euler_step(system, f, h);
    covered = h == remaining ? span : covered + h;
  }
  return f;
}

}  // namespace

StepperState integrate(OdeSystem& system, std::vector<double> f0, const MethodSpec& method,
                       double t_end, const IntegrateOptions& options) {
  if (!(t_end >= 0.0)) throw Error(ErrorKind::InvalidParameters, "t_end must be non-negative");
  const double h = method.step();
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidParameters, "time step must be positive");
  if (method.projective()) require_projective(method.projective_parameters());
  if (method.method == Method::prk) {
    const auto problems = validate_tableau(method.tableau);
    if (!problems.empty()) throw Error(ErrorKind::InvalidTableau, problems.front());
  }

  std::vector<double> stops;
  for (double s : options.snapshot_times)
    if (s >= 0.0 && s <= t_end) stops.push_back(s);
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  const auto is_snapshot = [&](double t) {
    return std::find(options.snapshot_times.begin(), options.snapshot_times.end(), t) !=
           options.snapshot_times.end();
  };

  const std::size_t evaluations_before = system.evaluations();
  StepperState state;
  state.f = std::move(f0);
  state.method = method.method;
  if (options.on_snapshot && is_snapshot(0.0)) options.on_snapshot(state);

  for (double target : stops) {
    if (target <= 0.0) continue;
    while (state.t < target) {
      const double remaining = target - state.t;
      const bool last = remaining <= h * (1.0 + 1e-9);
      const double step = last ? remaining : h;
      try {
        switch (method.method) {
          case Method::fe:
            state.f = forward_euler_step(system, state.f, step);
            break;
          case Method::rk4:
            state.f = rk4_step(system, state.f, step);
            break;
          case Method::pfe:
          case Method::prk: {
            if (!fits_projective(method, step)) {
              state.f = fallback_euler(system, std::move(state.f), method.dt, step);
              ++state.fallback_steps;
              break;
            }
            ProjectiveParameters p = method.projective_parameters();
            p.outer_dt = step;
            state.f = method.method == Method::pfe ? pfe_step(system, state.f, p)
                                                   : prk_step(system, state.f, method.tableau, p);
            break;
          }
        }
      } catch (InstabilityError& e) {
        e.context().outer_step = state.outer_steps + 1;
        e.context().time = state.t;
        throw;
      }
      state.t = last ? target : state.t + step;
      ++state.outer_steps;
      state.rhs_evaluations = system.evaluations() - evaluations_before;
      if (options.on_progress && options.progress_every > 0 &&
          state.outer_steps % options.progress_every == 0)
        options.on_progress(state);
    }
    if (options.on_snapshot && is_snapshot(target)) options.on_snapshot(state);
  }
  state.rhs_evaluations = system.evaluations() - evaluations_before;
  return state;
}

}  // namespace bgkpi
