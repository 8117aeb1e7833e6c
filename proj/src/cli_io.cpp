#include "bgkpi/cli_io.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bgkpi/bgk_rhs.hpp"
#include "bgkpi/error.hpp"

namespace bgkpi {

namespace {

void append(std::string& out, double x, int precision) {
  char buf[64];
  const auto res = precision > 0 ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, precision)
                                 : std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

void append17(std::string& out, double x) { append(out, x, 17); }

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  os << text;
  os.close();
  if (!os) throw Error(ErrorKind::IoError, "failed writing '" + path.string() + "'");
}

std::string numbered(const char* stem, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", stem, index);
  return buf;
}

FourierAxis fourier_axis(const ScenarioConfig& c) {
  const auto& d = c.domain.at(0);
  return {(d[1] - d[0]) / c.cells.at(0), c.cells.at(0)};
}

ButcherTableau outer_tableau(const ScenarioConfig& c) {
  if (c.method == Method::pfe) return ButcherTableau::forward_euler();
  if (c.method == Method::prk) return c.tableau;
  return ButcherTableau::classical_rk4();
}

}  // namespace

std::string format_double(double x) {
  std::string s;
  append(s, x, 0);
  return s;
}

SnapshotRecord make_snapshot(const DistributionField& f, double t) {
  SnapshotRecord r;
  r.t = t;
  r.dim_x = f.spatial().dim();
  r.moments = compute_moments(f);
  r.x.reserve(f.spatial().size());
  for (std::size_t c = 0; c < f.spatial().size(); ++c) r.x.push_back(f.spatial().center(c));
  return r;
}

std::string format_snapshot(const SnapshotRecord& r) {
  const int dv = r.moments.dim;
  std::string out = r.dim_x == 2 ? "t,x,y" : "t,x";
  out += dv == 2 ? ",rho,ux,uy,T,E,qx,qy\n" : ",rho,ux,T,E,qx\n";
  out.reserve(out.size() + r.rows() * 24 * (6 + r.dim_x + 2 * dv));
  const auto& m = r.moments;
  for (std::size_t c = 0; c < r.rows(); ++c) {
    append17(out, r.t);
    for (int a = 0; a < r.dim_x; ++a) {
      out += ',';
      append17(out, r.x[c][static_cast<std::size_t>(a)]);
    }
    out += ',';
    append17(out, m.rho[c]);
    for (int d = 0; d < dv; ++d) {
      out += ',';
      append17(out, m.u[c * static_cast<std::size_t>(dv) + static_cast<std::size_t>(d)]);
    }
    out += ',';
    append17(out, m.T[c]);
    out += ',';
    append17(out, m.E[c]);
    for (int d = 0; d < dv; ++d) {
      out += ',';
      append17(out, m.q[c * static_cast<std::size_t>(dv) + static_cast<std::size_t>(d)]);
    }
    out += '\n';
  }
  return out;
}

void write_snapshot(const SnapshotRecord& record, const std::filesystem::path& path) {
  write_text(format_snapshot(record), path);
}

void write_distribution(const DistributionField& f, const std::filesystem::path& path) {
  const auto& x = f.spatial();
  const auto& v = f.velocity();
  std::string out = x.dim() == 2 ? "x,y" : "x";
  out += v.dim() == 2 ? ",vx,vy,f\n" : ",vx,f\n";
  for (std::size_t c = 0; c < x.size(); ++c) {
    const auto xc = x.center(c);
    for (std::size_t j = 0; j < v.size(); ++j) {
      for (int a = 0; a < x.dim(); ++a) {
        if (a) out += ',';
        append17(out, xc[static_cast<std::size_t>(a)]);
      }
      for (int a = 0; a < v.dim(); ++a) {
        out += ',';
        append17(out, v.component(j, a));
      }
      out += ',';
      append17(out, f(c, j));
      out += '\n';
    }
  }
  write_text(out, path);
}

std::string format_spectrum(const std::vector<ModeSpectrum>& spectra) {
  std::string out = "mode,re,im\n";
  for (const auto& s : spectra) {
    for (const auto& lambda : s.eigenvalues) {
      out += std::to_string(s.mode);
      out += ',';
      append17(out, lambda.real());
      out += ',';
      append17(out, lambda.imag());
      out += '\n';
    }
  }
  return out;
}

void write_spectrum(const std::vector<ModeSpectrum>& spectra, const std::filesystem::path& path) {
  write_text(format_spectrum(spectra), path);
}

Advice advise_for(const ScenarioConfig& c, Reconstruction symbol) {
  AdviceOptions opts;
  opts.cfl_fraction = c.cfl_fraction;
  opts.inner_steps = c.inner_steps;
  opts.tableau = outer_tableau(c);
  opts.symbol = symbol;
  return advise_parameters(c.epsilon, fourier_axis(c), build_basis(build_phase_space(c)->v), opts);
}

MethodSpec method_for(const ScenarioConfig& c) {
  MethodSpec m;
  m.method = c.method;
  m.tableau = outer_tableau(c);
  if (c.advise) {
    const Advice a = advise_for(c);
    m.dt = a.parameters.inner_dt;
    m.inner_steps = a.parameters.inner_steps;
    m.outer_dt = a.parameters.outer_dt;
  } else {
    m.dt = c.dt;
    m.inner_steps = c.inner_steps;
    m.outer_dt = c.outer_dt;
  }
  return m;
}

std::vector<ModeSpectrum> spectrum_for(const ScenarioConfig& c, const std::vector<int>& modes,
                                       Reconstruction symbol) {
  if (std::isinf(c.epsilon)) throw Error(ErrorKind::InvalidParameters, "spectrum needs a finite epsilon");
  return transport_collision_spectrum(c.epsilon, fourier_axis(c), build_basis(build_phase_space(c)->v), modes,
                                      symbol);
}

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  if (auto problems = validate_config(config); !problems.empty()) throw ValidationError(std::move(problems));
  std::ostream& log = options.log ? *options.log : std::cerr;

  RunResult result;
  result.method = method_for(config);
  auto space = build_phase_space(config);
  DistributionField f0 = build_initial_field(config, space);
  BgkSystem system(space, build_settings(config));

  const std::filesystem::path dir(config.output_dir);
  if (options.write_files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create '" + dir.string() + "': " + ec.message());
  }

  IntegrateOptions io;
  io.snapshot_times = config.snapshot_times;
  io.on_snapshot = [&](const StepperState& s) {
    DistributionField f(space, s.f);
    SnapshotRecord rec = make_snapshot(f, s.t);
    const auto outside = cells_outside_velocity_domain(rec.moments, space->v);
    if (!outside.empty() && !options.quiet)
      log << "warning: t = " << format_double(s.t) << ": " << outside.size()
          << " cell(s) carry significant mass beyond the velocity bound (first: cell " << outside.front()
          << ")\n";
    const std::size_t index = result.snapshots.size();
    if (options.write_files) {
      const auto path = dir / numbered("snapshot", index);
      write_snapshot(rec, path);
      result.files.push_back(path);
      if (config.dump_distribution) {
        const auto dpath = dir / numbered("distribution", index);
        write_distribution(f, dpath);
        result.files.push_back(dpath);
      }
    }
    result.snapshots.push_back(std::move(rec));
  };
  io.progress_every = options.quiet ? 0 : config.progress_every;
  io.on_progress = [&](const StepperState& s) {
    log << "step " << s.outer_steps << "  t = " << format_double(s.t) << "  rhs evaluations = "
        << s.rhs_evaluations << '\n';
  };

  result.state = integrate(system, std::move(f0.values()), result.method, config.t_end, io);
  result.final_field.emplace(space, result.state.f);
  if (result.state.fallback_steps > 0 && !options.quiet)
    log << "note: " << result.state.fallback_steps
        << " shortened outer step(s) were covered by forward Euler steps\n";
  return result;
}

namespace {

Reconstruction parse_symbol(const std::string& name) {
  if (name == "upwind1") return Reconstruction::upwind1;
  if (name == "weno2") return Reconstruction::weno2;
  if (name == "weno3") return Reconstruction::weno3;
  throw ValidationError({"unknown symbol '" + name + "' (expected upwind1, weno2 or weno3)"});
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-velocity BGK solver with projective integration"};
  app.require_subcommand(1);

  std::string path;
  std::string output_dir;
  std::vector<double> snapshot_times;
  bool dump = false;
  bool quiet = false;
  std::vector<int> modes;
  std::string symbol = "upwind1";

  auto* run = app.add_subcommand("run", "Simulate and write snapshots");
  auto* spectrum = app.add_subcommand("spectrum", "Write eigenvalues of the linearized operator");
  auto* advise = app.add_subcommand("advise", "Print projective step parameters and spectral margin");
  auto* validate = app.add_subcommand("validate", "Parse and check a configuration");
  for (auto* sub : {run, spectrum, advise, validate})
    sub->add_option("config", path, "Configuration file")->required();
  for (auto* sub : {run, spectrum}) sub->add_option("--output-dir", output_dir, "Output directory");
  run->add_option("--snapshot-times", snapshot_times, "Snapshot times")->delimiter(',');
  run->add_flag("--dump-distribution", dump, "Also write the full distribution");
  run->add_flag("--quiet", quiet, "Suppress progress and warnings");
  spectrum->add_option("--modes", modes, "Fourier modes (default all)")->delimiter(',');
  for (auto* sub : {spectrum, advise})
    sub->add_option("--symbol", symbol, "Transport symbol: upwind1, weno2 or weno3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    ScenarioConfig config = load_config(path);
    if (validate->parsed()) {
      out << path << ": ok\n";
      return 0;
    }
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!snapshot_times.empty()) config.snapshot_times = snapshot_times;
    if (dump) config.dump_distribution = true;
    if (auto problems = validate_config(config); !problems.empty()) throw ValidationError(std::move(problems));

    if (advise->parsed()) {
      const Advice a = advise_for(config, parse_symbol(symbol));
      out << "inner_dt = " << format_double(a.parameters.inner_dt) << '\n'
          << "inner_steps = " << a.parameters.inner_steps << '\n'
          << "outer_dt = " << format_double(a.parameters.outer_dt) << '\n'
          << "max_amplification = " << format_double(a.max_amplification) << '\n'
          << "spectral_margin = " << format_double(a.margin()) << '\n'
          << "worst_mode = " << a.worst_mode << '\n'
          << "recommendation = " << (a.recommend_direct ? "direct (projection gains nothing at this epsilon)"
                                                        : "projective")
          << '\n';
      return 0;
    }
    if (spectrum->parsed()) {
      const auto spectra = spectrum_for(config, modes, parse_symbol(symbol));
      std::filesystem::create_directories(config.output_dir);
      const auto file = std::filesystem::path(config.output_dir) / "spectrum.csv";
      write_spectrum(spectra, file);
      out << file.string() << '\n';
      return 0;
    }
    RunOptions opts;
    opts.quiet = quiet;
    opts.log = &err;
    const RunResult r = run_scenario(config, opts);
    if (!quiet)
      err << "done: " << r.state.outer_steps << " outer steps, " << r.state.rhs_evaluations
          << " rhs evaluations, t = " << format_double(r.state.t) << '\n';
    for (const auto& f : r.files) out << f.string() << '\n';
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ValidationError& e) {
    err << "error: invalid configuration\n";
    for (const auto& p : e.problems()) err << "  - " << p << '\n';
    return 1;
  } catch (const InstabilityError& e) {
    err << "instability: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::AdviceRejected || e.kind() == ErrorKind::StepUnstable ||
                   e.kind() == ErrorKind::EigensolverFailure
               ? 2
               : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return cli_run(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace bgkpi
