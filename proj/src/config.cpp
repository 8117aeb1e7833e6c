#include "bgkpi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "bgkpi/error.hpp"
#include "bgkpi/scenarios.hpp"

namespace bgkpi {

std::string_view to_string(Reconstruction r) noexcept {
  switch (r) {
    case Reconstruction::upwind1: return "upwind1";
    case Reconstruction::weno2: return "weno2";
    case Reconstruction::weno3: return "weno3";
  }
  return "?";
}

std::string_view to_string(Boundary b) noexcept {
  return b == Boundary::periodic ? "periodic" : "outflow";
}

std::string_view to_string(MaxwellianMode m) noexcept {
  return m == MaxwellianMode::corrected ? "corrected" : "analytic";
}

namespace {

const std::vector<std::string> kKeys = {
    "schema_version", "scenario",      "cells",        "dx",          "domain",
    "boundary",       "velocity_nodes", "velocity_bound", "epsilon",   "reconstruction",
    "weno_epsilon",   "maxwellian",    "method",       "tableau",     "dt",
    "inner_steps",    "outer_dt",      "advise",       "cfl_fraction", "t_end",
    "snapshot_times", "output_dir",    "dump_distribution", "progress_every", "wave_amplitude"};

struct ScenarioDefaults {
  std::vector<int> cells;
  std::vector<std::array<double, 2>> domain;
  std::vector<Boundary> boundary;
  int velocity_dim;
  int velocity_nodes;
  double velocity_bound;
};

const ScenarioDefaults* defaults_for(const std::string& scenario) {
  static const ScenarioDefaults sod{{100}, {{0.0, 1.0}}, {Boundary::outflow}, 1, 80, 8.0};
  static const ScenarioDefaults bubble{
      {200, 25}, {{-2.0, 3.0}, {-1.0, 1.0}}, {Boundary::outflow, Boundary::periodic}, 2, 30, 10.0};
  static const ScenarioDefaults wave{{50}, {{0.0, 1.0}}, {Boundary::periodic}, 1, 80, 8.0};
  if (scenario == "sod1d") return &sod;
  if (scenario == "shockbubble2d") return &bubble;
  if (scenario == "wave1d") return &wave;
  return nullptr;
}

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, int> || std::is_same_v<T, long>) return "an integer";
  else if constexpr (std::is_same_v<T, double>) return "a number";
  else if constexpr (std::is_same_v<T, bool>) return "true or false";
  else return "a string";
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const auto mark = node.Mark();
    throw ParseError(source_, mark.line + 1, mark.column + 1, message);
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, "'" + key + "' must be " + type_name<T>());
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + key + "' must be " + type_name<T>() + ", got '" + node.Scalar() + "'");
    }
  }

  // Accepts a scalar or a sequence of scalars.
  template <class T>
  std::vector<T> list(const YAML::Node& node, const std::string& key) const {
    std::vector<T> out;
    if (node.IsScalar()) {
      out.push_back(scalar<T>(node, key));
    } else if (node.IsSequence()) {
      for (const auto& item : node) out.push_back(scalar<T>(item, key));
    } else {
      fail(node, "'" + key + "' must be a value or a list");
    }
    return out;
  }

  std::string location(const YAML::Node& node) const {
    return source_ + ":" + std::to_string(node.Mark().line + 1);
  }

 private:
  std::string source_;
};

ButcherTableau read_inline_tableau(const Reader& r, const YAML::Node& node) {
  if (!node["b"] || !node["c"] || !node["a"]) r.fail(node, "inline tableau needs 'a', 'b' and 'c'");
  ButcherTableau t;
  t.name = node["name"] ? r.scalar<std::string>(node["name"], "tableau.name") : "custom";
  t.b = r.list<double>(node["b"], "tableau.b");
  t.c = r.list<double>(node["c"], "tableau.c");
  const std::size_t s = t.b.size();
  t.a.assign(s * s, 0.0);
  const YAML::Node rows = node["a"];
  if (!rows.IsSequence()) r.fail(rows, "'tableau.a' must be a list of rows");
  if (rows.size() > s) r.fail(rows, "'tableau.a' has more rows than stages");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = r.list<double>(rows[i], "tableau.a");
    if (row.size() > s) r.fail(rows[i], "'tableau.a' row longer than the number of stages");
    for (std::size_t l = 0; l < row.size(); ++l) t.a[i * s + l] = row[l];
  }
  return t;
}

template <class Enum>
bool lookup(std::string_view text, std::initializer_list<std::pair<std::string_view, Enum>> table,
            Enum& out) {
  for (const auto& [name, value] : table) {
    if (name == text) {
      out = value;
      return true;
    }
  }
  return false;
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::string_view source_name) {
  const std::string source(source_name);
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root.IsMap()) {
    if (root.IsNull()) throw ParseError(source, 1, 1, "empty configuration");
    r.fail(root, "configuration must be a mapping of keys to values");
  }

  std::vector<std::string> problems;
  for (const auto& item : root) {
    const auto key = item.first.Scalar();
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      problems.push_back(r.location(item.first) + ": unknown key '" + key + "'");
  }
  for (const char* required : {"scenario", "epsilon", "method", "t_end"})
    if (!root[required]) problems.push_back(std::string("missing required key '") + required + "'");

  ScenarioConfig c;
  if (root["schema_version"]) c.schema_version = r.scalar<int>(root["schema_version"], "schema_version");
  if (root["scenario"]) c.scenario = r.scalar<std::string>(root["scenario"], "scenario");

  const ScenarioDefaults* defaults = defaults_for(c.scenario);
  if (defaults) {
    c.cells = defaults->cells;
    c.domain = defaults->domain;
    c.boundary = defaults->boundary;
    c.velocity_dim = defaults->velocity_dim;
    c.velocity_nodes = defaults->velocity_nodes;
    c.velocity_bound = defaults->velocity_bound;
  }

  if (const auto n = root["domain"]) {
    if (!n.IsSequence()) r.fail(n, "'domain' must be a list of [lo, hi] pairs");
    c.domain.clear();
    for (const auto& pair : n) {
      const auto v = r.list<double>(pair, "domain");
      if (v.size() != 2) r.fail(pair, "'domain' entries must be [lo, hi] pairs");
      c.domain.push_back({v[0], v[1]});
    }
  }
  if (const auto n = root["cells"]) c.cells = r.list<int>(n, "cells");
  if (const auto n = root["dx"]) {
    const auto dx = r.list<double>(n, "dx");
    if (dx.size() != c.domain.size()) {
      problems.push_back(r.location(n) + ": 'dx' needs one entry per spatial axis");
    } else {
      std::vector<int> from_dx;
      for (std::size_t a = 0; a < dx.size(); ++a) {
        const double length = c.domain[a][1] - c.domain[a][0];
        const double count = dx[a] > 0.0 ? length / dx[a] : 0.0;
        const double rounded = std::round(count);
        if (!(dx[a] > 0.0) || rounded < 1.0 || std::abs(count - rounded) > 1e-9 * std::max(1.0, count)) {
          problems.push_back(r.location(n) + ": dx = " + fmt_num(dx[a]) +
                             " does not divide the axis length " + fmt_num(length));
          from_dx.push_back(0);
        } else {
          from_dx.push_back(static_cast<int>(rounded));
        }
      }
      if (root["cells"] && from_dx != c.cells)
        problems.push_back(r.location(n) + ": 'dx' and 'cells' disagree");
      c.cells = from_dx;
    }
  }
  if (const auto n = root["boundary"]) {
    c.boundary.clear();
    for (const auto& name : r.list<std::string>(n, "boundary")) {
      Boundary b{};
      if (!lookup<Boundary>(name, {{"outflow", Boundary::outflow}, {"periodic", Boundary::periodic}}, b))
        problems.push_back(r.location(n) + ": unknown boundary '" + name + "' (expected outflow or periodic)");
      c.boundary.push_back(b);
    }
  }
  if (const auto n = root["velocity_nodes"]) c.velocity_nodes = r.scalar<int>(n, "velocity_nodes");
  if (const auto n = root["velocity_bound"]) c.velocity_bound = r.scalar<double>(n, "velocity_bound");
  if (const auto n = root["epsilon"]) c.epsilon = r.scalar<double>(n, "epsilon");
  if (const auto n = root["reconstruction"]) {
    const auto name = r.scalar<std::string>(n, "reconstruction");
    if (!lookup<Reconstruction>(name, {{"upwind1", Reconstruction::upwind1},
                                       {"weno2", Reconstruction::weno2},
                                       {"weno3", Reconstruction::weno3}},
                                c.reconstruction))
      problems.push_back(r.location(n) + ": unknown reconstruction '" + name +
                         "' (expected upwind1, weno2 or weno3)");
  }
  if (const auto n = root["weno_epsilon"]) c.weno_epsilon = r.scalar<double>(n, "weno_epsilon");
  if (const auto n = root["maxwellian"]) {
    const auto name = r.scalar<std::string>(n, "maxwellian");
    if (!lookup<MaxwellianMode>(name, {{"analytic", MaxwellianMode::analytic},
                                       {"corrected", MaxwellianMode::corrected}},
                                c.maxwellian))
      problems.push_back(r.location(n) + ": unknown maxwellian mode '" + name +
                         "' (expected analytic or corrected)");
  }
  if (const auto n = root["method"]) {
    const auto name = r.scalar<std::string>(n, "method");
    if (!lookup<Method>(name, {{"fe", Method::fe}, {"rk4", Method::rk4}, {"pfe", Method::pfe}, {"prk", Method::prk}},
                        c.method))
      problems.push_back(r.location(n) + ": unknown method '" + name + "' (expected fe, rk4, pfe or prk)");
  }
  if (const auto n = root["tableau"]) {
    if (n.IsMap()) {
      c.tableau = read_inline_tableau(r, n);
    } else {
      const auto name = r.scalar<std::string>(n, "tableau");
      try {
        c.tableau = tableau_by_name(name);
      } catch (const Error&) {
        std::string known;
        for (const auto& k : known_tableaus()) known += (known.empty() ? "" : ", ") + k;
        problems.push_back(r.location(n) + ": unknown tableau '" + name + "' (known: " + known + ")");
      }
    }
  }
  if (const auto n = root["advise"]) c.advise = r.scalar<bool>(n, "advise");
  if (c.advise) {
    for (const char* key : {"dt", "inner_steps", "outer_dt"})
      if (root[key])
        problems.push_back(r.location(root[key]) + ": '" + key +
                           "' cannot be combined with 'advise: true'");
  } else if (!root["dt"] && root["method"]) {
    problems.push_back("missing required key 'dt' (or set 'advise: true')");
  }
  if (const auto n = root["dt"]) c.dt = r.scalar<double>(n, "dt");
  if (const auto n = root["inner_steps"]) c.inner_steps = r.scalar<int>(n, "inner_steps");
  if (const auto n = root["outer_dt"]) c.outer_dt = r.scalar<double>(n, "outer_dt");
  if (!c.advise && (c.method == Method::pfe || c.method == Method::prk) && root["method"] &&
      !root["outer_dt"])
    problems.push_back("missing required key 'outer_dt' for a projective method");
  if (const auto n = root["cfl_fraction"]) c.cfl_fraction = r.scalar<double>(n, "cfl_fraction");
  if (const auto n = root["t_end"]) c.t_end = r.scalar<double>(n, "t_end");
  if (const auto n = root["snapshot_times"]) c.snapshot_times = r.list<double>(n, "snapshot_times");
  else c.snapshot_times = {c.t_end};
  if (const auto n = root["output_dir"]) c.output_dir = r.scalar<std::string>(n, "output_dir");
  if (const auto n = root["dump_distribution"]) c.dump_distribution = r.scalar<bool>(n, "dump_distribution");
  if (const auto n = root["progress_every"]) c.progress_every = r.scalar<long>(n, "progress_every");
  if (const auto n = root["wave_amplitude"]) c.wave_amplitude = r.scalar<double>(n, "wave_amplitude");

  for (auto& p : validate_config(c)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open configuration '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::vector<std::string> validate_config(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  if (c.schema_version != kSchemaVersion)
    problems.push_back("unsupported schema_version " + std::to_string(c.schema_version) +
                       " (this build reads version " + std::to_string(kSchemaVersion) + ")");

  const ScenarioDefaults* defaults = defaults_for(c.scenario);
  if (!defaults) {
    std::string known;
    for (const auto& k : known_scenarios()) known += (known.empty() ? "" : ", ") + k;
    problems.push_back("unknown scenario '" + c.scenario + "' (known scenarios: " + known + ")");
  }
  const std::size_t dx = defaults ? defaults->cells.size() : c.cells.size();
  if (c.cells.size() != dx || c.domain.size() != dx || c.boundary.size() != dx)
    problems.push_back("scenario '" + c.scenario + "' needs " + std::to_string(dx) +
                       " entries in cells, domain and boundary");
  if (defaults && c.velocity_dim != defaults->velocity_dim)
    problems.push_back("scenario '" + c.scenario + "' uses velocity dimension " +
                       std::to_string(defaults->velocity_dim));
  const int ghost = stencil_radius(c.reconstruction);
  for (std::size_t a = 0; a < c.cells.size(); ++a)
    if (c.cells[a] < std::max(1, ghost))
      problems.push_back("axis " + std::to_string(a) + " has " + std::to_string(c.cells[a]) +
                         " cells; at least " + std::to_string(std::max(1, ghost)) + " are needed");
  for (std::size_t a = 0; a < c.domain.size(); ++a)
    if (!(c.domain[a][1] > c.domain[a][0]))
      problems.push_back("domain axis " + std::to_string(a) + " must satisfy lo < hi");
  if (c.velocity_nodes < 1) problems.push_back("velocity_nodes must be at least 1");
  if (!(c.velocity_bound > 0.0) || !std::isfinite(c.velocity_bound))
    problems.push_back("velocity_bound must be positive");
  if (!(c.epsilon > 0.0)) problems.push_back("epsilon must be positive");
  if (!(c.weno_epsilon > 0.0)) problems.push_back("weno_epsilon must be positive");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) problems.push_back("t_end must be non-negative");
  for (double s : c.snapshot_times)
    if (!(s >= 0.0 && s <= c.t_end))
      problems.push_back("snapshot time " + fmt_num(s) + " lies outside [0, t_end]");
  if (c.progress_every < 0) problems.push_back("progress_every must be non-negative");
  if (c.scenario == "wave1d" && !(std::abs(c.wave_amplitude) < 1.0))
    problems.push_back("wave_amplitude must lie in (-1, 1)");

  const bool projective = c.method == Method::pfe || c.method == Method::prk;
  if (c.advise) {
    if (!projective) problems.push_back("'advise: true' needs a projective method (pfe or prk)");
    if (std::isinf(c.epsilon)) problems.push_back("'advise: true' needs a finite epsilon");
    if (!(c.cfl_fraction > 0.0)) problems.push_back("cfl_fraction must be positive");
    if (c.inner_steps < 1) problems.push_back("inner_steps must be at least 1");
  } else {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) problems.push_back("dt must be positive");
    if (projective) {
      for (auto& p : validate_projective({c.dt, c.inner_steps, c.outer_dt})) problems.push_back(p);
    }
  }
  if (c.method == Method::prk) {
    for (auto& p : validate_tableau(c.tableau)) problems.push_back("tableau '" + c.tableau.name + "': " + p);
    if (!c.advise) {
      for (std::size_t s = 1; s < c.tableau.c.size(); ++s) {
        if (!covers_span(c.tableau.c[s] * c.outer_dt, (c.inner_steps + 1) * c.dt)) {
          problems.push_back("stage " + std::to_string(s + 1) + " violates c_s * outer_dt >= (K+1) * dt (" +
                             fmt_num(c.tableau.c[s] * c.outer_dt) + " < " +
                             fmt_num((c.inner_steps + 1) * c.dt) + ")");
          break;
        }
      }
    }
  }
  return problems;
}

std::string serialize_config(const ScenarioConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << c.schema_version;
  out << YAML::Key << "scenario" << YAML::Value << c.scenario;
  out << YAML::Key << "cells" << YAML::Value << YAML::Flow << c.cells;
  out << YAML::Key << "domain" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& d : c.domain) out << YAML::Flow << YAML::BeginSeq << d[0] << d[1] << YAML::EndSeq;
  out << YAML::EndSeq;
  out << YAML::Key << "boundary" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto b : c.boundary) out << std::string(to_string(b));
  out << YAML::EndSeq;
  out << YAML::Key << "velocity_nodes" << YAML::Value << c.velocity_nodes;
  out << YAML::Key << "velocity_bound" << YAML::Value << c.velocity_bound;
  out << YAML::Key << "epsilon" << YAML::Value << c.epsilon;
  out << YAML::Key << "reconstruction" << YAML::Value << std::string(to_string(c.reconstruction));
  out << YAML::Key << "weno_epsilon" << YAML::Value << c.weno_epsilon;
  out << YAML::Key << "maxwellian" << YAML::Value << std::string(to_string(c.maxwellian));
  out << YAML::Key << "method" << YAML::Value << std::string(to_string(c.method));

  bool named = false;
  try {
    named = tableau_by_name(c.tableau.name) == c.tableau;
  } catch (const Error&) {
  }
  out << YAML::Key << "tableau" << YAML::Value;
  if (named) {
    out << c.tableau.name;
  } else {
    const std::size_t s = c.tableau.b.size();
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << c.tableau.name;
    out << YAML::Key << "a" << YAML::Value << YAML::BeginSeq;
    for (std::size_t i = 0; i < s; ++i) {
      out << YAML::Flow << YAML::BeginSeq;
      for (std::size_t l = 0; l < s; ++l) out << c.tableau.a[i * s + l];
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "b" << YAML::Value << YAML::Flow << c.tableau.b;
    out << YAML::Key << "c" << YAML::Value << YAML::Flow << c.tableau.c;
    out << YAML::EndMap;
  }
  if (c.advise) {
    out << YAML::Key << "advise" << YAML::Value << true;
  } else {
    out << YAML::Key << "dt" << YAML::Value << c.dt;
    out << YAML::Key << "inner_steps" << YAML::Value << c.inner_steps;
    out << YAML::Key << "outer_dt" << YAML::Value << c.outer_dt;
  }
  out << YAML::Key << "cfl_fraction" << YAML::Value << c.cfl_fraction;
  out << YAML::Key << "t_end" << YAML::Value << c.t_end;
  out << YAML::Key << "snapshot_times" << YAML::Value << YAML::Flow << c.snapshot_times;
  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir;
  out << YAML::Key << "dump_distribution" << YAML::Value << c.dump_distribution;
  out << YAML::Key << "progress_every" << YAML::Value << c.progress_every;
  out << YAML::Key << "wave_amplitude" << YAML::Value << c.wave_amplitude;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::shared_ptr<const PhaseSpace> build_phase_space(const ScenarioConfig& c) {
  std::vector<SpatialAxis> axes;
  for (std::size_t a = 0; a < c.cells.size(); ++a)
    axes.push_back({c.cells[a], c.domain[a][0], c.domain[a][1], c.boundary[a]});
  return make_phase_space(SpatialGrid(std::move(axes)),
                          VelocityGrid(c.velocity_dim, c.velocity_nodes, c.velocity_bound));
}

DistributionField build_initial_field(const ScenarioConfig& c, std::shared_ptr<const PhaseSpace> space) {
  if (c.scenario == "sod1d") return sod_1d(std::move(space));
  if (c.scenario == "shockbubble2d") return shock_bubble_2d(std::move(space));
  if (c.scenario == "wave1d") return density_wave_1d(std::move(space), c.wave_amplitude);
  throw ValidationError({"unknown scenario '" + c.scenario + "'"});
}

BgkSettings build_settings(const ScenarioConfig& c) {
  return {c.epsilon, {c.reconstruction, c.weno_epsilon}, c.maxwellian};
}

}  // namespace bgkpi
