#include "snls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snls/error.hpp"

namespace snls {
namespace {

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    config_error("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = origin + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') config_error(where + ": unterminated section header");
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (section.empty()) config_error(where + ": empty section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) config_error(where + ": expected 'key = value'");
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) config_error(where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (cfg.values_.count(key)) config_error(where + ": duplicate key '" + key + "'");
    cfg.values_.emplace(std::move(key), std::move(value));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto cfg = parse(buf.str(), path);
  const auto parent = std::filesystem::path(path).parent_path();
  cfg.base_dir_ = parent.empty() ? "." : parent.string();
  return cfg;
}

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return raw(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = raw(key);
  return v ? parse_double(key, *v) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    config_error("key '" + key + "': expected an integer, got '" + *v + "'");
  }
  return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  config_error("key '" + key + "': expected true/false, got '" + *v + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  if (const auto v = raw(key)) {
    for (const auto& item : split_list(*v)) out.push_back(parse_double(key, item));
  }
  return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key) const {
  const auto v = raw(key);
  return v ? split_list(*v) : std::vector<std::string>{};
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

std::string KeyValueConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

namespace {

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::kEvolve, "evolve"},
    {Experiment::kChannels, "channels"},
    {Experiment::kLinearChannels, "linear_channels"},
    {Experiment::kMorawetz, "morawetz"},
    {Experiment::kDecay, "decay"},
    {Experiment::kProfiles, "profiles"},
    {Experiment::kTranslationGap, "translation_gap"},
    {Experiment::kCheckPotential, "check_potential"},
    {Experiment::kSweep, "sweep"},
};

std::string resolve_path(const KeyValueConfig& kv, const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(kv.base_dir()) / p).lexically_normal().string();
}

void require_file(const std::string& key, const std::string& path) {
  if (path.empty()) config_error("key '" + key + "' is required");
  if (!std::filesystem::is_regular_file(path)) {
    config_error("key '" + key + "': file '" + path + "' does not exist");
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) config_error(msg);
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [v, name] : kExperimentNames) {
    if (v == e) return name;
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [v, n] : kExperimentNames) {
    if (n == name) return v;
  }
  std::string known;
  for (const auto& [v, n] : kExperimentNames) known += (known.empty() ? "" : ", ") + std::string(n);
  config_error("unknown experiment '" + std::string(name) + "' (expected one of: " + known + ")");
}

RunConfig build_run_config(const KeyValueConfig& kv, std::optional<Experiment> experiment) {
  RunConfig c;
  c.source = kv;
  const auto& s = c.source;

  if (const auto named = s.raw("experiment")) {
    const auto from_file = parse_experiment(*named);
    if (experiment && *experiment != from_file) {
      config_error("config file names experiment '" + *named + "' but '" +
                   std::string(to_string(*experiment)) + "' was requested");
    }
    c.experiment = from_file;
  } else if (experiment) {
    c.experiment = *experiment;
  } else {
    config_error("no experiment given");
  }

  const auto seed = s.get_int("seed", 0);
  require(seed >= 0, "seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.output_dir = s.get_string("output_dir", c.output_dir);

  const auto n = s.get_int("grid.n_points", static_cast<std::int64_t>(c.grid.n_points));
  require(n >= 16 && (n & (n - 1)) == 0, "grid.n_points must be a power of two >= 16");
  c.grid.n_points = static_cast<std::size_t>(n);
  c.grid.length = s.get_double("grid.length", c.grid.length);
  require(std::isfinite(c.grid.length) && c.grid.length > 0.0, "grid.length must be positive");

  auto& pot = c.potential;
  try {
    pot.spec.family = parse_potential_family(
        s.get_string("potential.family", std::string(to_string(pot.spec.family))));
  } catch (const Error& e) {
    config_error(std::string("potential.family: ") + e.what());
  }
  pot.spec.height = s.get_double("potential.height", pot.spec.height);
  pot.spec.width = s.get_double("potential.width", pot.spec.width);
  pot.spec.a_minus = s.get_double("potential.a_minus", pot.spec.a_minus);
  pot.spec.a_plus = s.get_double("potential.a_plus", pot.spec.a_plus);
  pot.csv_path = resolve_path(s, s.get_string("potential.csv", ""));
  if (pot.spec.family == PotentialFamily::kCustomSamples) require_file("potential.csv", pot.csv_path);
  c.epsilon = s.get_double("potential.epsilon", c.epsilon);
  require(c.epsilon > 0.0, "potential.epsilon must be positive");

  auto& ini = c.initial;
  ini.shape = s.get_string("initial.shape", ini.shape);
  ini.amplitude = s.get_double("initial.amplitude", ini.amplitude);
  ini.width = s.get_double("initial.width", ini.width);
  ini.center = s.get_double("initial.center", ini.center);
  ini.momentum = s.get_double("initial.momentum", ini.momentum);
  ini.checkpoint = resolve_path(s, s.get_string("initial.checkpoint", ""));
  require(ini.shape == "gaussian" || ini.shape == "zero" || ini.shape == "checkpoint",
          "initial.shape must be gaussian, zero or checkpoint");
  if (ini.shape == "gaussian") require(ini.width > 0.0, "initial.width must be positive");
  if (ini.shape == "checkpoint") require_file("initial.checkpoint", ini.checkpoint);

  auto& sol = c.solver;
  sol.alpha = s.get_double("solver.alpha", sol.alpha);
  sol.dt = s.get_double("solver.dt", sol.dt);
  sol.t_final = s.get_double("solver.t_final", sol.t_final);
  sol.record_times = s.get_doubles("solver.record_times");
  sol.record_stride = s.get_double("solver.record_stride", sol.record_stride);
  sol.permissive = s.get_bool("solver.permissive", sol.permissive);
  sol.linear = s.get_bool("solver.linear", sol.linear);
  sol.write_checkpoints = s.get_bool("solver.checkpoints", sol.write_checkpoints);
  require(sol.dt > 0.0 && sol.dt <= 0.1, "solver.dt must lie in (0, 0.1]");
  require(sol.t_final > 0.0 && std::isfinite(sol.t_final), "solver.t_final must be positive");
  require(sol.record_stride >= 0.0, "solver.record_stride must be nonnegative");
  require(sol.record_times.empty() || sol.record_stride == 0.0,
          "give solver.record_times or solver.record_stride, not both");
  for (double t : sol.record_times) {
    require(t >= 0.0 && t <= sol.t_final, "solver.record_times must lie in [0, t_final]");
  }
  require(sol.alpha > 0.0, "solver.alpha must be positive");
  require(sol.alpha > 4.0 || sol.permissive, "solver.alpha <= 4 requires solver.permissive = true");

  auto& prop = c.propagator;
  prop.method = s.get_string("propagator.method", prop.method);
  prop.stencil = s.get_string("propagator.stencil", prop.stencil);
  prop.dt = s.get_double("propagator.dt", prop.dt);
  require(prop.method == "strang" || prop.method == "eigendecomposition",
          "propagator.method must be strang or eigendecomposition");
  require(prop.stencil == "fourier" || prop.stencil == "central_difference",
          "propagator.stencil must be fourier or central_difference");
  require(prop.dt > 0.0 && prop.dt <= 0.1, "propagator.dt must lie in (0, 0.1]");

  c.channels.n = static_cast<int>(s.get_int("channels.n", c.channels.n));
  if (s.has("channels.wave_times")) c.channels.wave_times = s.get_doubles("channels.wave_times");
  require(c.channels.n >= 1, "channels.n must be >= 1");
  require(!c.channels.wave_times.empty() &&
              std::is_sorted(c.channels.wave_times.begin(), c.channels.wave_times.end()) &&
              c.channels.wave_times.front() > 0.0,
          "channels.wave_times must be positive and ascending");

  c.decay.times = s.get_doubles("decay.times");
  c.decay.t_min = s.get_double("decay.t_min", c.decay.t_min);
  c.decay.t_max = s.get_double("decay.t_max", c.decay.t_max);
  c.decay.count = static_cast<int>(s.get_int("decay.count", c.decay.count));
  require(c.decay.t_min > 0.0 && c.decay.t_max >= c.decay.t_min, "decay needs 0 < t_min <= t_max");
  require(c.decay.count >= 1, "decay.count must be >= 1");
  for (double t : c.decay.times) require(t > 0.0, "decay.times must be positive");

  auto& mor = c.morawetz;
  mor.t_start = s.get_double("morawetz.t_start", mor.t_start);
  mor.t_end = s.get_double("morawetz.t_end", mor.t_end);
  mor.snapshot_dt = s.get_double("morawetz.snapshot_dt", mor.snapshot_dt);
  mor.variant = s.get_string("morawetz.variant", mor.variant);
  require(mor.variant == "difference" || mor.variant == "equation",
          "morawetz.variant must be difference or equation");
  require(mor.t_start >= 0.0 && mor.t_end > mor.t_start, "morawetz needs 0 <= t_start < t_end");
  require(mor.snapshot_dt > 0.0, "morawetz.snapshot_dt must be positive");

  auto& pr = c.profiles;
  pr.fixture = s.get_string("profiles.fixture", pr.fixture);
  pr.members = static_cast<int>(s.get_int("profiles.members", pr.members));
  pr.j_max = static_cast<int>(s.get_int("profiles.j_max", pr.j_max));
  pr.q = s.get_double("profiles.q", pr.q);
  pr.time_window = s.get_double("profiles.time_window", pr.time_window);
  pr.time_spacing = s.get_double("profiles.time_spacing", pr.time_spacing);
  pr.consensus_tol = s.get_double("profiles.consensus_tol", pr.consensus_tol);
  pr.stop_ratio = s.get_double("profiles.stop_ratio", pr.stop_ratio);
  require(pr.fixture == "one" || pr.fixture == "two" || pr.fixture == "noise",
          "profiles.fixture must be one, two or noise");
  require(pr.members >= 3, "profiles.members must be >= 3");
  require(pr.j_max >= 0, "profiles.j_max must be >= 0");
  require(pr.q == 0.0 || (pr.q > 2.0 && std::isfinite(pr.q)), "profiles.q must exceed 2");
  require(pr.time_window >= 0.0 && pr.time_spacing > 0.0, "profiles time search must be positive");

  auto& tr = c.translation;
  if (s.has("translation.shifts")) tr.shifts = s.get_doubles("translation.shifts");
  tr.t_begin = s.get_double("translation.t_begin", tr.t_begin);
  tr.t_end = s.get_double("translation.t_end", tr.t_end);
  tr.sample_dt = s.get_double("translation.sample_dt", tr.sample_dt);
  require(tr.t_end > tr.t_begin && tr.sample_dt > 0.0, "translation needs t_begin < t_end");

  auto& sw = c.sweep;
  sw.experiment = s.get_string("sweep.experiment", "");
  sw.parameter = s.get_string("sweep.parameter", "");
  sw.values = s.get_strings("sweep.values");
  if (c.experiment == Experiment::kSweep) {
    require(!sw.experiment.empty(), "sweep.experiment is required");
    require(parse_experiment(sw.experiment) != Experiment::kSweep, "sweeps cannot nest");
    require(!sw.parameter.empty(), "sweep.parameter is required");
    require(sw.parameter.rfind("sweep.", 0) != 0 && sw.parameter != "experiment" &&
                sw.parameter != "output_dir",
            "sweep.parameter cannot name '" + sw.parameter + "'");
    require(!sw.values.empty(), "sweep.values is required");
  }

  if (const auto unused = s.unused_keys(); !unused.empty()) {
    std::string list;
    for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
    config_error("unknown keys: " + list);
  }
  return c;
}

}  // namespace snls
