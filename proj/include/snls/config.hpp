#pragma once

// Run configuration.
//
// Grammar (one directive per line):
//   # comment                      (also after a value: "key = 1  # note")
//   [section]                      following keys are prefixed "section."
//   key = value                    value runs to end of line, trimmed
//
// Lists are comma separated. Keys may not repeat. Every key must be known
// to the experiment runner; unknown keys are configuration errors.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "snls/potentials.hpp"

namespace snls {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, std::string>& entries() const { return values_; }
  /// Directory of the file the config came from (for relative paths).
  const std::string& base_dir() const { return base_dir_; }
  void set_base_dir(std::string dir) { base_dir_ = std::move(dir); }

  std::optional<std::string> raw(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// Keys present in the file that no getter has asked for.
  std::vector<std::string> unused_keys() const;

  /// Canonical text form (sorted keys, no sections).
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
  std::string base_dir_ = ".";
};

enum class Experiment {
  kEvolve,
  kChannels,
  kLinearChannels,
  kMorawetz,
  kDecay,
  kProfiles,
  kTranslationGap,
  kCheckPotential,
  kSweep,
};

std::string_view to_string(Experiment e);
/// Throws kConfig on an unknown name.
Experiment parse_experiment(std::string_view name);

struct GridConfig {
  std::size_t n_points = 1024;
  double length = 40.0;
};

struct PotentialConfig {
  PotentialSpec spec;
  std::string csv_path;
};

/// u0(x) = amplitude * exp(-((x - center)/width)^2) * exp(i momentum x) for
/// shape "gaussian"; "zero"; or "checkpoint" loaded from `checkpoint`.
struct InitialConfig {
  std::string shape = "gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double momentum = 0.0;
  std::string checkpoint;
};

struct SolverConfig {
  double alpha = 5.0;
  double dt = 1e-3;
  double t_final = 1.0;
  std::vector<double> record_times;
  double record_stride = 0.0;
  bool permissive = false;
  bool linear = false;
  bool write_checkpoints = false;
};

struct PropagatorConfig {
  std::string method = "strang";     // strang | eigendecomposition
  std::string stencil = "fourier";   // fourier | central_difference
  double dt = 1e-3;
};

struct ChannelsConfig {
  int n = 6;
  /// Wave-operator times for the nonlinear experiment (ascending).
  std::vector<double> wave_times{10.0, 20.0, 40.0};
};

struct DecayConfig {
  std::vector<double> times;
  double t_min = 1.0;
  double t_max = 100.0;
  int count = 100;
};

struct MorawetzConfig {
  double t_start = 1.0;
  double t_end = 8.0;
  double snapshot_dt = 0.01;
  std::string variant = "difference";  // difference | equation
};

struct ProfilesConfig {
  std::string fixture = "one";  // one | two | noise
  int members = 8;
  int j_max = 4;
  double q = 0.0;  // 0: use the exponent q(alpha)
  double time_window = 20.0;
  double time_spacing = 0.1;
  double consensus_tol = 1e-3;
  double stop_ratio = 1e-3;
};

struct TranslationConfig {
  std::vector<double> shifts{-80.0, -40.0, -20.0, 20.0, 40.0, 80.0};
  double t_begin = 0.0;
  double t_end = 5.0;
  double sample_dt = 0.05;
};

struct SweepConfig {
  std::string experiment;
  std::string parameter;
  std::vector<std::string> values;
};

struct RunConfig {
  Experiment experiment = Experiment::kEvolve;
  GridConfig grid;
  PotentialConfig potential;
  InitialConfig initial;
  SolverConfig solver;
  PropagatorConfig propagator;
  ChannelsConfig channels;
  DecayConfig decay;
  MorawetzConfig morawetz;
  ProfilesConfig profiles;
  TranslationConfig translation;
  SweepConfig sweep;
  std::uint64_t seed = 0;
  std::string output_dir = "snls_out";
  double epsilon = 0.5;  // decay exponent slack for check_potential
  KeyValueConfig source;
};

/// Builds and validates a RunConfig. `experiment` overrides (and must agree
/// with) an `experiment` key in the file. Throws kConfig.
RunConfig build_run_config(const KeyValueConfig& kv, std::optional<Experiment> experiment);

}  // namespace snls
