#include "snls/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <mutex>
#include <thread>

#include "snls/checkpoint.hpp"
#include "snls/diagnostics.hpp"
#include "snls/scattering.hpp"

namespace snls {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

Json grid_json(const Grid& g) { return Json{{"n_points", g.n_points()}, {"length", g.length()}}; }

Json potential_json(const RunConfig& c) {
  const auto& s = c.potential.spec;
  Json j{{"family", std::string(to_string(s.family))}};
  if (s.family == PotentialFamily::kCustomSamples) {
    j["csv"] = c.potential.csv_path;
  } else {
    j["height"] = s.height;
    j["width"] = s.width;
    j["a_minus"] = s.a_minus;
    j["a_plus"] = s.a_plus;
  }
  return j;
}

Json exponents_json(double alpha, bool permissive) {
  if (!(alpha > 4.0) && !permissive) return nullptr;
  const auto e = exponents(alpha, permissive);
  return Json{{"alpha", e.alpha}, {"r", e.r}, {"p", e.p}, {"q", e.q}, {"q_dual", e.q_dual},
              {"in_range", e.in_range}};
}

Json header(const RunConfig& c) {
  return Json{{"experiment", std::string(to_string(c.experiment))},
              {"seed", c.seed},
              {"grid", grid_json(Grid(c.grid.n_points, c.grid.length))},
              {"potential", potential_json(c)}};
}

PotentialSpec resolved_spec(const RunConfig& c, const Grid& grid) {
  if (c.potential.spec.family == PotentialFamily::kCustomSamples) {
    return load_potential_csv(c.potential.csv_path, grid);
  }
  return c.potential.spec;
}

std::vector<double> sample_times(const RunConfig& c) {
  const auto& s = c.solver;
  if (!s.record_times.empty()) return s.record_times;
  if (s.record_stride > 0.0) {
    std::vector<double> t;
    const auto count = static_cast<long>(std::floor(s.t_final / s.record_stride + 1e-9));
    for (long k = 1; k <= count; ++k) t.push_back(static_cast<double>(k) * s.record_stride);
    if (t.empty() || std::abs(t.back() - s.t_final) > 1e-9 * s.t_final) t.push_back(s.t_final);
    return t;
  }
  return {};
}

Json warnings_json(const std::vector<std::string>& w) {
  Json out = Json::array();
  for (const auto& s : w) out.push_back(s);
  return out;
}

double relative(double d, double ref) { return ref != 0.0 ? d / std::abs(ref) : d; }

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::vector<double> trajectory_series_row(const SnapshotDiagnostics& d) {
  return {d.t, d.mass, d.energy, d.sup_norm, d.boundary_fraction, d.high_band_fraction};
}

// ---- experiments ----------------------------------------------------------------

RunArtifacts evolve_experiment(const RunConfig& c) {
  auto problem = make_problem(c);
  problem.record_times = sample_times(c);
  const auto traj = solve(problem);

  RunArtifacts out{header(c), {}};
  out.series.columns = {"t", "mass", "energy", "sup_norm", "boundary_fraction",
                        "high_band_fraction"};
  double mass_drift = 0.0, energy_drift = 0.0;
  const auto& d0 = traj.diagnostics.front();
  for (const auto& d : traj.diagnostics) {
    out.series.add_row(trajectory_series_row(d));
    mass_drift = std::max(mass_drift, std::abs(relative(d.mass - d0.mass, d0.mass)));
    energy_drift = std::max(energy_drift, std::abs(relative(d.energy - d0.energy, d0.energy)));
  }
  const auto& d1 = traj.diagnostics.back();
  auto& s = out.summary;
  s["alpha"] = problem.alpha;
  s["dt"] = problem.dt;
  s["t_final"] = traj.final_time();
  s["linear"] = problem.linear;
  s["exponents"] = exponents_json(problem.alpha, problem.permissive);
  s["initial_mass"] = d0.mass;
  s["final_mass"] = d1.mass;
  s["initial_energy"] = d0.energy;
  s["final_energy"] = d1.energy;
  s["relative_mass_drift"] = mass_drift;
  s["relative_energy_drift"] = energy_drift;
  s["max_sup_norm"] = std::max_element(traj.diagnostics.begin(), traj.diagnostics.end(),
                                       [](const auto& a, const auto& b) {
                                         return a.sup_norm < b.sup_norm;
                                       })->sup_norm;
  if (problem.alpha > 4.0) {
    const auto e = exponents(problem.alpha);
    const auto st = strichartz_norm(traj, e.p, e.r);
    s["strichartz_norm"] = Json{{"a", e.p}, {"b", e.r}, {"value", st.value},
                                {"admissible", st.admissible}, {"coverage_ok", st.coverage_ok}};
  }
  s["exploratory"] = traj.exploratory;
  s["warnings"] = warnings_json(traj.warnings);

  if (c.solver.write_checkpoints) {
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "checkpoint_%04zu.snls", i);
      write_checkpoint((std::filesystem::path(c.output_dir) / name).string(),
                       traj.snapshots[i].field, traj.snapshots[i].t);
    }
    s["checkpoints"] = traj.snapshots.size();
  }
  return out;
}

RunArtifacts linear_channels_experiment(const RunConfig& c) {
  const auto problem = make_problem(c);
  const auto prop = make_propagator(c, problem.grid, problem.potential);
  const auto study = linear_channel_study(prop, problem.u0, c.channels.n);

  RunArtifacts out{header(c), {}};
  out.series.columns = {"n", "cauchy_gap", "reconstruction_time", "reconstruction_defect",
                        "mass_partition_defect", "eta_norm", "gamma_norm"};
  std::vector<double> gaps, defects;
  for (std::size_t i = 0; i < study.pairs.size(); ++i) {
    const auto& pr = study.pairs[i];
    const double gap = pr.has_cauchy_gap ? pr.cauchy_gap : kNaN;
    if (pr.has_cauchy_gap) gaps.push_back(gap);
    defects.push_back(study.reconstruction_defect[i]);
    out.series.add_row({static_cast<double>(pr.extraction_n), gap, study.reconstruction_times[i],
                        study.reconstruction_defect[i], study.mass_partition_defect[i],
                        std::sqrt(l2_norm_sq(pr.eta)), std::sqrt(l2_norm_sq(pr.gamma))});
  }
  const auto& last = study.pairs.back();
  auto& s = out.summary;
  s["propagator"] = c.propagator.method;
  s["n_max"] = c.channels.n;
  s["psi_norm"] = std::sqrt(study.psi_mass);
  s["eta_norm"] = std::sqrt(l2_norm_sq(last.eta));
  s["gamma_norm"] = std::sqrt(l2_norm_sq(last.gamma));
  s["final_cauchy_gap"] = last.has_cauchy_gap ? Json(last.cauchy_gap) : Json(nullptr);
  s["final_reconstruction_defect"] = study.reconstruction_defect.back();
  s["final_mass_partition_defect"] = study.mass_partition_defect.back();
  s["cauchy_gap_decreasing"] = strictly_decreasing(gaps);
  s["reconstruction_defect_decreasing"] = strictly_decreasing(defects);
  return out;
}

RunArtifacts channels_experiment(const RunConfig& c) {
  auto problem = make_problem(c);
  const auto& times = c.channels.wave_times;
  if (times.back() > problem.t_final + 1e-12) {
    config_error("channels.wave_times must not exceed solver.t_final");
  }
  problem.t_final = times.back();
  problem.record_times = times;
  const auto traj = solve(problem);
  const auto prop = make_propagator(c, problem.grid, problem.potential);

  RunArtifacts out{header(c), {}};
  out.series.columns = {"T", "wave_gap_h1", "wave_state_h1", "mass", "energy"};
  std::vector<ComplexField> states;
  std::vector<double> gaps;
  for (double T : times) {
    states.push_back(nonlinear_wave_state(traj, prop, T));
    const auto* snap = find_snapshot(traj, T);
    double gap = kNaN;
    if (states.size() > 1) {
      gap = std::sqrt(h1_norm_sq(states.back() - states[states.size() - 2]));
      gaps.push_back(gap);
    }
    out.series.add_row({T, gap, std::sqrt(h1_norm_sq(states.back())), l2_norm_sq(snap->field),
                        problem_energy(problem, snap->field)});
  }

  const double T = times.back();
  const auto pair = extract_linear_channels(prop, states.back(), c.channels.n);
  const auto& uT = find_snapshot(traj, T)->field;
  const double defect = channel_reconstruction_defect(uT, pair, T) / std::sqrt(l2_norm_sq(uT));

  auto& s = out.summary;
  s["alpha"] = problem.alpha;
  s["dt"] = problem.dt;
  s["exponents"] = exponents_json(problem.alpha, problem.permissive);
  s["initial_h1_norm"] = std::sqrt(h1_norm_sq(problem.u0));
  s["initial_mass"] = traj.diagnostics.front().mass;
  s["final_mass"] = traj.diagnostics.back().mass;
  s["initial_energy"] = traj.diagnostics.front().energy;
  s["final_energy"] = traj.diagnostics.back().energy;
  Json g = Json::array();
  for (double v : gaps) g.push_back(v);
  s["wave_gaps_h1"] = g;
  s["wave_gaps_decreasing"] = strictly_decreasing(gaps);
  s["extraction_n"] = c.channels.n;
  s["eta_norm"] = std::sqrt(l2_norm_sq(pair.eta));
  s["gamma_norm"] = std::sqrt(l2_norm_sq(pair.gamma));
  s["reconstruction_time"] = T;
  s["relative_reconstruction_defect"] = defect;
  s["exploratory"] = traj.exploratory;
  s["warnings"] = warnings_json(traj.warnings);
  return out;
}

// Cumulative trapezoid integral of `values` over `times`, evaluated at `upper`.
double integral_up_to(const std::vector<double>& times, const std::vector<double>& values,
                      double upper) {
  double sum = 0.0;
  for (std::size_t i = 1; i < times.size() && times[i] <= upper + 1e-9; ++i) {
    sum += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
  }
  return sum;
}

RunArtifacts morawetz_experiment(const RunConfig& c) {
  auto problem = make_problem(c);
  const auto& m = c.morawetz;
  problem.t_final = m.t_end;
  problem.record_times.clear();
  const auto count = static_cast<long>(std::llround(m.t_end / m.snapshot_dt));
  if (std::abs(static_cast<double>(count) * m.snapshot_dt - m.t_end) > 1e-9 * m.t_end) {
    config_error("morawetz.t_end must be a multiple of morawetz.snapshot_dt");
  }
  for (long k = 1; k <= count; ++k) problem.record_times.push_back(static_cast<double>(k) * m.snapshot_dt);
  const auto traj = solve(problem);
  MorawetzOptions opt;
  opt.t_start = m.t_start;
  opt.variant = m.variant == "equation" ? TimeDerivative::kEquation : TimeDerivative::kSnapshotDifference;
  const auto rep = morawetz_report(traj, opt);

  RunArtifacts out{header(c), {}};
  out.series.columns = {"t", "density", "repulsive_term", "identity_residual", "relative_residual"};
  std::size_t r = 0;
  double max_rel = 0.0;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    double res = kNaN, rel = kNaN;
    if (r < rep.residual_times.size() && std::abs(rep.residual_times[r] - rep.times[i]) < 1e-12) {
      res = rep.identity_residual_series[r];
      rel = rep.relative_residual_series[r];
      max_rel = std::max(max_rel, rel);
      ++r;
    }
    out.series.add_row({rep.times[i], rep.density_series[i], rep.repulsive_term_series[i], res, rel});
  }

  // Integral over [t_start, T] at T = t_end, t_end/2, t_end/4.
  const double i1 = rep.integral_value;
  const double i2 = integral_up_to(rep.times, rep.density_series, 0.5 * m.t_end);
  const double i4 = integral_up_to(rep.times, rep.density_series, 0.25 * m.t_end);
  auto& s = out.summary;
  s["alpha"] = problem.alpha;
  s["dt"] = problem.dt;
  s["linear"] = problem.linear;
  s["snapshot_dt"] = m.snapshot_dt;
  s["t_start"] = m.t_start;
  s["t_end"] = m.t_end;
  s["variant"] = m.variant;
  s["integral_value"] = i1;
  s["integral_half"] = i2;
  s["integral_quarter"] = i4;
  s["increment_ratio"] = (i2 - i4) != 0.0 ? (i1 - i2) / (i2 - i4) : kNaN;
  s["max_relative_residual"] = max_rel;
  s["repulsive_term_min_pointwise"] = rep.repulsive_term_min_pointwise;
  s["exploratory"] = traj.exploratory;
  s["warnings"] = warnings_json(traj.warnings);
  return out;
}

RunArtifacts decay_experiment(const RunConfig& c) {
  const auto problem = make_problem(c);
  const auto prop = make_propagator(c, problem.grid, problem.potential);
  auto times = c.decay.times;
  if (times.empty()) {
    const auto& d = c.decay;
    for (int k = 0; k < d.count; ++k) {
      const double f = d.count > 1 ? static_cast<double>(k) / (d.count - 1) : 0.0;
      times.push_back(d.t_min * std::pow(d.t_max / d.t_min, f));
    }
  }
  const auto res = decay_ratio(prop, problem.u0, times);

  RunArtifacts out{header(c), {}};
  out.series.columns = {"t", "decay_ratio"};
  for (std::size_t i = 0; i < res.times.size(); ++i) out.series.add_row({res.times[i], res.ratios[i]});
  auto& s = out.summary;
  s["propagator"] = c.propagator.method;
  s["max_ratio"] = *std::max_element(res.ratios.begin(), res.ratios.end());
  s["free_kernel_bound"] = decay_kernel_bound_free();
  s["max_boundary_fraction"] = res.max_boundary_fraction;
  s["boundary_warning"] = res.boundary_warning;
  return out;
}

RunArtifacts profiles_experiment(const RunConfig& c, int threads) {
  const auto problem = make_problem(c);
  const auto prop = make_propagator(c, problem.grid, problem.potential);
  const auto& pc = c.profiles;
  ProfileOptions opt;
  opt.time_window = pc.time_window;
  opt.time_spacing = pc.time_spacing;
  opt.consensus_tol = pc.consensus_tol;
  opt.stop_ratio = pc.stop_ratio;
  opt.alpha = problem.alpha;
  opt.threads = threads;
  const double q = pc.q > 0.0 ? pc.q : exponents(problem.alpha, problem.permissive).q;
  const auto fx = make_profile_fixture(pc.fixture, prop, pc.members, c.seed, opt);
  const auto set = greedy_profile_decomposition(fx.fields, prop, pc.j_max, q, opt);

  RunArtifacts out{header(c), {}};
  out.series.columns = {"j", "psi_norm", "filter_radius", "profile_error"};
  Json errors = Json::array();
  for (std::size_t j = 0; j < set.profiles.size(); ++j) {
    const auto& pr = set.profiles[j];
    double err = kNaN;
    if (j < fx.truth.size()) {
      err = std::sqrt(l2_norm_sq(pr.psi - fx.truth[j]) / l2_norm_sq(fx.truth[j]));
      errors.push_back(err);
    }
    out.series.add_row({static_cast<double>(j), std::sqrt(l2_norm_sq(pr.psi)), pr.filter_radius, err});
  }
  auto& s = out.summary;
  s["fixture"] = pc.fixture;
  s["members"] = pc.members;
  s["q"] = q;
  s["profile_count"] = set.profiles.size();
  s["expected_profiles"] = fx.truth.size();
  s["profile_errors"] = errors;
  s["concentration_level"] = set.concentration_level;
  s["localization_exponent"] = set.localization_exponent;
  bool half_sup = true;
  for (const auto& pr : set.profiles) half_sup = half_sup && pr.half_sup_condition;
  s["half_sup_condition"] = half_sup;
  const auto& d = set.pythagorean_defects;
  s["pythagorean_defects"] = Json{{"mass", d.mass}, {"h1v", d.h1v}, {"lq", d.lq}, {"energy", d.energy}};
  return out;
}

RunArtifacts translation_experiment(const RunConfig& c) {
  const auto problem = make_problem(c);
  const auto prop = make_propagator(c, problem.grid, problem.potential);
  TranslationOptions opt;
  opt.t_begin = c.translation.t_begin;
  opt.t_end = c.translation.t_end;
  opt.sample_dt = c.translation.sample_dt;
  opt.alpha = problem.alpha;

  RunArtifacts out{header(c), {}};
  out.series.columns = {"x_shift", "gap", "reference_shifted"};
  Json pair;
  for (double x : c.translation.shifts) {
    const auto gap = translation_flow_gap(prop, problem.u0, x, opt);
    out.series.add_row({x, gap.value, gap.reference_flow == "shifted" ? 1.0 : 0.0});
    pair = Json{{"a", gap.a}, {"b", gap.b}};
  }
  auto& s = out.summary;
  s["alpha"] = problem.alpha;
  s["norm_exponents"] = pair;
  s["t_begin"] = opt.t_begin;
  s["t_end"] = opt.t_end;
  s["sample_dt"] = opt.sample_dt;
  return out;
}

RunArtifacts check_potential_experiment(const RunConfig& c) {
  const Grid grid(c.grid.n_points, c.grid.length);
  const auto spec = resolved_spec(c, grid);
  const auto v = build_potential(spec, grid);
  const auto dv = build_potential_gradient(spec, grid);
  const auto rep = check_hypotheses(v, grid, c.epsilon,
                                    HypothesisTargets{spec.a_minus, spec.a_plus});

  RunArtifacts out{header(c), {}};
  out.series.columns = {"x", "V", "dV"};
  for (std::size_t j = 0; j < v.size(); ++j) out.series.add_row({grid.x(j), v[j], dv[j]});
  auto& s = out.summary;
  s["epsilon"] = c.epsilon;
  s["nonnegative"] = rep.nonnegative;
  s["bounded"] = rep.bounded;
  s["left_limit_ok"] = rep.left_limit_ok;
  s["right_limit_ok"] = rep.right_limit_ok;
  s["decay_rate_ok"] = rep.decay_rate_ok;
  s["decay_exponent"] = std::isfinite(rep.decay_exponent) ? Json(rep.decay_exponent) : Json("inf");
  s["repulsive"] = rep.repulsive;
  s["gradient_vanishes"] = rep.gradient_vanishes;
  s["worst_violation"] = Json{{"location", rep.worst_violation.location},
                              {"value", rep.worst_violation.value}};
  s["all_hypotheses"] = rep.all();
  return out;
}

void write_artifacts(const std::string& dir, const RunArtifacts& a) {
  write_text_file((std::filesystem::path(dir) / "summary.json").string(), dump_json(a.summary));
  write_text_file((std::filesystem::path(dir) / "series.csv").string(), a.series.to_csv());
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory '" + dir + "': " + ec.message());
}

void run_sweep(const RunConfig& c, int threads) {
  const auto& sw = c.sweep;
  const std::size_t count = sw.values.size();
  std::vector<RunConfig> configs;
  for (std::size_t i = 0; i < count; ++i) {
    KeyValueConfig kv = c.source;
    for (const auto& [k, v] : c.source.entries()) {
      if (k.rfind("sweep.", 0) == 0) kv.erase(k);
    }
    kv.set("experiment", sw.experiment);
    kv.set(sw.parameter, sw.values[i]);
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    kv.set("output_dir", (std::filesystem::path(c.output_dir) / name).string());
    try {
      configs.push_back(build_run_config(kv, std::nullopt));
    } catch (const Error& e) {
      throw Error(e.code(), "sweep value '" + sw.values[i] + "': " + e.what());
    }
  }

  // Each run owns its subdirectory; results land in per-index slots.
  std::vector<Json> status(count);
  std::vector<std::optional<Error>> failures(count);
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < count; i += workers) {
      Json st{{"value", sw.values[i]}, {"output_dir", configs[i].output_dir}};
      try {
        run(configs[i], 1);
        st["status"] = "ok";
      } catch (const Error& e) {
        st["status"] = to_string(e.code());
        st["message"] = e.what();
        failures[i] = e;
      } catch (const std::exception& e) {
        st["status"] = "internal";
        st["message"] = e.what();
        failures[i] = Error(ErrorCode::kInvalidField, e.what());
      }
      status[i] = std::move(st);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  Json summary = header(c);
  summary["sweep"] = Json{{"experiment", sw.experiment}, {"parameter", sw.parameter}};
  Json runs = Json::array();
  SeriesTable series;
  series.columns = {"index", "ok"};
  for (std::size_t i = 0; i < count; ++i) {
    runs.push_back(status[i]);
    series.add_row({static_cast<double>(i), failures[i] ? 0.0 : 1.0});
  }
  summary["runs"] = runs;
  write_artifacts(c.output_dir, RunArtifacts{summary, series});
  for (const auto& f : failures) {
    if (f) throw *f;
  }
}

}  // namespace

ComplexField make_initial_field(const RunConfig& c) {
  const Grid grid(c.grid.n_points, c.grid.length);
  const auto& ini = c.initial;
  if (ini.shape == "zero") return ComplexField(grid);
  if (ini.shape == "checkpoint") {
    auto cp = read_checkpoint(ini.checkpoint);
    if (!(cp.field.grid() == grid)) {
      config_error("initial.checkpoint grid does not match [grid]");
    }
    return std::move(cp.field);
  }
  return ComplexField::sample(grid, [&](double x) {
    const double s = (x - ini.center) / ini.width;
    return ini.amplitude * std::exp(-s * s) * std::polar(1.0, ini.momentum * x);
  });
}

NlsProblem make_problem(const RunConfig& c) {
  const Grid grid(c.grid.n_points, c.grid.length);
  const auto spec = resolved_spec(c, grid);
  NlsProblem p{grid,
               {},
               {},
               c.solver.alpha,
               make_initial_field(c),
               c.solver.dt,
               c.solver.t_final,
               {},
               c.solver.permissive,
               c.solver.linear};
  try {
    p.potential = build_potential(spec, grid);
    p.potential_gradient = build_potential_gradient(spec, grid);
  } catch (const Error& e) {
    config_error(std::string("potential: ") + e.what());
  }
  return p;
}

PerturbedPropagator make_propagator(const RunConfig& c, const Grid& grid,
                                    std::vector<double> potential) {
  if (c.propagator.method == "eigendecomposition") {
    const auto stencil = c.propagator.stencil == "central_difference"
                             ? EigenStencil::kCentralDifference
                             : EigenStencil::kFourierCollocation;
    return PerturbedPropagator::eigendecomposition(grid, std::move(potential), stencil);
  }
  return PerturbedPropagator::strang(grid, std::move(potential), c.propagator.dt);
}

RunArtifacts run_experiment(const RunConfig& c, int threads) {
  switch (c.experiment) {
    case Experiment::kEvolve: return evolve_experiment(c);
    case Experiment::kChannels: return channels_experiment(c);
    case Experiment::kLinearChannels: return linear_channels_experiment(c);
    case Experiment::kMorawetz: return morawetz_experiment(c);
    case Experiment::kDecay: return decay_experiment(c);
    case Experiment::kProfiles: return profiles_experiment(c, threads);
    case Experiment::kTranslationGap: return translation_experiment(c);
    case Experiment::kCheckPotential: return check_potential_experiment(c);
    case Experiment::kSweep: break;
  }
  config_error("sweep cannot run in memory");
}

void run(const RunConfig& c, int threads) {
  make_dir(c.output_dir);
  if (c.experiment == Experiment::kSweep) {
    run_sweep(c, threads);
    return;
  }
  write_artifacts(c.output_dir, run_experiment(c, threads));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInstability:
    case ErrorCode::kInvalidField: return 3;
    case ErrorCode::kIo: return 4;
    default: return 2;
  }
}

std::string error_json(ErrorCode code, const std::string& message) {
  return Json{{"error", {{"code", to_string(code)}, {"exit_code", exit_code_for(code)},
                         {"message", message}}}}
      .dump();
}

}  // namespace snls
