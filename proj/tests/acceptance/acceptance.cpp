// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "snls/config.hpp"
#include "snls/diagnostics.hpp"
#include "snls/potentials.hpp"
#include "snls/propagators.hpp"
#include "snls/run.hpp"
#include "snls/scattering.hpp"

using namespace snls;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (ok ? "" : "!") << what << "; ";
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

RunArtifacts run_text(const std::string& text) {
  return run_experiment(build_run_config(KeyValueConfig::parse(text, "acceptance"), std::nullopt));
}

double rel_l2(const ComplexField& a, const ComplexField& b) {
  return std::sqrt(l2_norm_sq(a - b) / l2_norm_sq(b));
}

const char* kCanonical = R"(
[potential]
family = gaussian_matched_step
height = 2
width = 1
)";

// ---- 1: conservation ------------------------------------------------------------

Check conservation() {
  Check c;
  auto drift = [](const char* dt) {
    const auto a = run_text(std::string("experiment = evolve\n") + kCanonical + R"(
[grid]
n_points = 4096
length = 200
[initial]
amplitude = 1
width = 1
[solver]
alpha = 5
t_final = 10
record_stride = 0.1
dt = )" + dt);
    return std::pair{a.summary["relative_mass_drift"].get<double>(),
                     a.summary["relative_energy_drift"].get<double>()};
  };
  const auto [mass1, energy1] = drift("1e-3");
  const auto [mass2, energy2] = drift("5e-4");
  c.expect(mass1 < 1e-10, "mass drift " + fmt(mass1) + " < 1e-10");
  c.expect(energy1 < 1e-6, "energy drift " + fmt(energy1) + " < 1e-6");
  const double ratio = energy1 / energy2;
  c.expect(ratio >= 3.5, "energy drift ratio on halving dt " + fmt(ratio) + " >= 3.5");
  return c;
}

// ---- 2: propagator oracle -----------------------------------------------------

Check propagator_oracle() {
  Check c;
  const Grid grid(256, 40.0);
  const auto v = build_potential(PotentialSpec{}, grid);
  const auto psi = ComplexField::sample(grid, [](double x) { return Complex(std::exp(-x * x)); });
  const auto strang = PerturbedPropagator::strang(grid, v, 1e-3);
  const auto eig = PerturbedPropagator::eigendecomposition(grid, v);

  const double gap = std::sqrt(l2_norm_sq(strang.evolve(psi, 1.0) - eig.evolve(psi, 1.0)));
  c.expect(gap < 1e-6, "strang vs eig L2 " + fmt(gap) + " < 1e-6");

  const double gap_half =
      std::sqrt(l2_norm_sq(PerturbedPropagator::strang(grid, v, 5e-4).evolve(psi, 1.0) -
                           eig.evolve(psi, 1.0)));
  c.expect(gap / gap_half > 3.5, "strang order ratio " + fmt(gap / gap_half) + " > 3.5");

  const double s = 0.3, t = 0.45;
  const double free_law = rel_l2(evolve_free(evolve_free(psi, s), t), evolve_free(psi, s + t));
  const double shifted_law =
      rel_l2(evolve_shifted(evolve_shifted(psi, s), t), evolve_shifted(psi, s + t));
  const double eig_law = rel_l2(eig.evolve(eig.evolve(psi, s), t), eig.evolve(psi, s + t));
  const double strang_law =
      rel_l2(strang.evolve(strang.evolve(psi, s), t), strang.evolve(psi, s + t));
  c.expect(free_law < 1e-12, "free group law " + fmt(free_law));
  c.expect(shifted_law < 1e-12, "shifted group law " + fmt(shifted_law));
  c.expect(eig_law < 1e-10, "eig group law " + fmt(eig_law));
  c.expect(strang_law < 1e-10, "strang group law " + fmt(strang_law));

  const double m0 = l2_norm_sq(psi);
  auto unit = [&](const ComplexField& f) { return std::abs(l2_norm_sq(f) - m0) / m0; };
  const double u_free = unit(evolve_free(psi, 3.0));
  const double u_shift = unit(evolve_shifted(psi, 3.0));
  const double u_eig = unit(eig.evolve(psi, 3.0));
  const double u_strang = unit(strang.evolve(psi, 3.0));
  c.expect(u_free < 1e-12 && u_shift < 1e-12, "free/shifted unitarity " + fmt(std::max(u_free, u_shift)));
  c.expect(u_eig < 1e-12, "eig unitarity " + fmt(u_eig));
  c.expect(u_strang < 3e-11, "strang unitarity over t=3 " + fmt(u_strang));
  return c;
}

// ---- 3: dispersive decay -------------------------------------------------------

Check dispersive_decay() {
  Check c;
  const std::string common = R"(
experiment = decay
[grid]
n_points = 8192
length = 2048
[initial]
amplitude = 1
width = 1
[decay]
t_min = 1
t_max = 100
count = 100
)";
  const auto free = run_text(common + R"(
[potential]
family = flat
a_minus = 0
a_plus = 0
[propagator]
dt = 1e-2
)");
  const double bound = decay_kernel_bound_free() * (1.0 + 1e-3);
  const double free_max = free.summary["max_ratio"].get<double>();
  c.expect(free_max <= bound, "V=0 max ratio " + fmt(free_max) + " <= " + fmt(bound));
  c.expect(!free.summary["boundary_warning"].get<bool>(), "V=0 no wrap-around");

  const auto step = run_text(common + kCanonical + "[propagator]\ndt = 1e-3\n");
  const double step_max = step.summary["max_ratio"].get<double>();
  c.expect(step_max <= 1.0, "step max ratio " + fmt(step_max) + " <= 1");
  c.expect(!step.summary["boundary_warning"].get<bool>(), "step no wrap-around");
  return c;
}

// ---- 4: linear double channels ------------------------------------------------

Check linear_channels() {
  Check c;
  const Grid small(1024, 128.0);
  const auto psi = ComplexField::sample(small, [](double x) {
    return std::exp(-x * x) * std::polar(1.0, 0.5 * x);
  });
  for (double level : {0.0, 1.0}) {
    // A constant potential commutes with the kinetic substep, so splitting
    // is exact at any dt; the coarse step only limits round-off growth.
    const auto p = PerturbedPropagator::strang(small, std::vector<double>(1024, level), 0.1);
    const auto study = linear_channel_study(p, psi, 6);
    double worst = 0.0;
    for (const auto& pr : study.pairs) {
      const auto& carrier = level == 0.0 ? pr.eta : pr.gamma;
      const auto& empty = level == 0.0 ? pr.gamma : pr.eta;
      worst = std::max({worst, rel_l2(carrier, psi), std::sqrt(l2_norm_sq(empty) / l2_norm_sq(psi))});
    }
    c.expect(worst < 1e-12, "V=" + fmt(level) + " degenerate channels " + fmt(worst));
  }

  const auto a = run_text(std::string("experiment = linear_channels\n") + kCanonical + R"(
[grid]
n_points = 8192
length = 1024
[initial]
amplitude = 1
width = 1
[propagator]
dt = 1e-3
[channels]
n = 6
)");
  c.expect(a.summary["cauchy_gap_decreasing"].get<bool>(), "cauchy gap decreasing over n=1..6");
  c.expect(a.summary["reconstruction_defect_decreasing"].get<bool>(),
           "reconstruction defect decreasing (last " +
               fmt(a.summary["final_reconstruction_defect"].get<double>()) + ")");
  const double mp = a.summary["final_mass_partition_defect"].get<double>();
  c.expect(mp < 1e-3, "mass partition defect " + fmt(mp) + " < 1e-3");
  return c;
}

// ---- 5: nonlinear scattering and channels ------------------------------------

Check nonlinear_channels() {
  Check c;
  // Incoming packet, width 6 and momentum 1.7, started left of the step.
  const double w = 6.0, k = 1.7;
  const double amplitude = 0.1 / std::sqrt(w * std::sqrt(M_PI / 2.0) * (1.0 + k * k + 1.0 / (w * w)));
  const auto a = run_text(std::string("experiment = channels\n") + kCanonical + R"(
[grid]
n_points = 4096
length = 400
[initial]
width = 6
center = -40
momentum = 1.7
amplitude = )" + std::to_string(amplitude) + R"(
[solver]
alpha = 5
dt = 1e-3
t_final = 40
[propagator]
dt = 1e-3
[channels]
n = 6
wave_times = 10, 20, 40
)");
  const double h1 = a.summary["initial_h1_norm"].get<double>();
  c.expect(std::abs(h1 - 0.1) < 1e-3, "||u0||_H1 = " + fmt(h1));
  const auto& gaps = a.summary["wave_gaps_h1"];
  c.expect(a.summary["wave_gaps_decreasing"].get<bool>(),
           "wave-operator gaps " + fmt(gaps[0].get<double>()) + " > " + fmt(gaps[1].get<double>()));
  const double defect = a.summary["relative_reconstruction_defect"].get<double>();
  c.expect(defect < 1e-2, "channel reconstruction defect at T=40 " + fmt(defect) + " < 1e-2");
  return c;
}

// ---- 6: Morawetz -----------------------------------------------------------------

Check morawetz() {
  Check c;
  std::vector<double> residual;
  double min_repulsive = 0.0;
  for (const char* h : {"0.04", "0.02", "0.01"}) {
    const auto a = run_text(std::string("experiment = morawetz\n") + kCanonical + R"(
[grid]
n_points = 8192
length = 400
[initial]
amplitude = 1
width = 1
[solver]
linear = true
dt = 1e-3
t_final = 4
[morawetz]
t_start = 1
t_end = 4
snapshot_dt = )" + h);
    residual.push_back(a.summary["max_relative_residual"].get<double>());
    min_repulsive = std::min(min_repulsive, a.summary["repulsive_term_min_pointwise"].get<double>());
  }
  for (std::size_t i = 1; i < residual.size(); ++i) {
    const double order = std::log2(residual[i - 1] / residual[i]);
    c.expect(order >= 1.8, "residual " + fmt(residual[i]) + " order " + fmt(order) + " >= 1.8");
  }

  // Scattering run: integral over [1, T] for T = 2, 4, 8, 16.
  const auto cfg = build_run_config(
      KeyValueConfig::parse(std::string("experiment = morawetz\n") + kCanonical + R"(
[grid]
n_points = 2048
length = 400
[initial]
amplitude = 1
width = 1
[solver]
alpha = 5
dt = 1e-3
t_final = 16
record_stride = 0.01
)"),
      std::nullopt);
  auto problem = make_problem(cfg);
  for (int k = 1; k <= 1600; ++k) problem.record_times.push_back(0.01 * k);
  const auto rep = morawetz_report(solve(problem));
  min_repulsive = std::min(min_repulsive, rep.repulsive_term_min_pointwise);
  c.expect(min_repulsive >= 0.0, "repulsive term min " + fmt(min_repulsive) + " >= 0");
  std::vector<double> integral;
  for (double T : {2.0, 4.0, 8.0, 16.0}) {
    double sum = 0.0;
    for (std::size_t i = 1; i < rep.times.size() && rep.times[i] <= T + 1e-9; ++i) {
      sum += 0.5 * (rep.times[i] - rep.times[i - 1]) * (rep.density_series[i] + rep.density_series[i - 1]);
    }
    integral.push_back(sum);
  }
  for (std::size_t i = 2; i < integral.size(); ++i) {
    const double ratio = (integral[i] - integral[i - 1]) / (integral[i - 1] - integral[i - 2]);
    c.expect(ratio < 0.5, "increment ratio " + fmt(ratio) + " < 0.5");
  }
  return c;
}

// ---- 7: profile decomposition ---------------------------------------------------

Check profiles() {
  Check c;
  for (const char* fixture : {"one", "two", "noise"}) {
    const auto a = run_text(std::string("experiment = profiles\nseed = 7\n") + kCanonical + R"(
[grid]
n_points = 1024
length = 160
[solver]
alpha = 5
[propagator]
dt = 1e-2
[profiles]
members = 8
j_max = 4
fixture = )" + fixture);
    const auto& s = a.summary;
    const auto expected = s["expected_profiles"].get<std::size_t>();
    const auto found = s["profile_count"].get<std::size_t>();
    c.expect(found == expected, std::string(fixture) + ": " + std::to_string(found) + " profiles");
    for (const auto& e : s["profile_errors"]) {
      c.expect(e.get<double>() < 1e-2, std::string(fixture) + " profile error " + fmt(e.get<double>()));
    }
    const double mass = s["pythagorean_defects"]["mass"].get<double>();
    c.expect(std::abs(mass) < 0.05, std::string(fixture) + " mass defect " + fmt(mass));
  }
  return c;
}

// ---- 8: exponent arithmetic ----------------------------------------------------

Check exponent_arithmetic() {
  Check c;
  const auto e = exponents(5.0);
  c.expect(e.r == 7.0 && e.p == 70.0 / 9.0 && e.q == 35.0 / 13.0, "exponents(5) = (7, 70/9, 35/13)");
  const double inf = std::numeric_limits<double>::infinity();
  c.expect(is_admissible({inf, 2.0}), "(inf, 2) admissible");
  c.expect(is_admissible({4.0, inf}), "(4, inf) admissible");
  c.expect(is_admissible({8.0, 4.0}), "(8, 4) admissible");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"conservation", conservation},
      {"propagator oracle", propagator_oracle},
      {"dispersive decay", dispersive_decay},
      {"linear double channels", linear_channels},
      {"nonlinear scattering and channels", nonlinear_channels},
      {"Morawetz", morawetz},
      {"profile decomposition", profiles},
      {"exponent arithmetic", exponent_arithmetic},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += c.pass ? 0 : 1;
    std::printf("criterion %zu %-34s %s  (%.1f s)  %s\n", i + 1, criteria[i].first,
                c.pass ? "PASS" : "FAIL", secs, c.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
