#include "snls/nls_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "snls/diagnostics.hpp"
#include "snls/error.hpp"
#include "snls/propagators.hpp"

namespace snls {

namespace {

constexpr double kBlowupFactor = 1e6;
constexpr double kBoundaryWarn = 0.01;
constexpr double kHighBandWarn = 1e-8;

// |u|^alpha = (|u|^2)^(c/4) with c = 2 alpha; small integer c avoids pow.
inline double modulus_power(double m2, double alpha, int c) {
  if (c < 0) return std::pow(m2, 0.5 * alpha);
  double r = 1.0;
  for (int i = 0; i < c / 4; ++i) r *= m2;
  switch (c % 4) {
    case 1: return r * std::sqrt(std::sqrt(m2));
    case 2: return r * std::sqrt(m2);
    case 3: return r * std::sqrt(m2) * std::sqrt(std::sqrt(m2));
    default: return r;
  }
}

// 2 alpha when that is a small integer, otherwise -1.
int half_integer_code(double alpha) {
  const double twice = 2.0 * alpha;
  if (twice == std::floor(twice) && twice >= 0.0 && twice <= 40.0) return static_cast<int>(twice);
  return -1;
}

}  // namespace

void validate(const NlsProblem& p) {
  if (p.potential.size() != p.grid.n_points()) {
    throw Error(ErrorCode::kDimension, "potential samples do not match grid");
  }
  if (!p.potential_gradient.empty() && p.potential_gradient.size() != p.grid.n_points()) {
    throw Error(ErrorCode::kDimension, "potential gradient samples do not match grid");
  }
  require_same_grid(p.grid, p.u0.grid(), "NlsProblem initial data");
  p.u0.validate();
  if (!std::isfinite(p.alpha) || !(p.alpha > 0.0)) {
    throw Error(ErrorCode::kParameter, "alpha must be > 0");
  }
  if (!(p.alpha > 4.0) && !p.permissive) {
    throw Error(ErrorCode::kParameter, "alpha must be > 4 (set permissive for exploratory runs)");
  }
  if (!(p.dt > 0.0) || !std::isfinite(p.dt)) throw Error(ErrorCode::kParameter, "dt must be > 0");
  if (!(p.t_final > 0.0) || !std::isfinite(p.t_final)) {
    throw Error(ErrorCode::kParameter, "t_final must be > 0");
  }
  for (std::size_t i = 0; i < p.record_times.size(); ++i) {
    const double t = p.record_times[i];
    if (!(t >= 0.0 && t <= p.t_final)) {
      throw Error(ErrorCode::kParameter, "record_times must lie in [0, t_final]");
    }
    if (i > 0 && !(t > p.record_times[i - 1])) {
      throw Error(ErrorCode::kParameter, "record_times must be strictly increasing");
    }
  }
}

ComplexField phase_substep(const ComplexField& f, std::span<const double> v, double alpha,
                           double dt) {
  if (v.size() != f.size()) throw Error(ErrorCode::kDimension, "potential/field size mismatch");
  f.validate();
  const int code = half_integer_code(alpha);
  std::vector<Complex> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double m2 = std::norm(f[j]);
    const double nl = m2 == 0.0 ? 0.0 : modulus_power(m2, alpha, code);
    out[j] = f[j] * std::polar(1.0, -(v[j] + nl) * dt);
  }
  return ComplexField(f.grid(), std::move(out));
}

double problem_energy(const NlsProblem& problem, const ComplexField& f) {
  return problem.linear ? quadratic_energy(f, problem.potential)
                        : energy(f, problem.potential, problem.alpha);
}

SnapshotDiagnostics snapshot_diagnostics(const NlsProblem& problem, double t,
                                         const ComplexField& f) {
  SnapshotDiagnostics d;
  d.t = t;
  d.mass = l2_norm_sq(f);
  d.energy = problem_energy(problem, f);
  d.sup_norm = sup_norm(f);
  d.boundary_fraction = boundary_mass_fraction(f);
  d.high_band_fraction = high_band_fraction(f);
  return d;
}

Trajectory solve(const NlsProblem& p) {
  validate(p);
  Trajectory traj{p, {}, {}, {}, false};
  traj.exploratory = !(p.alpha > 4.0);
  if (traj.exploratory) traj.warnings.push_back("exploratory: alpha <= 4 outside the supercritical range");

  std::vector<double> targets;
  targets.push_back(0.0);
  for (double t : p.record_times) {
    if (t > 0.0) targets.push_back(t);
  }
  if (p.record_times.empty()) targets.push_back(p.t_final);

  const Grid& grid = p.grid;
  const std::size_t n = grid.n_points();
  const auto xi = grid.fft_wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto& v = p.potential;
  const int code = half_integer_code(p.alpha);

  std::map<double, std::vector<Complex>> kinetic_cache;
  auto kinetic_for = [&](double h) -> const std::vector<Complex>& {
    auto& k = kinetic_cache[h];
    if (k.empty()) {
      k.resize(n);
      for (std::size_t i = 0; i < n; ++i) k[i] = std::polar(inv_n, -h * xi[i] * xi[i]);
    }
    return k;
  };
  std::map<double, std::vector<Complex>> potential_cache;
  auto potential_phase_for = [&](double h) -> const std::vector<Complex>& {
    auto& ph = potential_cache[h];
    if (ph.empty()) {
      ph.resize(n);
      for (std::size_t j = 0; j < n; ++j) ph[j] = std::polar(1.0, -v[j] * h);
    }
    return ph;
  };

  auto& ws = thread_workspace(n);
  auto buf = ws.data();
  std::copy(p.u0.values().begin(), p.u0.values().end(), buf.begin());

  const double sup0 = sup_norm(p.u0);
  const double sup_limit = kBlowupFactor * std::max(sup0, 1e-300);

  // Returns the running sup norm over the buffer (taken before the phase,
  // which does not change moduli).
  auto apply_phase = [&](double h) {
    double sup2 = 0.0;
    if (p.linear) {
      const auto& ph = potential_phase_for(h);
      for (std::size_t j = 0; j < n; ++j) {
        sup2 = std::max(sup2, std::norm(buf[j]));
        buf[j] *= ph[j];
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const double m2 = std::norm(buf[j]);
        sup2 = std::max(sup2, m2);
        const double nl = m2 == 0.0 ? 0.0 : modulus_power(m2, p.alpha, code);
        buf[j] *= std::polar(1.0, -(v[j] + nl) * h);
      }
    }
    return std::sqrt(sup2);
  };
  auto check_stable = [&](double sup, double t) {
    if (!std::isfinite(sup) || sup > sup_limit) {
      throw Error(ErrorCode::kInstability,
                  "sup norm grew beyond 1e6 x initial at t=" + std::to_string(t) +
                      " (dt too large?)");
    }
  };

  auto record = [&](double t) {
    ComplexField f(grid, std::vector<Complex>(buf.begin(), buf.end()));
    check_stable(sup_norm(f), t);
    traj.diagnostics.push_back(snapshot_diagnostics(p, t, f));
    traj.snapshots.push_back({t, std::move(f)});
    // snapshot_diagnostics reuses the thread workspace for its transforms;
    // restore the state.
    const auto& last = traj.snapshots.back().field.values();
    std::copy(last.begin(), last.end(), buf.begin());
  };

  record(0.0);
  double t_now = 0.0;
  for (std::size_t i = 1; i < targets.size(); ++i) {
    const auto steps = substep_schedule(targets[i] - t_now, p.dt);
    if (!steps.empty()) {
      double pending = 0.5 * steps.front();
      for (std::size_t s = 0; s < steps.size(); ++s) {
        const double sup = apply_phase(pending);
        check_stable(sup, t_now);
        ws.forward();
        const auto& kin = kinetic_for(steps[s]);
        for (std::size_t k = 0; k < n; ++k) buf[k] *= kin[k];
        ws.backward();
        t_now += steps[s];
        pending = 0.5 * steps[s] + (s + 1 < steps.size() ? 0.5 * steps[s + 1] : 0.0);
      }
      apply_phase(pending);
    }
    t_now = targets[i];
    record(t_now);
  }

  double worst_boundary = 0.0;
  double worst_high = 0.0;
  for (const auto& d : traj.diagnostics) {
    worst_boundary = std::max(worst_boundary, d.boundary_fraction);
    worst_high = std::max(worst_high, d.high_band_fraction);
  }
  if (worst_boundary > kBoundaryWarn) {
    traj.warnings.push_back("wrap-around: boundary mass fraction " + std::to_string(worst_boundary) +
                            " exceeds 1%");
  }
  if (worst_high > kHighBandWarn) {
    traj.warnings.push_back("resolution: high-band spectral fraction " + std::to_string(worst_high) +
                            " exceeds 1e-8");
  }
  return traj;
}

}  // namespace snls
