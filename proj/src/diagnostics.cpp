#include "snls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snls/error.hpp"

namespace snls {

namespace {

void require_potential(const ComplexField& f, std::span<const double> v) {
  if (v.size() != f.size()) throw Error(ErrorCode::kDimension, "potential/field grid mismatch");
}

double potential_term(const ComplexField& f, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += v[j] * std::norm(f[j]);
  return s * f.grid().dx();
}

}  // namespace

double quadratic_energy(const ComplexField& f, std::span<const double> v) {
  require_potential(f, v);
  return 0.5 * (l2_norm_sq(spectral_derivative(f)) + potential_term(f, v));
}

double energy(const ComplexField& f, std::span<const double> v, double alpha) {
  require_potential(f, v);
  double nl = 0.0;
  for (const auto& z : f.values()) nl += std::pow(std::abs(z), alpha + 2.0);
  nl *= f.grid().dx() * 2.0 / (alpha + 2.0);
  return quadratic_energy(f, v) + 0.5 * nl;
}

double hv_norm_sq(const ComplexField& f, std::span<const double> v) {
  require_potential(f, v);
  return l2_norm_sq(spectral_derivative(f)) + potential_term(f, v);
}

double h1v_norm_sq(const ComplexField& f, std::span<const double> v) {
  return hv_norm_sq(f, v) + l2_norm_sq(f);
}

bool is_admissible(StrichartzPair pair) {
  if (!(pair.a >= 2.0) || !(pair.b >= 2.0)) return false;
  return std::abs(2.0 / pair.a - (0.5 - 1.0 / pair.b)) <= 1e-12;
}

ExponentSet exponents(double alpha, bool permissive) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw Error(ErrorCode::kRange, "alpha must be > 0");
  const bool in_range = alpha > 4.0;
  if (!in_range && !permissive) {
    throw Error(ErrorCode::kRange, "exponents require alpha > 4");
  }
  constexpr double d = 1.0;
  ExponentSet e;
  e.alpha = alpha;
  e.in_range = in_range;
  e.r = alpha + 2.0;
  e.p = 2.0 * alpha * (alpha + 2.0) / (4.0 - (d - 2.0) * alpha);
  e.q = 2.0 * alpha * (alpha + 2.0) / (d * alpha * alpha - (d - 2.0) * alpha - 4.0);
  e.q_dual = e.q / (e.q - 1.0);
  return e;
}

double space_time_norm(std::span<const double> times, std::span<const ComplexField> fields,
                       double a, double b) {
  if (times.size() != fields.size()) throw Error(ErrorCode::kDimension, "times/fields size mismatch");
  if (times.empty()) return 0.0;
  std::vector<double> norms(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) norms[i] = lp_norm(fields[i], b);
  if (std::isinf(a)) return *std::max_element(norms.begin(), norms.end());
  if (times.size() == 1) return 0.0;
  // Scale out the max to keep pow() in range for large a.
  const double m = *std::max_element(norms.begin(), norms.end());
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    s += 0.5 * dt * (std::pow(norms[i - 1] / m, a) + std::pow(norms[i] / m, a));
  }
  return m * std::pow(s, 1.0 / a);
}

StrichartzResult strichartz_norm(const Trajectory& traj, double a, double b) {
  StrichartzResult r;
  r.admissible = is_admissible({a, b});
  std::vector<double> times;
  std::vector<ComplexField> fields;
  for (const auto& s : traj.snapshots) {
    times.push_back(s.t);
    fields.push_back(s.field);
  }
  const double span = times.empty() ? 0.0 : times.back() - times.front();
  r.coverage_ok = span > 0.0 && static_cast<double>(times.size() - 1) >= 10.0 * span;
  r.value = space_time_norm(times, fields, a, b);
  return r;
}

DecayResult decay_ratio(const PerturbedPropagator& p, const ComplexField& psi,
                        std::span<const double> times) {
  const double l1 = l1_norm(psi);
  if (!(l1 > 0.0)) throw Error(ErrorCode::kParameter, "decay_ratio needs ||psi||_1 > 0");
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  for (double t : sorted) {
    if (!(t > 0.0)) throw Error(ErrorCode::kParameter, "decay_ratio times must be > 0");
  }
  DecayResult r;
  ComplexField u = psi;
  double t_now = 0.0;
  for (double t : sorted) {
    u = p.evolve(u, t - t_now);
    t_now = t;
    r.times.push_back(t);
    r.ratios.push_back(std::sqrt(t) * sup_norm(u) / l1);
    r.max_boundary_fraction = std::max(r.max_boundary_fraction, boundary_mass_fraction(u));
  }
  r.boundary_warning = r.max_boundary_fraction > 0.01;
  return r;
}

}  // namespace snls
