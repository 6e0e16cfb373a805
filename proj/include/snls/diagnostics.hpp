#pragma once

#include <span>
#include <string>
#include <vector>

#include "snls/nls_solver.hpp"
#include "snls/propagators.hpp"
#include "snls/spectral.hpp"

namespace snls {

// ---- conserved quantities ----------------------------------------------------

/// E(f) = 1/2 int (|f'|^2 + V |f|^2 + 2/(alpha+2) |f|^(alpha+2)) dx.
double energy(const ComplexField& f, std::span<const double> v, double alpha);
/// 1/2 int (|f'|^2 + V |f|^2) dx.
double quadratic_energy(const ComplexField& f, std::span<const double> v);
/// int |f'|^2 + int V |f|^2 + int |f|^2.
double h1v_norm_sq(const ComplexField& f, std::span<const double> v);
/// int |f'|^2 + int V |f|^2 (the energy-space seminorm).
double hv_norm_sq(const ComplexField& f, std::span<const double> v);

// ---- exponents ------------------------------------------------------------------

struct StrichartzPair {
  double a;
  double b;
};

/// 2/a == 1/2 - 1/b (d = 1) to 1e-12, with a, b in [2, inf].
bool is_admissible(StrichartzPair pair);

struct ExponentSet {
  double alpha = 0.0;
  double r = 0.0;        // alpha + 2
  double p = 0.0;        // 2 alpha (alpha+2) / (4 + alpha)
  double q = 0.0;        // 2 alpha (alpha+2) / (alpha^2 + alpha - 4)
  double q_dual = 0.0;   // q / (q - 1)
  bool in_range = true;  // alpha > 4
};

/// Lebesgue exponents of the nonlinear theory at d = 1. Throws kRange for
/// alpha <= 4 unless permissive (then in_range is false).
ExponentSet exponents(double alpha, bool permissive = false);

// ---- space-time norms ---------------------------------------------------------

struct StrichartzResult {
  double value = 0.0;
  bool admissible = false;
  /// At least 10 snapshots per unit time.
  bool coverage_ok = false;
};

/// (int ||u(t)||_{L^b}^a dt)^{1/a} by the trapezoid rule over the given
/// samples; a = inf gives the max over samples.
double space_time_norm(std::span<const double> times, std::span<const ComplexField> fields, double a,
                       double b);

StrichartzResult strichartz_norm(const Trajectory& traj, double a, double b);

// ---- dispersive decay -----------------------------------------------------------

struct DecayResult {
  std::vector<double> times;
  std::vector<double> ratios;  // t^{1/2} ||e^{it(D2-V)} psi||_inf / ||psi||_1
  double max_boundary_fraction = 0.0;
  bool boundary_warning = false;  // wrap-around mass > 1%
};

/// Times must be positive; they are visited in ascending order and the
/// state is propagated incrementally.
DecayResult decay_ratio(const PerturbedPropagator& p, const ComplexField& psi,
                        std::span<const double> times);

// ---- Morawetz ----------------------------------------------------------------

enum class TimeDerivative {
  kSnapshotDifference,  // centered differences across snapshots
  kEquation,            // u_t from the equation's right-hand side
};

struct MorawetzOptions {
  TimeDerivative variant = TimeDerivative::kSnapshotDifference;
  /// Snapshots before this time are ignored.
  double t_start = 1.0;
};

struct MorawetzReport {
  /// Snapshot times with t >= t_start.
  std::vector<double> times;
  /// int t^2 |u|^(alpha+2) / (t^2 + x^2)^{3/2} dx at each time.
  std::vector<double> density_series;
  /// Trapezoid integral of density_series over times.
  double integral_value = 0.0;
  /// Interior times (both neighbours available) for the residual.
  std::vector<double> residual_times;
  /// L1 norm in x of the identity's pointwise residual.
  std::vector<double> identity_residual_series;
  /// Residual divided by the L1 norm of the largest individual term.
  std::vector<double> relative_residual_series;
  /// int (-x V') |u|^2 / lambda dx at each time.
  std::vector<double> repulsive_term_series;
  /// Smallest pointwise value of (-x V') |u|^2 / lambda over all times.
  double repulsive_term_min_pointwise = 0.0;
};

/// Evaluates every term of the d = 1 Morawetz identity for the multiplier
/// m(u) = a u_x + g u, a = -2x/lambda, g = -t^2/lambda^3 - i t/lambda,
/// lambda = (t^2 + x^2)^{1/2}. Requires uniformly spaced snapshots; throws
/// kInsufficientData for fewer than 3 usable snapshots.
MorawetzReport morawetz_report(const Trajectory& traj, const MorawetzOptions& options = {});

/// Values of (-x V') |u|^2 / lambda on the grid.
std::vector<double> repulsive_density(const ComplexField& u, std::span<const double> gradient,
                                      double t);

}  // namespace snls
