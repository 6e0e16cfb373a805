#pragma once

#include <string>
#include <vector>

#include "snls/spectral.hpp"

namespace snls {

/// i u_t = -u_xx + V u + |u|^alpha u on the periodic grid.
struct NlsProblem {
  Grid grid;
  std::vector<double> potential;
  /// Optional V'(x) samples, used by the Morawetz diagnostics. Left empty,
  /// consumers fall back to a fourth-order finite difference.
  std::vector<double> potential_gradient;
  double alpha = 5.0;
  ComplexField u0;
  double dt = 1e-3;
  double t_final = 1.0;
  /// Snapshot times in [0, t_final]; t = 0 is always recorded. Empty means
  /// {0, t_final}.
  std::vector<double> record_times;
  /// Accept 0 < alpha <= 4; outputs are tagged exploratory.
  bool permissive = false;
  /// Drop the |u|^alpha u term (linear flow with the same integrator).
  bool linear = false;
};

/// Throws kParameter/kDimension on violated problem invariants.
void validate(const NlsProblem& p);

struct Snapshot {
  double t;
  ComplexField field;
};

struct SnapshotDiagnostics {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double sup_norm = 0.0;
  double boundary_fraction = 0.0;
  double high_band_fraction = 0.0;
};

struct Trajectory {
  NlsProblem problem;
  std::vector<Snapshot> snapshots;
  std::vector<SnapshotDiagnostics> diagnostics;
  std::vector<std::string> warnings;
  bool exploratory = false;

  double final_time() const { return snapshots.back().t; }
};

/// Strang splitting: exact kinetic multiplier and exact phase substep
/// exp(-i (V + |u|^alpha) h). Throws kInstability if the sup norm exceeds
/// 1e6 times its initial value (or turns non-finite).
Trajectory solve(const NlsProblem& p);

/// Pointwise f_j * exp(-i (V_j + |f_j|^alpha) dt).
ComplexField phase_substep(const ComplexField& f, std::span<const double> v, double alpha,
                           double dt);

/// Energy conserved by the flow that `problem` describes (quadratic energy
/// when the problem is linear).
double problem_energy(const NlsProblem& problem, const ComplexField& f);

SnapshotDiagnostics snapshot_diagnostics(const NlsProblem& problem, double t, const ComplexField& f);

}  // namespace snls
