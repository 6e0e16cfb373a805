#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snls/diagnostics.hpp"
#include "snls/nls_solver.hpp"
#include "snls/propagators.hpp"

namespace snls {

// ---- nonlinear wave operator --------------------------------------------------

struct WaveStateOptions {
  /// Linearly interpolate between the neighbouring snapshots when T is not
  /// a snapshot time; otherwise a missing snapshot is an error.
  bool allow_interpolation = false;
};

/// psi_+(T) = e^{-iT(d_x^2 - V)} u(T). `warning` (if given) receives a note
/// when interpolation was used.
ComplexField nonlinear_wave_state(const Trajectory& traj, const PerturbedPropagator& p, double T,
                                  const WaveStateOptions& options = {},
                                  std::string* warning = nullptr);

/// Snapshot at time T (within 1e-9), if present.
const Snapshot* find_snapshot(const Trajectory& traj, double T);

// ---- double channels ------------------------------------------------------------

/// Free channel eta and mass-shifted channel gamma such that
/// e^{it(D2-V)} psi ~ e^{itD2} eta + e^{it(D2-1)} gamma for large t.
struct ChannelPair {
  ComplexField eta;
  ComplexField gamma;
  int extraction_n = 0;
  /// ||eta(n) - eta(n-1)||_{H1} + ||gamma(n) - gamma(n-1)||_{H1}; zero and
  /// has_cauchy_gap == false for n == 1.
  double cauchy_gap = 0.0;
  bool has_cauchy_gap = false;
};

/// Channel extraction for n = 1..n_max in one pass over time. With
/// W(t) = e^{-itD2} e^{it(D2-V)}, A_n = W(2 pi n) psi and
/// B_n = W((2n+1) pi) psi give eta = (A_n + B_n)/2, gamma = (A_n - B_n)/2.
struct ChannelStudy {
  std::vector<ChannelPair> pairs;
  /// ||e^{it(D2-V)} psi - e^{itD2} eta_n - e^{it(D2-1)} gamma_n||_{L2} at
  /// t = 2 pi n + pi/2, where the two channel phases are in quadrature (at
  /// t = 2 pi n and (2n+1) pi the defect vanishes by construction).
  std::vector<double> reconstruction_defect;
  std::vector<double> reconstruction_times;
  /// | ||eta||^2 + ||gamma||^2 - ||psi||^2 | / ||psi||^2.
  std::vector<double> mass_partition_defect;
  double psi_mass = 0.0;
};

ChannelStudy linear_channel_study(const PerturbedPropagator& p, const ComplexField& psi, int n_max);

/// Throws kParameter for n < 1.
ChannelPair extract_linear_channels(const PerturbedPropagator& p, const ComplexField& psi, int n);

/// ||state - e^{itD2} eta - e^{it(D2-1)} gamma||_{L2}.
double channel_reconstruction_defect(const ComplexField& state_at_t, const ChannelPair& pair, double t);
/// Same in H1.
double channel_reconstruction_defect_h1(const ComplexField& state_at_t, const ChannelPair& pair,
                                        double t);

/// extract_linear_channels applied to nonlinear_wave_state(traj, p, T).
ChannelPair extract_nonlinear_channels(const Trajectory& traj, const PerturbedPropagator& p, double T,
                                       int n, const WaveStateOptions& options = {});

// ---- translation limits -------------------------------------------------------

struct TranslationOptions {
  double t_begin = 0.0;
  double t_end = 5.0;
  double sample_dt = 0.05;
  /// Exponent pair (a, b) of the L^a_t L^b_x norm; defaults to (p, r) of
  /// exponents(alpha).
  double alpha = 5.0;
  std::optional<StrichartzPair> pair;
};

struct TranslationGap {
  double value = 0.0;
  double a = 0.0;
  double b = 0.0;
  /// "free" (x_shift <= 0) or "shifted" (x_shift > 0).
  std::string reference_flow;
};

/// Space-time norm of (reference flow - perturbed flow) applied to
/// tau_{x_shift} psi. Throws kDomain for |x_shift| >= L/4.
TranslationGap translation_flow_gap(const PerturbedPropagator& p, const ComplexField& psi,
                                    double x_shift, const TranslationOptions& options = {});

// ---- profile decomposition ----------------------------------------------------

struct ProfileOptions {
  /// Time search window [-time_window, time_window] sampled at time_spacing.
  double time_window = 20.0;
  double time_spacing = 0.1;
  /// Recentred samples count as agreeing when within consensus_tol times
  /// the largest sample modulus of the family.
  double consensus_tol = 1e-3;
  /// Stop when ||psi_j||_2 < stop_ratio * max_n ||v_n||_2.
  double stop_ratio = 1e-3;
  /// Nonlinearity power used for the energy bookkeeping.
  double alpha = 5.0;
  int threads = 1;
};

struct Profile {
  ComplexField psi;
  /// Per-member parameters: v_n contains e^{i t_shift (D2-V)} tau_{x_shift} psi.
  std::vector<double> t_shifts;
  std::vector<double> x_shifts;
  /// Frequency cutoff R of the localization multiplier used to find x_shifts.
  double filter_radius = 0.0;
  /// ||e^{it_n(D2-V)} v_n||_q > 1/2 sup over the sampled window, for every n.
  bool half_sup_condition = true;
};

struct PythagoreanDefects {
  /// (||v_n||^2 - sum_j ||psi_j||^2 - ||R_n||^2) / ||v_n||^2, the entry of
  /// largest magnitude over n (signed).
  double mass = 0.0;
  double h1v = 0.0;
  double lq = 0.0;
  double energy = 0.0;
};

struct ProfileSet {
  std::vector<Profile> profiles;
  std::vector<ComplexField> remainders;
  /// L2 norm of the first extracted profile; 0 when nothing concentrates.
  double concentration_level = 0.0;
  /// Localization exponent beta with R = lambda^{-beta}.
  double localization_exponent = 0.0;
  PythagoreanDefects pythagorean_defects;
};

/// Greedy extraction of time/space-translated profiles from a family
/// {v_n}. Weak limits are replaced by a majority consensus over the
/// recentred family: at each grid point the samples within consensus_tol
/// of the componentwise median are averaged when they form a strict
/// majority; otherwise the profile is zero there.
ProfileSet greedy_profile_decomposition(std::span<const ComplexField> fields,
                                        const PerturbedPropagator& p, int j_max, double q_exponent,
                                        const ProfileOptions& options = {});

/// Seeded synthetic family for the decomposition.
///  - "one": v_n = e^{i t_n (D2-V)} tau_{x_n} phi with phi = exp(-x^2).
///  - "two": the same plus 0.5 exp(-(x/1.2)^2) placed d_n to the right of
///    the first bump at the same time, with pairwise distinct d_n.
///  - "noise": unit-mass complex white noise, independent per member.
/// t_n are multiples of `time_spacing` within half the search window and
/// x_n are grid points, so exact recovery is possible.
struct ProfileFixture {
  std::vector<ComplexField> fields;
  /// Profiles in order of decreasing amplitude (empty for "noise").
  std::vector<ComplexField> truth;
};

/// Throws kParameter for an unknown kind or fewer than 3 members.
ProfileFixture make_profile_fixture(std::string_view kind, const PerturbedPropagator& p, int members,
                                    std::uint64_t seed, const ProfileOptions& options = {});

/// Smooth radial cutoff: 1 for |s| <= 1, 0 for |s| >= 2.
double localization_cutoff(double s);

}  // namespace snls
