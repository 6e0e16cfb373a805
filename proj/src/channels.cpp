#include <algorithm>
#include <cmath>
#include <numbers>

#include "snls/error.hpp"
#include "snls/scattering.hpp"

namespace snls {

const Snapshot* find_snapshot(const Trajectory& traj, double T) {
  for (const auto& s : traj.snapshots) {
    if (std::abs(s.t - T) <= 1e-9 * std::max(1.0, std::abs(T))) return &s;
  }
  return nullptr;
}

ComplexField nonlinear_wave_state(const Trajectory& traj, const PerturbedPropagator& p, double T,
                                  const WaveStateOptions& options, std::string* warning) {
  if (traj.snapshots.empty()) throw Error(ErrorCode::kInsufficientData, "empty trajectory");
  if (T > traj.final_time() + 1e-9) {
    throw Error(ErrorCode::kParameter, "T exceeds the trajectory's final time");
  }
  if (const Snapshot* s = find_snapshot(traj, T)) return p.evolve(s->field, -T);
  if (!options.allow_interpolation) {
    throw Error(ErrorCode::kInsufficientData, "no snapshot at T=" + std::to_string(T));
  }
  const auto& snaps = traj.snapshots;
  auto hi = std::find_if(snaps.begin(), snaps.end(), [T](const Snapshot& s) { return s.t > T; });
  if (hi == snaps.begin() || hi == snaps.end()) {
    throw Error(ErrorCode::kInsufficientData, "T outside the recorded range");
  }
  const Snapshot& b = *hi;
  const Snapshot& a = *(hi - 1);
  const double w = (T - a.t) / (b.t - a.t);
  ComplexField u = (1.0 - w) * a.field + Complex(w) * b.field;
  if (warning) *warning = "wave state at T=" + std::to_string(T) + " uses interpolated snapshot";
  return p.evolve(u, -T);
}

ChannelStudy linear_channel_study(const PerturbedPropagator& p, const ComplexField& psi, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::kParameter, "channel extraction needs n >= 1");
  require_same_grid(p.grid(), psi.grid(), "extract_linear_channels");
  constexpr double pi = std::numbers::pi;

  ChannelStudy study;
  study.psi_mass = l2_norm_sq(psi);
  ComplexField u = psi;
  double t_now = 0.0;
  auto advance = [&](double t) {
    u = p.evolve(u, t - t_now);
    t_now = t;
  };
  for (int n = 1; n <= n_max; ++n) {
    const double ta = 2.0 * pi * n;
    const double tq = ta + 0.5 * pi;
    const double tb = (2.0 * n + 1.0) * pi;
    advance(ta);
    const ComplexField a = evolve_free(u, -ta);
    advance(tq);
    const ComplexField state_q = u;
    advance(tb);
    const ComplexField b = evolve_free(u, -tb);

    ChannelPair pair{0.5 * (a + b), 0.5 * (a - b), n, 0.0, false};
    if (!study.pairs.empty()) {
      const auto& prev = study.pairs.back();
      pair.cauchy_gap = std::sqrt(h1_norm_sq(pair.eta - prev.eta)) +
                        std::sqrt(h1_norm_sq(pair.gamma - prev.gamma));
      pair.has_cauchy_gap = true;
    }
    const double split = l2_norm_sq(pair.eta) + l2_norm_sq(pair.gamma);
    study.mass_partition_defect.push_back(
        study.psi_mass > 0.0 ? std::abs(split - study.psi_mass) / study.psi_mass : 0.0);
    study.reconstruction_times.push_back(tq);
    study.reconstruction_defect.push_back(channel_reconstruction_defect(state_q, pair, tq));
    study.pairs.push_back(std::move(pair));
  }
  return study;
}

ChannelPair extract_linear_channels(const PerturbedPropagator& p, const ComplexField& psi, int n) {
  auto study = linear_channel_study(p, psi, n);
  return std::move(study.pairs.back());
}

namespace {
ComplexField reconstruction_error(const ComplexField& state, const ChannelPair& pair, double t) {
  require_same_grid(state.grid(), pair.eta.grid(), "channel reconstruction");
  return state - evolve_free(pair.eta, t) - evolve_shifted(pair.gamma, t);
}
}  // namespace

double channel_reconstruction_defect(const ComplexField& state_at_t, const ChannelPair& pair, double t) {
  return std::sqrt(l2_norm_sq(reconstruction_error(state_at_t, pair, t)));
}

double channel_reconstruction_defect_h1(const ComplexField& state_at_t, const ChannelPair& pair,
                                        double t) {
  return std::sqrt(h1_norm_sq(reconstruction_error(state_at_t, pair, t)));
}

ChannelPair extract_nonlinear_channels(const Trajectory& traj, const PerturbedPropagator& p, double T,
                                       int n, const WaveStateOptions& options) {
  return extract_linear_channels(p, nonlinear_wave_state(traj, p, T, options), n);
}

}  // namespace snls
