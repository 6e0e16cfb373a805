#include <algorithm>
#include <cmath>

#include "snls/diagnostics.hpp"
#include "snls/error.hpp"
#include "snls/potentials.hpp"

namespace snls {

namespace {

struct SliceData {
  double t;
  const ComplexField* u;
  ComplexField ux;
  std::vector<double> q;  // -(2x/lambda) Im(conj(u) u_x) - t |u|^2 / lambda
};

}  // namespace

std::vector<double> repulsive_density(const ComplexField& u, std::span<const double> gradient,
                                      double t) {
  const Grid& g = u.grid();
  std::vector<double> out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = g.x(j);
    const double lambda = std::sqrt(t * t + x * x);
    out[j] = -x * gradient[j] * std::norm(u[j]) / lambda;
  }
  return out;
}

MorawetzReport morawetz_report(const Trajectory& traj, const MorawetzOptions& options) {
  const NlsProblem& prob = traj.problem;
  const Grid& grid = prob.grid;
  const std::size_t n = grid.n_points();
  const auto& v = prob.potential;
  const std::vector<double> dv = prob.potential_gradient.empty()
                                     ? finite_difference_gradient(grid, v)
                                     : prob.potential_gradient;
  const bool nonlinear = !prob.linear;
  const double alpha = prob.alpha;

  std::vector<const Snapshot*> snaps;
  for (const auto& s : traj.snapshots) {
    if (s.t >= options.t_start - 1e-12) snaps.push_back(&s);
  }
  if (snaps.size() < 3) {
    throw Error(ErrorCode::kInsufficientData, "morawetz_report needs at least 3 snapshots at t >= t_start");
  }
  const double ds = snaps[1]->t - snaps[0]->t;
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    if (std::abs((snaps[k]->t - snaps[k - 1]->t) - ds) > 1e-9 * std::max(1.0, ds)) {
      throw Error(ErrorCode::kParameter, "morawetz_report requires uniformly spaced snapshots");
    }
  }

  std::vector<double> xs = grid.positions();
  std::vector<SliceData> slices;
  slices.reserve(snaps.size());
  for (const auto* s : snaps) {
    SliceData d{s->t, &s->field, spectral_derivative(s->field), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
      const double x = xs[j];
      const double lambda = std::sqrt(s->t * s->t + x * x);
      const Complex u = s->field[j];
      d.q[j] = -(2.0 * x / lambda) * std::imag(std::conj(u) * d.ux[j]) - s->t * std::norm(u) / lambda;
    }
    slices.push_back(std::move(d));
  }

  MorawetzReport rep;
  rep.repulsive_term_min_pointwise = std::numeric_limits<double>::infinity();
  for (const auto& sl : slices) {
    const double t = sl.t;
    double dens = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double lambda = std::sqrt(t * t + xs[j] * xs[j]);
      dens += t * t * std::pow(std::abs((*sl.u)[j]), alpha + 2.0) / (lambda * lambda * lambda);
    }
    rep.times.push_back(t);
    rep.density_series.push_back(dens * grid.dx());
    const auto rd = repulsive_density(*sl.u, dv, t);
    rep.repulsive_term_series.push_back(integrate(grid, rd));
    rep.repulsive_term_min_pointwise =
        std::min(rep.repulsive_term_min_pointwise, *std::min_element(rd.begin(), rd.end()));
  }
  for (std::size_t k = 1; k < rep.times.size(); ++k) {
    rep.integral_value += 0.5 * (rep.times[k] - rep.times[k - 1]) *
                          (rep.density_series[k] + rep.density_series[k - 1]);
  }

  std::vector<double> flux(n), t_time(n), t_rest(n);
  std::vector<double> term_g(n), term_g2(n), term_sq(n), term_rep(n);
  for (std::size_t k = 1; k + 1 < slices.size(); ++k) {
    const SliceData& sl = slices[k];
    const double t = sl.t;
    const ComplexField& u = *sl.u;
    const ComplexField& ux = sl.ux;

    std::vector<Complex> ut(n);
    if (options.variant == TimeDerivative::kSnapshotDifference) {
      const ComplexField& up = *slices[k + 1].u;
      const ComplexField& um = *slices[k - 1].u;
      for (std::size_t j = 0; j < n; ++j) ut[j] = (up[j] - um[j]) / (2.0 * ds);
    } else {
      const ComplexField uxx = spectral_second_derivative(u);
      for (std::size_t j = 0; j < n; ++j) {
        const double nl = nonlinear ? std::pow(std::abs(u[j]), alpha) : 0.0;
        ut[j] = Complex(0.0, 1.0) * (uxx[j] - (v[j] + nl) * u[j]);
      }
    }

    for (std::size_t j = 0; j < n; ++j) {
      const double x = xs[j];
      const double lambda = std::sqrt(t * t + x * x);
      const double l3 = lambda * lambda * lambda;
      const double l5 = l3 * lambda * lambda;
      const double l7 = l5 * lambda * lambda;
      const Complex uj = u[j];
      const Complex uxj = ux[j];
      const double m2 = std::norm(uj);
      const double pow_a2 = nonlinear ? std::pow(m2, 0.5 * (alpha + 2.0)) : 0.0;

      const double a = -2.0 * x / lambda;
      const Complex g(-t * t / l3, -t / lambda);
      const Complex m = a * uxj + g * uj;
      const double re_gx = 3.0 * t * t * x / l5;
      const double re_gxx = 3.0 * t * t / l5 - 15.0 * t * t * x * x / l7;

      const double l_v = 0.5 * (-std::real(Complex(0.0, 1.0) * std::conj(uj) * ut[j]) + std::norm(uxj) +
                                2.0 * pow_a2 / (alpha + 2.0) + v[j] * m2);
      flux[j] = std::real(uxj * std::conj(m)) - a * l_v - re_gx * m2 / 2.0;

      t_time[j] = 0.5 * (slices[k + 1].q[j] - slices[k - 1].q[j]) / (2.0 * ds);
      term_g[j] = t * t * (alpha / (alpha + 2.0)) * pow_a2 / l3;
      term_g2[j] = 0.5 * m2 * re_gxx;
      term_sq[j] = std::norm(Complex(0.0, 2.0 * t) * uxj + x * uj) / (2.0 * l3);
      term_rep[j] = -x * dv[j] * m2 / lambda;
    }
    const auto dflux = spectral_derivative(grid, flux);

    double resid = 0.0;
    double norms[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t j = 0; j < n; ++j) {
      const double s = t_time[j] + dflux[j] + term_g[j] + term_g2[j] + term_sq[j] + term_rep[j];
      resid += std::abs(s);
      norms[0] += std::abs(t_time[j]);
      norms[1] += std::abs(dflux[j]);
      norms[2] += std::abs(term_g[j]);
      norms[3] += std::abs(term_g2[j]);
      norms[4] += std::abs(term_sq[j]);
      norms[5] += std::abs(term_rep[j]);
    }
    resid *= grid.dx();
    const double scale = *std::max_element(std::begin(norms), std::end(norms)) * grid.dx();
    rep.residual_times.push_back(t);
    rep.identity_residual_series.push_back(resid);
    rep.relative_residual_series.push_back(scale > 0.0 ? resid / scale : 0.0);
  }
  return rep;
}

}  // namespace snls
