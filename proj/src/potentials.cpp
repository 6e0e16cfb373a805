#include "snls/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "snls/error.hpp"

namespace snls {

std::string_view to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::kGaussianMatchedStep: return "gaussian_matched_step";
    case PotentialFamily::kLogisticStep: return "logistic_step";
    case PotentialFamily::kFlat: return "flat";
    case PotentialFamily::kCustomSamples: return "custom_samples";
  }
  return "unknown";
}

PotentialFamily parse_potential_family(std::string_view name) {
  for (auto f : {PotentialFamily::kGaussianMatchedStep, PotentialFamily::kLogisticStep,
                 PotentialFamily::kFlat, PotentialFamily::kCustomSamples}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorCode::kParameter, "unknown potential family '" + std::string(name) + "'");
}

namespace {

void validate_spec(const PotentialSpec& s, const Grid& grid) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(s.a_minus) || !finite(s.a_plus)) {
    throw Error(ErrorCode::kParameter, "potential limits must be finite");
  }
  switch (s.family) {
    case PotentialFamily::kGaussianMatchedStep:
      if (!(s.width > 0.0) || !finite(s.width)) {
        throw Error(ErrorCode::kParameter, "gaussian_matched_step requires width > 0");
      }
      if (!finite(s.height) || s.height < s.a_plus || s.height < s.a_minus) {
        throw Error(ErrorCode::kParameter,
                    "gaussian_matched_step requires height >= a_plus and height >= a_minus "
                    "(otherwise the potential is not repulsive)");
      }
      break;
    case PotentialFamily::kLogisticStep:
      if (!(s.width > 0.0) || !finite(s.width)) {
        throw Error(ErrorCode::kParameter, "logistic_step requires width > 0");
      }
      break;
    case PotentialFamily::kFlat:
      if (s.a_minus != s.a_plus) {
        throw Error(ErrorCode::kParameter, "flat potential requires a_minus == a_plus");
      }
      break;
    case PotentialFamily::kCustomSamples:
      if (s.samples.size() != grid.n_points()) {
        throw Error(ErrorCode::kDimension, "custom potential samples do not match the grid");
      }
      if (!std::all_of(s.samples.begin(), s.samples.end(), finite)) {
        throw Error(ErrorCode::kParameter, "custom potential samples must be finite");
      }
      break;
  }
}

}  // namespace

std::vector<double> build_potential(const PotentialSpec& spec, const Grid& grid) {
  validate_spec(spec, grid);
  const std::size_t n = grid.n_points();
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j);
    switch (spec.family) {
      case PotentialFamily::kGaussianMatchedStep: {
        const double bump = std::exp(-(x * x) / (spec.width * spec.width));
        const double base = x <= 0.0 ? spec.a_minus : spec.a_plus;
        v[j] = base + (spec.height - base) * bump;
        break;
      }
      case PotentialFamily::kLogisticStep:
        v[j] = spec.a_minus + (spec.a_plus - spec.a_minus) / (1.0 + std::exp(-x / spec.width));
        break;
      case PotentialFamily::kFlat:
        v[j] = spec.a_plus;
        break;
      case PotentialFamily::kCustomSamples:
        v[j] = spec.samples[j];
        break;
    }
  }
  return v;
}

std::vector<double> build_potential_gradient(const PotentialSpec& spec, const Grid& grid) {
  validate_spec(spec, grid);
  const std::size_t n = grid.n_points();
  std::vector<double> dv(n, 0.0);
  switch (spec.family) {
    case PotentialFamily::kGaussianMatchedStep:
      for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.x(j);
        const double w2 = spec.width * spec.width;
        const double base = x <= 0.0 ? spec.a_minus : spec.a_plus;
        dv[j] = -2.0 * x / w2 * (spec.height - base) * std::exp(-(x * x) / w2);
      }
      break;
    case PotentialFamily::kLogisticStep:
      for (std::size_t j = 0; j < n; ++j) {
        const double e = std::exp(-std::abs(grid.x(j)) / spec.width);
        // s'(x) = e^{-|x|/w} / (w (1 + e^{-|x|/w})^2), even in x.
        dv[j] = (spec.a_plus - spec.a_minus) * e / (spec.width * (1.0 + e) * (1.0 + e));
      }
      break;
    case PotentialFamily::kFlat:
      break;
    case PotentialFamily::kCustomSamples:
      dv = finite_difference_gradient(grid, spec.samples);
      break;
  }
  return dv;
}

std::vector<double> finite_difference_gradient(const Grid& grid, std::span<const double> v) {
  const std::size_t n = v.size();
  const double h = grid.dx();
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    d[j] = (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) / (12.0 * h);
  }
  d[1] = (v[2] - v[0]) / (2.0 * h);
  d[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * h);
  d[0] = (v[1] - v[0]) / h;
  d[n - 1] = (v[n - 1] - v[n - 2]) / h;
  return d;
}

PotentialSpec load_potential_csv(const std::string& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open potential csv '" + path + "'");
  PotentialSpec spec;
  spec.family = PotentialFamily::kCustomSamples;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x = 0.0;
    double v = 0.0;
    if (!(ls >> x >> v)) {
      // Header line.
      if (row == 0 && spec.samples.empty()) continue;
      throw Error(ErrorCode::kConfig, "malformed row in potential csv '" + path + "'");
    }
    if (row >= grid.n_points() || std::abs(x - grid.x(row)) > 1e-9 * grid.dx() + 1e-12) {
      throw Error(ErrorCode::kConfig, "potential csv x column does not match the grid at row " +
                                          std::to_string(row));
    }
    spec.samples.push_back(v);
    ++row;
  }
  if (spec.samples.size() != grid.n_points()) {
    throw Error(ErrorCode::kConfig, "potential csv has " + std::to_string(spec.samples.size()) +
                                        " rows, grid needs " + std::to_string(grid.n_points()));
  }
  return spec;
}

namespace {

// Least-squares slope of log|r| against log|x|; +inf if r underflows.
double fit_decay_exponent(const std::vector<double>& xs, const std::vector<double>& rs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (rs[i] <= 0.0 || xs[i] == 0.0) continue;
    const double lx = std::log(std::abs(xs[i]));
    const double ly = std::log(rs[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::infinity();
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return -(static_cast<double>(m) * sxy - sx * sy) / denom;
}

}  // namespace

HypothesisReport check_hypotheses(std::span<const double> v, const Grid& grid, double epsilon,
                                  const HypothesisTargets& targets) {
  if (v.size() != grid.n_points()) throw Error(ErrorCode::kDimension, "potential/grid size mismatch");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kParameter, "epsilon must be > 0");
  const std::size_t n = v.size();
  constexpr double kLimitTol = 1e-6;
  HypothesisReport r;

  r.bounded = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  r.nonnegative = r.bounded && std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
  if (!r.bounded) return r;

  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));

  // Centered difference, one-sided at the ends.
  const double h = grid.dx();
  std::vector<double> dv(n);
  for (std::size_t j = 1; j + 1 < n; ++j) dv[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
  dv[0] = (v[1] - v[0]) / h;
  dv[n - 1] = (v[n - 1] - v[n - 2]) / h;

  const double rep_tol = 1e-10 * std::max(vmax, 1.0);
  r.repulsive = true;
  r.worst_violation = {grid.x(0), -std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < n; ++j) {
    const double s = grid.x(j) * dv[j];
    if (s > r.worst_violation.value) r.worst_violation = {grid.x(j), s};
    if (s > rep_tol) r.repulsive = false;
  }

  const std::size_t edge = std::max<std::size_t>(1, n / 20);
  r.left_limit_ok = true;
  r.right_limit_ok = true;
  r.gradient_vanishes = true;
  for (std::size_t j = 0; j < edge; ++j) {
    if (std::abs(v[j] - targets.a_minus) > kLimitTol) r.left_limit_ok = false;
    if (std::abs(v[n - 1 - j] - targets.a_plus) > kLimitTol) r.right_limit_ok = false;
    if (std::abs(dv[j]) > kLimitTol || std::abs(dv[n - 1 - j]) > kLimitTol) r.gradient_vanishes = false;
  }

  // Weighted remainder |x|^{1+eps} |V - a| on the outer quarter of each
  // half-domain, walking outward: must be non-increasing and end near 0.
  const std::size_t half = n / 2;
  const std::size_t quarter = std::max<std::size_t>(2, half / 4);
  auto check_side = [&](bool right, double& exponent) {
    std::vector<double> xs, rs, ws;
    for (std::size_t i = 0; i < quarter; ++i) {
      const std::size_t j = right ? n - quarter + i : quarter - 1 - i;
      const double x = grid.x(j);
      const double rem = std::abs(v[j] - (right ? targets.a_plus : targets.a_minus));
      xs.push_back(x);
      rs.push_back(rem);
      ws.push_back(std::pow(std::abs(x), 1.0 + epsilon) * rem);
    }
    exponent = fit_decay_exponent(xs, rs);
    bool ok = ws.back() <= kLimitTol;
    for (std::size_t i = 1; i < ws.size(); ++i) {
      if (ws[i] > ws[i - 1] * (1.0 + 1e-12) + 1e-300) ok = false;
    }
    return ok;
  };
  double left_exp = 0.0;
  double right_exp = 0.0;
  const bool left_ok = check_side(false, left_exp);
  const bool right_ok = check_side(true, right_exp);
  r.decay_rate_ok = left_ok && right_ok;
  r.decay_exponent = std::min(left_exp, right_exp);
  return r;
}

}  // namespace snls
