#include "snls/propagators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "snls/error.hpp"

namespace snls {

namespace {

void require_finite_time(double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::kParameter, "evolution time must be finite");
}

std::vector<Complex> kinetic_symbol(const Grid& grid, double t) {
  const auto xi = grid.fft_wavenumbers();
  std::vector<Complex> s(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) s[k] = std::polar(1.0, -t * xi[k] * xi[k]);
  return s;
}

}  // namespace

ComplexField evolve_free(const ComplexField& f, double t) {
  require_finite_time(t);
  if (t == 0.0) {
    f.validate();
    return f;
  }
  return apply_multiplier(f, kinetic_symbol(f.grid(), t));
}

ComplexField evolve_shifted(const ComplexField& f, double t) {
  auto out = evolve_free(f, t);
  out *= std::polar(1.0, -t);
  return out;
}

double decay_kernel_bound_free() { return 1.0 / std::sqrt(4.0 * std::numbers::pi); }

std::vector<double> substep_schedule(double span, double dt) {
  std::vector<double> steps;
  if (span == 0.0) return steps;
  const double sign = span < 0.0 ? -1.0 : 1.0;
  const double mag = std::abs(span);
  const double ratio = mag / dt;
  const double nearest = std::nearbyint(ratio);
  std::size_t full = 0;
  double rest = 0.0;
  if (nearest >= 1.0 && std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio)) {
    full = static_cast<std::size_t>(nearest);
  } else {
    full = static_cast<std::size_t>(std::floor(ratio));
    rest = mag - static_cast<double>(full) * dt;
  }
  steps.assign(full, sign * dt);
  if (rest > 0.0) steps.push_back(sign * rest);
  return steps;
}

// ---- eigendecomposition cache ------------------------------------------------

struct EigenDecomposition {
  Eigen::MatrixXd vectors;  // columns are orthonormal eigenvectors
  Eigen::VectorXd values;
  std::vector<double> values_std;
};

namespace {

using CacheKey = std::tuple<std::size_t, double, int, std::vector<double>>;

std::mutex& eig_cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CacheKey, std::weak_ptr<const EigenDecomposition>>& eig_cache() {
  static std::map<CacheKey, std::weak_ptr<const EigenDecomposition>> c;
  return c;
}

Eigen::MatrixXd second_derivative_matrix(const Grid& grid, EigenStencil stencil) {
  const auto n = static_cast<Eigen::Index>(grid.n_points());
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  if (stencil == EigenStencil::kCentralDifference) {
    const double inv_h2 = 1.0 / (grid.dx() * grid.dx());
    for (Eigen::Index j = 0; j < n; ++j) {
      d2(j, j) = -2.0 * inv_h2;
      d2(j, (j + 1) % n) = inv_h2;
      d2(j, (j + n - 1) % n) = inv_h2;
    }
    return d2;
  }
  // Periodic spectral collocation (N even), on [0, 2pi) with h = 2pi/N:
  //   diag    -pi^2/(3h^2) - 1/6
  //   offdiag -(-1)^m / (2 sin^2(m h / 2)),  m = j - k
  // then rescaled by (2pi/L)^2.
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double scale = std::pow(2.0 * std::numbers::pi / grid.length(), 2);
  const double diag = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
  std::vector<double> column(static_cast<std::size_t>(n));
  column[0] = diag;
  for (Eigen::Index m = 1; m < n; ++m) {
    const double s = std::sin(0.5 * static_cast<double>(m) * h);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    column[static_cast<std::size_t>(m)] = -sign / (2.0 * s * s);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto m = static_cast<std::size_t>((j - k + n) % n);
      d2(j, k) = scale * column[m];
    }
  }
  return d2;
}

std::shared_ptr<const EigenDecomposition> decompose(const Grid& grid, const std::vector<double>& v,
                                                    EigenStencil stencil) {
  CacheKey key{grid.n_points(), grid.length(), static_cast<int>(stencil), v};
  {
    std::lock_guard lock(eig_cache_mutex());
    auto it = eig_cache().find(key);
    if (it != eig_cache().end()) {
      if (auto sp = it->second.lock()) return sp;
    }
  }
  Eigen::MatrixXd h = -second_derivative_matrix(grid, stencil);
  for (Eigen::Index j = 0; j < h.rows(); ++j) h(j, j) += v[static_cast<std::size_t>(j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInstability, "eigendecomposition did not converge");
  }
  auto out = std::make_shared<EigenDecomposition>();
  out->vectors = solver.eigenvectors();
  out->values = solver.eigenvalues();
  out->values_std.assign(out->values.data(), out->values.data() + out->values.size());
  std::lock_guard lock(eig_cache_mutex());
  eig_cache()[std::move(key)] = out;
  return out;
}

}  // namespace

// ---- PerturbedPropagator -----------------------------------------------------

PerturbedPropagator PerturbedPropagator::strang(const Grid& grid, std::vector<double> potential,
                                                double dt) {
  if (potential.size() != grid.n_points()) {
    throw Error(ErrorCode::kDimension, "potential samples do not match grid");
  }
  if (!(dt > 0.0) || dt > 0.1) throw Error(ErrorCode::kParameter, "splitting dt must lie in (0, 0.1]");
  return PerturbedPropagator(grid, std::make_shared<const std::vector<double>>(std::move(potential)),
                             PropagatorMethod::kStrangSplitting, dt,
                             EigenStencil::kFourierCollocation, nullptr);
}

PerturbedPropagator PerturbedPropagator::eigendecomposition(const Grid& grid,
                                                            std::vector<double> potential,
                                                            EigenStencil stencil) {
  if (potential.size() != grid.n_points()) {
    throw Error(ErrorCode::kDimension, "potential samples do not match grid");
  }
  if (grid.n_points() > kMaxEigenPoints) {
    throw Error(ErrorCode::kCapability, "eigendecomposition limited to n_points <= 1024");
  }
  auto eig = decompose(grid, potential, stencil);
  return PerturbedPropagator(grid, std::make_shared<const std::vector<double>>(std::move(potential)),
                             PropagatorMethod::kEigendecomposition, 0.0, stencil, std::move(eig));
}

std::span<const double> PerturbedPropagator::eigenvalues() const {
  if (!eig_) throw Error(ErrorCode::kCapability, "propagator has no eigendecomposition");
  return eig_->values_std;
}

ComplexField PerturbedPropagator::evolve(const ComplexField& f, double t) const {
  require_same_grid(grid_, f.grid(), "evolve_perturbed");
  require_finite_time(t);
  f.validate();
  if (t == 0.0) return f;
  return method_ == PropagatorMethod::kStrangSplitting ? evolve_strang(f, t) : evolve_eigen(f, t);
}

ComplexField PerturbedPropagator::evolve_strang(const ComplexField& f, double t) const {
  const auto steps = substep_schedule(t, dt_);
  const std::size_t n = grid_.n_points();
  const auto& v = *potential_;
  const auto xi = grid_.fft_wavenumbers();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Phase and kinetic factors for each distinct substep length (at most two).
  struct Factors {
    double h;
    std::vector<Complex> kinetic;
  };
  std::vector<Factors> factors;
  auto kinetic_for = [&](double h) -> const std::vector<Complex>& {
    for (const auto& fc : factors) {
      if (fc.h == h) return fc.kinetic;
    }
    Factors fc{h, std::vector<Complex>(n)};
    for (std::size_t k = 0; k < n; ++k) fc.kinetic[k] = std::polar(inv_n, -h * xi[k] * xi[k]);
    factors.push_back(std::move(fc));
    return factors.back().kinetic;
  };
  std::map<double, std::vector<Complex>> phases;
  auto phase_for = [&](double h) -> const std::vector<Complex>& {
    auto& p = phases[h];
    if (p.empty()) {
      p.resize(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = std::polar(1.0, -v[j] * h);
    }
    return p;
  };

  auto& ws = thread_workspace(n);
  auto buf = ws.data();
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  // P(h1/2) K(h1) P((h1+h2)/2) K(h2) ... K(hm) P(hm/2): consecutive potential
  // half-steps are fused.
  double pending = 0.5 * steps.front();
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const auto& ph = phase_for(pending);
    for (std::size_t j = 0; j < n; ++j) buf[j] *= ph[j];
    ws.forward();
    const auto& kin = kinetic_for(steps[s]);
    for (std::size_t k = 0; k < n; ++k) buf[k] *= kin[k];
    ws.backward();
    pending = 0.5 * steps[s] + (s + 1 < steps.size() ? 0.5 * steps[s + 1] : 0.0);
  }
  const auto& ph = phase_for(pending);
  for (std::size_t j = 0; j < n; ++j) buf[j] *= ph[j];
  return ComplexField(grid_, std::vector<Complex>(buf.begin(), buf.end()));
}

ComplexField PerturbedPropagator::evolve_eigen(const ComplexField& f, double t) const {
  const auto n = static_cast<Eigen::Index>(grid_.n_points());
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    re(j) = f[static_cast<std::size_t>(j)].real();
    im(j) = f[static_cast<std::size_t>(j)].imag();
  }
  const Eigen::MatrixXd& q = eig_->vectors;
  Eigen::VectorXd cr = q.transpose() * re;
  Eigen::VectorXd ci = q.transpose() * im;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex c = Complex(cr(k), ci(k)) * std::polar(1.0, -eig_->values(k) * t);
    cr(k) = c.real();
    ci(k) = c.imag();
  }
  re.noalias() = q * cr;
  im.noalias() = q * ci;
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = Complex(re(j), im(j));
  return ComplexField(grid_, std::move(out));
}

}  // namespace snls
