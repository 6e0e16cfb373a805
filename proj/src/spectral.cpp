#include "snls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "snls/error.hpp"

namespace snls {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidField: return "invalid_field";
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kCapability: return "capability";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kInstability: return "instability";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

// ---- Grid -------------------------------------------------------------------

Grid::Grid(std::size_t n_points, double length) : n_(n_points), length_(length) {
  if (n_points < 16 || !std::has_single_bit(n_points)) {
    throw Error(ErrorCode::kParameter,
                "grid n_points must be a power of two >= 16, got " + std::to_string(n_points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::kParameter, "grid length must be finite and > 0");
  }
  auto xi = std::make_shared<std::vector<double>>(n_);
  const double k0 = 2.0 * std::numbers::pi / length_;
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t k = 0; k < n_; ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    (*xi)[k] = k0 * static_cast<double>(kk < half ? kk : kk - static_cast<std::ptrdiff_t>(n_));
  }
  xi_ = std::move(xi);
}

std::vector<double> Grid::positions() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> out(n_);
  const std::size_t half = n_ / 2;
  for (std::size_t k = 0; k < n_; ++k) out[k] = (*xi_)[(k + half) % n_];
  return out;
}

// ---- ComplexField ---------------------------------------------------------

ComplexField::ComplexField(Grid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.n_points()) {
    throw Error(ErrorCode::kDimension,
                "field has " + std::to_string(values_.size()) + " samples, grid has " +
                    std::to_string(grid_.n_points()));
  }
}

ComplexField::ComplexField(Grid grid)
    : grid_(std::move(grid)), values_(grid_.n_points(), Complex{}) {}

bool ComplexField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

void ComplexField::validate() const {
  if (!is_finite()) throw Error(ErrorCode::kInvalidField, "field contains non-finite samples");
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(grid_, o.grid_, "field addition");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(grid_, o.grid_, "field subtraction");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex c) {
  for (auto& z : values_) z *= c;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(Complex c, ComplexField a) { return a *= c; }

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorCode::kDimension, std::string("grid mismatch in ") + what);
  }
}

// ---- FFT workspace ---------------------------------------------------------

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralWorkspace::SpectralWorkspace(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  buffer_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  // FFTW_ESTIMATE keeps the algorithm choice independent of timing, so runs
  // are bit-reproducible.
  forward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  std::fill(buffer_, buffer_ + n, Complex{});
}

SpectralWorkspace::~SpectralWorkspace() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
}

void SpectralWorkspace::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void SpectralWorkspace::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

SpectralWorkspace& thread_workspace(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<SpectralWorkspace>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<SpectralWorkspace>(n);
  return *slot;
}

// ---- transforms -----------------------------------------------------------

std::vector<Complex> forward_transform(const ComplexField& f) {
  f.validate();
  auto& ws = thread_workspace(f.size());
  std::copy(f.values().begin(), f.values().end(), ws.data().begin());
  ws.forward();
  const double dx = f.grid().dx();
  std::vector<Complex> out(ws.data().begin(), ws.data().end());
  for (auto& z : out) z *= dx;
  return out;
}

ComplexField inverse_transform(const Grid& grid, std::span<const Complex> spectrum) {
  if (spectrum.size() != grid.n_points()) {
    throw Error(ErrorCode::kDimension, "spectrum length does not match grid");
  }
  auto& ws = thread_workspace(grid.n_points());
  std::copy(spectrum.begin(), spectrum.end(), ws.data().begin());
  ws.backward();
  const double scale = 1.0 / grid.length();
  std::vector<Complex> out(ws.data().begin(), ws.data().end());
  for (auto& z : out) z *= scale;
  return ComplexField(grid, std::move(out));
}

ComplexField apply_multiplier(const ComplexField& f, std::span<const Complex> symbol) {
  f.validate();
  const std::size_t n = f.size();
  if (symbol.size() != n) throw Error(ErrorCode::kDimension, "multiplier length does not match grid");
  auto& ws = thread_workspace(n);
  auto buf = ws.data();
  std::copy(f.values().begin(), f.values().end(), buf.begin());
  ws.forward();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) buf[k] *= symbol[k] * inv_n;
  ws.backward();
  return ComplexField(f.grid(), std::vector<Complex>(buf.begin(), buf.end()));
}

// ---- derivatives ------------------------------------------------------------

ComplexField spectral_derivative(const ComplexField& f) {
  const auto xi = f.grid().fft_wavenumbers();
  std::vector<Complex> symbol(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) symbol[k] = Complex(0.0, xi[k]);
  // The Nyquist mode has no odd partner; its derivative is set to zero so
  // real fields have real derivatives.
  symbol[xi.size() / 2] = 0.0;
  return apply_multiplier(f, symbol);
}

ComplexField spectral_second_derivative(const ComplexField& f) {
  const auto xi = f.grid().fft_wavenumbers();
  std::vector<Complex> symbol(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) symbol[k] = -xi[k] * xi[k];
  return apply_multiplier(f, symbol);
}

std::vector<double> spectral_derivative(const Grid& grid, std::span<const double> samples) {
  std::vector<Complex> v(samples.begin(), samples.end());
  const auto d = spectral_derivative(ComplexField(grid, std::move(v)));
  std::vector<double> out(d.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = d[j].real();
  return out;
}

// ---- norms ----------------------------------------------------------------

double integrate(const Grid& grid, std::span<const double> samples) {
  double s = 0.0;
  for (double v : samples) s += v;
  return s * grid.dx();
}

double l2_norm_sq(const ComplexField& f) {
  f.validate();
  double s = 0.0;
  for (const auto& z : f.values()) s += std::norm(z);
  return s * f.grid().dx();
}

double h1_norm_sq(const ComplexField& f) {
  return l2_norm_sq(f) + l2_norm_sq(spectral_derivative(f));
}

double l1_norm(const ComplexField& f) {
  f.validate();
  double s = 0.0;
  for (const auto& z : f.values()) s += std::abs(z);
  return s * f.grid().dx();
}

double sup_norm(const ComplexField& f) {
  f.validate();
  double m = 0.0;
  for (const auto& z : f.values()) m = std::max(m, std::abs(z));
  return m;
}

double lp_norm(const ComplexField& f, double p) {
  if (std::isinf(p)) return sup_norm(f);
  if (!(p >= 1.0)) throw Error(ErrorCode::kParameter, "lp_norm requires p >= 1");
  f.validate();
  // Scale by the maximum so large p does not overflow.
  const double m = sup_norm(f);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& z : f.values()) s += std::pow(std::abs(z) / m, p);
  return m * std::pow(s * f.grid().dx(), 1.0 / p);
}

Complex inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  Complex s{};
  for (std::size_t j = 0; j < f.size(); ++j) s += std::conj(f[j]) * g[j];
  return s * f.grid().dx();
}

double boundary_mass_fraction(const ComplexField& f, double outer_fraction) {
  const double total = l2_norm_sq(f);
  if (total == 0.0) return 0.0;
  const std::size_t n = f.size();
  const auto edge = static_cast<std::size_t>(std::llround(0.5 * outer_fraction * static_cast<double>(n)));
  double s = 0.0;
  for (std::size_t j = 0; j < edge; ++j) s += std::norm(f[j]) + std::norm(f[n - 1 - j]);
  return s * f.grid().dx() / total;
}

double high_band_fraction(const ComplexField& f) {
  const auto spec = forward_transform(f);
  const std::size_t n = spec.size();
  const std::size_t half = n / 2;
  double total = 0.0;
  double high = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::norm(spec[k]);
    total += e;
    const std::size_t absk = k < half ? k : n - k;
    if (3 * absk > n) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

ComplexField translate(const ComplexField& f, double shift) {
  const Grid& g = f.grid();
  const double cells = shift / g.dx();
  const double rounded = std::nearbyint(cells);
  if (std::abs(cells - rounded) < 1e-9) {
    const auto n = static_cast<long long>(g.n_points());
    const long long s = ((static_cast<long long>(rounded) % n) + n) % n;
    std::vector<Complex> v(f.values().begin(), f.values().end());
    std::rotate(v.begin(), v.end() - s, v.end());
    return ComplexField(g, std::move(v));
  }
  const auto xi = g.fft_wavenumbers();
  std::vector<Complex> symbol(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) symbol[k] = std::polar(1.0, -xi[k] * shift);
  // Nyquist: use the real part so real data stays real.
  symbol[xi.size() / 2] = std::cos(xi[xi.size() / 2] * shift);
  return apply_multiplier(f, symbol);
}

}  // namespace snls
