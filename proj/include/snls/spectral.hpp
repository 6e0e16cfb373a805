#pragma once

// Uniform periodic grid, complex fields on it, and the Fourier machinery
// every other module builds on.
//
// Fourier convention: fhat(xi) = int f(x) exp(-i xi x) dx, discretized as
// fhat_k = dx * sum_j f_j exp(-2 pi i j k / N) with the phase referenced to
// the left end of the grid. Spectra are stored in FFT order
// (k = 0, 1, ..., N/2-1, -N/2, ..., -1).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace snls {

using Complex = std::complex<double>;

/// Periodic lattice on [-L/2, L/2) with N = 2^m >= 16 points.
class Grid {
 public:
  Grid(std::size_t n_points, double length);

  std::size_t n_points() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  double x(std::size_t j) const {
    return -0.5 * length_ + static_cast<double>(j) * dx();
  }
  std::vector<double> positions() const;

  /// Wavenumbers in FFT order.
  std::span<const double> fft_wavenumbers() const { return *xi_; }
  /// Wavenumbers sorted ascending, xi_k = 2 pi k / L for k = -N/2 .. N/2-1.
  std::vector<double> wavenumbers() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  std::size_t n_;
  double length_;
  std::shared_ptr<const std::vector<double>> xi_;
};

class ComplexField {
 public:
  ComplexField(Grid grid, std::vector<Complex> values);
  /// Zero field.
  explicit ComplexField(Grid grid);

  template <class Fn>
  static ComplexField sample(const Grid& grid, Fn&& fn) {
    std::vector<Complex> v(grid.n_points());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.x(j));
    return ComplexField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  const Complex& operator[](std::size_t j) const { return values_[j]; }
  Complex& operator[](std::size_t j) { return values_[j]; }

  bool is_finite() const;
  /// Throws kInvalidField on NaN/Inf samples.
  void validate() const;

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(Complex c);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(Complex c, ComplexField a);

/// Throws kDimension when the two grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

// ---- transforms -----------------------------------------------------------

std::vector<Complex> forward_transform(const ComplexField& f);
ComplexField inverse_transform(const Grid& grid, std::span<const Complex> spectrum);

/// Multiplies the spectrum of f by symbol (FFT order) and transforms back.
ComplexField apply_multiplier(const ComplexField& f, std::span<const Complex> symbol);

/// In-place FFT workspace bound to one transform size. One instance per
/// thread; plans are created under a global lock, execution is lock free.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(std::size_t n);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  std::size_t size() const { return n_; }
  std::span<Complex> data() { return {buffer_, n_}; }
  std::span<const Complex> data() const { return {buffer_, n_}; }

  /// Unnormalized forward DFT of the buffer.
  void forward();
  /// Unnormalized backward DFT of the buffer (caller divides by N).
  void backward();

 private:
  std::size_t n_;
  Complex* buffer_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Thread-local workspace for size n.
SpectralWorkspace& thread_workspace(std::size_t n);

// ---- derivatives, norms, quadrature ----------------------------------------

ComplexField spectral_derivative(const ComplexField& f);
ComplexField spectral_second_derivative(const ComplexField& f);
/// Spectral derivative of real samples (imaginary part discarded).
std::vector<double> spectral_derivative(const Grid& grid, std::span<const double> samples);

/// Rectangle rule, spectrally accurate for smooth periodic integrands.
double integrate(const Grid& grid, std::span<const double> samples);

double l2_norm_sq(const ComplexField& f);
double h1_norm_sq(const ComplexField& f);
double l1_norm(const ComplexField& f);
double sup_norm(const ComplexField& f);
/// (sum |f|^p dx)^(1/p); p = +inf gives the sup norm.
double lp_norm(const ComplexField& f, double p);
/// Complex L2 inner product sum conj(f) g dx.
Complex inner_product(const ComplexField& f, const ComplexField& g);

/// Fraction of the mass sitting in the outer `outer_fraction` of the domain
/// (half of it at each end).
double boundary_mass_fraction(const ComplexField& f, double outer_fraction = 0.1);
/// Fraction of spectral energy in modes with |k| > N/3.
double high_band_fraction(const ComplexField& f);

/// (tau_s f)(x) = f(x - s). Whole-cell shifts are exact rotations, other
/// shifts use the Fourier phase exp(-i xi s).
ComplexField translate(const ComplexField& f, double shift);

}  // namespace snls
