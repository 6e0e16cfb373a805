#pragma once

#include <memory>
#include <span>
#include <vector>

#include "snls/spectral.hpp"

namespace snls {

/// e^{it d_x^2} f: Fourier multiplier exp(-i t xi^2).
ComplexField evolve_free(const ComplexField& f, double t);

/// e^{it(d_x^2 - 1)} f = e^{-it} e^{it d_x^2} f, computed by applying the
/// phase to the output of evolve_free.
ComplexField evolve_shifted(const ComplexField& f, double t);

/// Modulus constant (4 pi)^{-1/2} of the free 1D Schroedinger kernel.
double decay_kernel_bound_free();

enum class PropagatorMethod { kStrangSplitting, kEigendecomposition };

/// Discretization of d_x^2 used by the eigendecomposition oracle.
///  - kFourierCollocation: the periodic spectral second-derivative matrix,
///    assembled entrywise from its closed form (no FFT involved). Same
///    symbol as the split-step kinetic substep, so the two methods differ
///    only by the splitting error.
///  - kCentralDifference: periodic three-point stencil.
enum class EigenStencil { kFourierCollocation, kCentralDifference };

/// Time grid helper: splits a signed span into full substeps of size dt and,
/// if needed, one shorter final substep.
std::vector<double> substep_schedule(double span, double dt);

struct EigenDecomposition;

/// The perturbed group e^{it(d_x^2 - V)}. Immutable after construction.
class PerturbedPropagator {
 public:
  static constexpr std::size_t kMaxEigenPoints = 1024;

  static PerturbedPropagator strang(const Grid& grid, std::vector<double> potential, double dt);
  /// Throws kCapability above kMaxEigenPoints. Decompositions are cached
  /// per (grid, potential, stencil).
  static PerturbedPropagator eigendecomposition(
      const Grid& grid, std::vector<double> potential,
      EigenStencil stencil = EigenStencil::kFourierCollocation);

  const Grid& grid() const { return grid_; }
  std::span<const double> potential() const { return *potential_; }
  PropagatorMethod method() const { return method_; }
  double dt() const { return dt_; }
  EigenStencil stencil() const { return stencil_; }

  /// Throws kDimension if f lives on another grid, kParameter for
  /// non-finite t. Negative t runs the group backwards.
  ComplexField evolve(const ComplexField& f, double t) const;

  /// Eigenvalues of the discrete operator -D2 + V (eigendecomposition only).
  std::span<const double> eigenvalues() const;

 private:
  PerturbedPropagator(Grid grid, std::shared_ptr<const std::vector<double>> potential,
                      PropagatorMethod method, double dt, EigenStencil stencil,
                      std::shared_ptr<const EigenDecomposition> eig)
      : grid_(std::move(grid)), potential_(std::move(potential)), method_(method), dt_(dt),
        stencil_(stencil), eig_(std::move(eig)) {}

  ComplexField evolve_strang(const ComplexField& f, double t) const;
  ComplexField evolve_eigen(const ComplexField& f, double t) const;

  Grid grid_;
  std::shared_ptr<const std::vector<double>> potential_;
  PropagatorMethod method_;
  double dt_;
  EigenStencil stencil_;
  std::shared_ptr<const EigenDecomposition> eig_;
};

/// e^{it(d_x^2 - V)} f.
inline ComplexField evolve_perturbed(const PerturbedPropagator& p, const ComplexField& f,
                                     double t) {
  return p.evolve(f, t);
}

}  // namespace snls
