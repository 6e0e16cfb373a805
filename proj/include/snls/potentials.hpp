#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snls/spectral.hpp"

namespace snls {

enum class PotentialFamily { kGaussianMatchedStep, kLogisticStep, kFlat, kCustomSamples };

std::string_view to_string(PotentialFamily f);
/// Throws kParameter on an unknown name.
PotentialFamily parse_potential_family(std::string_view name);

/// Parametric steplike potential.
///
/// gaussian_matched_step:
///   V(x) = a_minus + (height - a_minus) exp(-x^2/w^2)   for x <= 0
///   V(x) = a_plus  + (height - a_plus)  exp(-x^2/w^2)   for x >= 0
/// Both branches equal `height` with zero slope at x = 0. With a_minus = 0
/// and height >= a_plus the family is nonnegative, bounded, repulsive
/// (x V' <= 0) and approaches its limits faster than any power.
///
/// logistic_step: V(x) = a_minus + (a_plus - a_minus) / (1 + exp(-x/w)).
/// flat:          V(x) = a_plus (requires a_minus == a_plus).
/// custom_samples: `samples` used as-is (must match the grid).
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::kGaussianMatchedStep;
  double height = 2.0;
  double width = 1.0;
  double a_minus = 0.0;
  double a_plus = 1.0;
  std::vector<double> samples;
};

std::vector<double> build_potential(const PotentialSpec& spec, const Grid& grid);

/// Exact derivative V'(x) for the closed-form families; custom samples fall
/// back to a fourth-order centered difference.
std::vector<double> build_potential_gradient(const PotentialSpec& spec, const Grid& grid);

/// Fourth-order centered difference (second order at the two outer cells
/// on each side).
std::vector<double> finite_difference_gradient(const Grid& grid, std::span<const double> v);

/// Loads (x, V) rows from a two-column CSV and returns a custom_samples
/// spec; x must coincide with the grid positions to 1e-9 * dx.
PotentialSpec load_potential_csv(const std::string& path, const Grid& grid);

struct HypothesisTargets {
  double a_minus = 0.0;
  double a_plus = 1.0;
};

struct Violation {
  double location = 0.0;
  double value = 0.0;
};

struct HypothesisReport {
  bool nonnegative = false;
  bool bounded = false;
  bool left_limit_ok = false;
  bool right_limit_ok = false;
  bool decay_rate_ok = false;
  /// Fitted power-law exponent of |V - a| on the outer quarter of each side
  /// (the smaller of the two; +inf when the difference underflows).
  double decay_exponent = 0.0;
  bool repulsive = false;
  bool gradient_vanishes = false;
  /// Largest value of x * (DV)(x) on the grid.
  Violation worst_violation;

  bool all() const {
    return nonnegative && bounded && left_limit_ok && right_limit_ok && decay_rate_ok &&
           repulsive && gradient_vanishes;
  }
};

/// Finite-sample test of the steplike-potential hypotheses. DV is a centered
/// difference; repulsivity tolerance is 1e-10 * max|V|; limits and the
/// vanishing gradient use tolerance 1e-6 on the outer 5% of each side.
HypothesisReport check_hypotheses(std::span<const double> v, const Grid& grid, double epsilon,
                                  const HypothesisTargets& targets = {});

}  // namespace snls
