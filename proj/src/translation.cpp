#include <cmath>

#include "snls/error.hpp"
#include "snls/scattering.hpp"

namespace snls {

TranslationGap translation_flow_gap(const PerturbedPropagator& p, const ComplexField& psi,
                                    double x_shift, const TranslationOptions& options) {
  require_same_grid(p.grid(), psi.grid(), "translation_flow_gap");
  const double length = p.grid().length();
  if (!(std::abs(x_shift) < 0.25 * length)) {
    throw Error(ErrorCode::kDomain, "|x_shift| must stay below L/4 so the shifted bump stays resolved");
  }
  if (!(options.t_end > options.t_begin) || !(options.sample_dt > 0.0)) {
    throw Error(ErrorCode::kParameter, "translation gap needs t_end > t_begin and sample_dt > 0");
  }
  TranslationGap gap;
  if (options.pair) {
    gap.a = options.pair->a;
    gap.b = options.pair->b;
  } else {
    const auto e = exponents(options.alpha);
    gap.a = e.p;
    gap.b = e.r;
  }
  const bool use_shifted = x_shift > 0.0;
  gap.reference_flow = use_shifted ? "shifted" : "free";

  const ComplexField moved = translate(psi, x_shift);
  const auto count = static_cast<std::size_t>(
      std::llround((options.t_end - options.t_begin) / options.sample_dt));
  std::vector<double> times;
  std::vector<ComplexField> diffs;
  ComplexField perturbed = p.evolve(moved, options.t_begin);
  double t_now = options.t_begin;
  for (std::size_t i = 0; i <= count; ++i) {
    const double t = i == count ? options.t_end
                                : options.t_begin + static_cast<double>(i) * options.sample_dt;
    perturbed = p.evolve(perturbed, t - t_now);
    t_now = t;
    const ComplexField reference = use_shifted ? evolve_shifted(moved, t) : evolve_free(moved, t);
    times.push_back(t);
    diffs.push_back(reference - perturbed);
  }
  gap.value = space_time_norm(times, diffs, gap.a, gap.b);
  return gap;
}

}  // namespace snls
