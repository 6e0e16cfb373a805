#include <cmath>
#include <random>

#include "snls/error.hpp"
#include "snls/scattering.hpp"

namespace snls {

ProfileFixture make_profile_fixture(std::string_view kind, const PerturbedPropagator& p, int members,
                                    std::uint64_t seed, const ProfileOptions& options) {
  if (members < 3) throw Error(ErrorCode::kParameter, "fixture needs >= 3 members");
  if (kind != "one" && kind != "two" && kind != "noise") {
    throw Error(ErrorCode::kParameter, "unknown fixture '" + std::string(kind) + "'");
  }
  const Grid& grid = p.grid();
  const auto n = static_cast<long>(grid.n_points());
  const double dx = grid.dx();
  std::mt19937_64 rng(seed);
  ProfileFixture fx;

  if (kind == "noise") {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int m = 0; m < members; ++m) {
      std::vector<Complex> v(grid.n_points());
      for (auto& z : v) z = {gauss(rng), gauss(rng)};
      ComplexField f(grid, std::move(v));
      f *= 1.0 / std::sqrt(l2_norm_sq(f));
      fx.fields.push_back(std::move(f));
    }
    return fx;
  }

  const auto phi1 = ComplexField::sample(grid, [](double x) { return Complex(std::exp(-x * x)); });
  const auto phi2 = ComplexField::sample(
      grid, [](double x) { return Complex(0.5 * std::exp(-(x / 1.2) * (x / 1.2))); });
  fx.truth.push_back(phi1);
  if (kind == "two") fx.truth.push_back(phi2);

  // Centres stay in the middle half of the box; time offsets in half the window.
  const long k_max = std::max(0L, std::lround(0.5 * options.time_window / options.time_spacing));
  std::uniform_int_distribution<long> time_index(-k_max, k_max);
  const long cells = std::max(1L, n / 8);
  std::uniform_int_distribution<long> cell(-cells, cells);
  const long sep_cells = std::max(1L, std::lround(12.0 / dx));
  const long sep_step = std::max(1L, std::lround(2.5 / dx));

  for (int m = 0; m < members; ++m) {
    const double t = static_cast<double>(time_index(rng)) * options.time_spacing;
    const long c = cell(rng);
    ComplexField data = translate(phi1, static_cast<double>(c) * dx);
    if (kind == "two") {
      const long offset = sep_cells + static_cast<long>(m) * sep_step;
      data += translate(phi2, static_cast<double>(c + offset) * dx);
    }
    fx.fields.push_back(p.evolve(data, t));
  }
  return fx;
}

}  // namespace snls
