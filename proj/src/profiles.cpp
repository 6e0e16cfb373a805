#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "snls/error.hpp"
#include "snls/scattering.hpp"

namespace snls {

double localization_cutoff(double s) {
  s = std::abs(s);
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  auto bump = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
  const double up = bump(2.0 - s);
  return up / (up + bump(s - 1.0));
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct TimeChoice {
  double t = 0.0;
  ComplexField state;
  bool half_sup = true;
};

// Maximizes ||e^{it(D2-V)} v||_q over t = k h, |k| <= K. Ties keep the
// earlier candidate in the order 0, +h, -h, +2h, -2h, ...
TimeChoice search_time(const PerturbedPropagator& p, const ComplexField& v, double q,
                       const ProfileOptions& opt) {
  const auto k_max = static_cast<long>(std::llround(opt.time_window / opt.time_spacing));
  TimeChoice best{0.0, v, true};
  double best_norm = lp_norm(v, q);
  double sampled_sup = best_norm;
  ComplexField forward = v;
  ComplexField backward = v;
  for (long k = 1; k <= k_max; ++k) {
    forward = p.evolve(forward, opt.time_spacing);
    backward = p.evolve(backward, -opt.time_spacing);
    const double t = static_cast<double>(k) * opt.time_spacing;
    const double nf = lp_norm(forward, q);
    const double nb = lp_norm(backward, q);
    sampled_sup = std::max({sampled_sup, nf, nb});
    if (nf > best_norm) {
      best_norm = nf;
      best = {t, forward, true};
    }
    if (nb > best_norm) {
      best_norm = nb;
      best = {-t, backward, true};
    }
  }
  best.half_sup = best_norm > 0.5 * sampled_sup || sampled_sup == 0.0;
  return best;
}

ComplexField low_pass(const ComplexField& f, double radius) {
  if (!std::isfinite(radius)) return f;
  const auto xi = f.grid().fft_wavenumbers();
  std::vector<Complex> symbol(xi.size());
  for (std::size_t k = 0; k < xi.size(); ++k) symbol[k] = localization_cutoff(xi[k] / radius);
  return apply_multiplier(f, symbol);
}

double peak_location(const ComplexField& f) {
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double a = std::norm(f[j]);
    if (a > m) {
      m = a;
      best = j;
    }
  }
  return f.grid().x(best);
}

double median(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

ComplexField consensus(const std::vector<ComplexField>& family, double rel_tol) {
  const Grid& grid = family.front().grid();
  const std::size_t n = grid.n_points();
  const std::size_t members = family.size();
  double scale = 0.0;
  for (const auto& f : family) scale = std::max(scale, sup_norm(f));
  const double tol = rel_tol * scale;
  std::vector<Complex> out(n);
  std::vector<double> re(members), im(members);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < members; ++m) {
      re[m] = family[m][j].real();
      im[m] = family[m][j].imag();
    }
    const Complex med(median(re), median(im));
    Complex sum{};
    std::size_t agree = 0;
    for (std::size_t m = 0; m < members; ++m) {
      if (std::abs(family[m][j] - med) <= tol) {
        sum += family[m][j];
        ++agree;
      }
    }
    out[j] = 2 * agree > members ? sum / static_cast<double>(agree) : Complex{};
  }
  return ComplexField(grid, std::move(out));
}

double signed_worst(const std::vector<double>& v) {
  double w = 0.0;
  for (double x : v) {
    if (std::abs(x) > std::abs(w)) w = x;
  }
  return w;
}

}  // namespace

ProfileSet greedy_profile_decomposition(std::span<const ComplexField> fields,
                                        const PerturbedPropagator& p, int j_max, double q_exponent,
                                        const ProfileOptions& opt) {
  if (fields.empty()) throw Error(ErrorCode::kParameter, "profile decomposition needs input fields");
  if (fields.size() < 3) throw Error(ErrorCode::kParameter, "profile decomposition needs >= 3 fields");
  if (!(q_exponent > 2.0) || !std::isfinite(q_exponent)) {
    throw Error(ErrorCode::kRange, "q_exponent must lie in (2, inf)");
  }
  if (j_max < 0) throw Error(ErrorCode::kParameter, "J_max must be >= 0");
  if (!(opt.time_spacing > 0.0) || opt.time_window < 0.0) {
    throw Error(ErrorCode::kParameter, "invalid time search window");
  }
  for (const auto& f : fields) {
    require_same_grid(p.grid(), f.grid(), "profile decomposition");
    f.validate();
  }

  const std::size_t members = fields.size();
  std::vector<ComplexField> v(fields.begin(), fields.end());
  double reference = 0.0;
  for (const auto& f : v) reference = std::max(reference, std::sqrt(l2_norm_sq(f)));

  ProfileSet set;
  // Sharp embedding H^eps -> L^q at d = 1 (eps = 1/2 - 1/q) and
  // 1/q = (1 - theta)/2 give beta = theta / (1 - eps + theta/2) = 1 - 2/q.
  const double beta = 1.0 - 2.0 / q_exponent;
  set.localization_exponent = beta;

  for (int j = 0; j < j_max; ++j) {
    std::vector<TimeChoice> choice(members, TimeChoice{0.0, ComplexField(p.grid()), true});
    parallel_for(members, opt.threads,
                 [&](std::size_t m) { choice[m] = search_time(p, v[m], q_exponent, opt); });

    double level = 0.0;
    for (const auto& f : v) level = std::max(level, std::sqrt(l2_norm_sq(f)));
    if (level == 0.0) break;

    std::vector<double> x_shift(members);
    std::vector<ComplexField> recentred(members, ComplexField(p.grid()));
    auto locate = [&](double radius) {
      parallel_for(members, opt.threads, [&](std::size_t m) {
        x_shift[m] = peak_location(low_pass(choice[m].state, radius));
        recentred[m] = translate(choice[m].state, -x_shift[m]);
      });
      return consensus(recentred, opt.consensus_tol);
    };
    double radius = std::pow(level, -beta);
    ComplexField psi = locate(radius);
    double lambda = std::sqrt(l2_norm_sq(psi));
    if (lambda > 0.0) {
      // Refine the cutoff with the measured concentration level.
      const double refined = std::pow(lambda, -beta);
      if (refined != radius) {
        radius = refined;
        psi = locate(radius);
        lambda = std::sqrt(l2_norm_sq(psi));
      }
    }
    if (!(lambda >= opt.stop_ratio * reference) || lambda == 0.0) break;
    if (set.profiles.empty()) set.concentration_level = lambda;

    Profile prof{psi, std::vector<double>(members), x_shift, radius, true};
    for (std::size_t m = 0; m < members; ++m) {
      prof.t_shifts[m] = -choice[m].t;
      prof.half_sup_condition = prof.half_sup_condition && choice[m].half_sup;
    }
    parallel_for(members, opt.threads, [&](std::size_t m) {
      v[m] -= p.evolve(translate(psi, x_shift[m]), prof.t_shifts[m]);
    });
    set.profiles.push_back(std::move(prof));
  }
  set.remainders = std::move(v);

  // Pythagorean bookkeeping.
  const auto pot = p.potential();
  std::vector<double> d_mass, d_h1v, d_lq, d_energy;
  for (std::size_t m = 0; m < members; ++m) {
    const ComplexField& vn = fields[m];
    const ComplexField& rn = set.remainders[m];
    double mass = l2_norm_sq(vn) - l2_norm_sq(rn);
    double h1v = h1v_norm_sq(vn, pot) - h1v_norm_sq(rn, pot);
    double lq = std::pow(lp_norm(vn, q_exponent), q_exponent) - std::pow(lp_norm(rn, q_exponent), q_exponent);
    double en = energy(vn, pot, opt.alpha) - energy(rn, pot, opt.alpha);
    for (const auto& prof : set.profiles) {
      const ComplexField moved = translate(prof.psi, prof.x_shifts[m]);
      const ComplexField evolved = p.evolve(moved, prof.t_shifts[m]);
      mass -= l2_norm_sq(prof.psi);
      h1v -= h1v_norm_sq(moved, pot);
      lq -= std::pow(lp_norm(evolved, q_exponent), q_exponent);
      en -= energy(evolved, pot, opt.alpha);
    }
    auto rel = [](double d, double ref) { return ref > 0.0 ? d / ref : d; };
    d_mass.push_back(rel(mass, l2_norm_sq(vn)));
    d_h1v.push_back(rel(h1v, h1v_norm_sq(vn, pot)));
    d_lq.push_back(rel(lq, std::pow(lp_norm(vn, q_exponent), q_exponent)));
    d_energy.push_back(rel(en, energy(vn, pot, opt.alpha)));
  }
  set.pythagorean_defects = {signed_worst(d_mass), signed_worst(d_h1v), signed_worst(d_lq),
                             signed_worst(d_energy)};
  return set;
}

}  // namespace snls
