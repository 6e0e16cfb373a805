#include <doctest.h>

#include <cmath>
#include <random>

#include "snls/diagnostics.hpp"
#include "snls/error.hpp"
#include "snls/nls_solver.hpp"
#include "snls/potentials.hpp"
#include "snls/propagators.hpp"

using namespace snls;

namespace {

NlsProblem problem(const Grid& g, std::vector<double> v, ComplexField u0, double t_final) {
  NlsProblem p{g, std::move(v), {}, 5.0, std::move(u0)};
  p.t_final = t_final;
  return p;
}

}  // namespace

TEST_SUITE("nls_solver") {
  TEST_CASE("zero data stays zero") {
    const Grid g(256, 40.0);
    auto p = problem(g, build_potential(PotentialSpec{}, g), ComplexField(g), 1.0);
    p.record_times = {0.5, 1.0};
    const auto traj = solve(p);
    REQUIRE(traj.snapshots.size() == 3);
    for (const auto& s : traj.snapshots) CHECK(sup_norm(s.field) == 0.0);
  }

  TEST_CASE("record times are honoured") {
    const Grid g(128, 20.0);
    auto p = problem(g, std::vector<double>(128, 0.0), ComplexField(g), 1.0);
    p.record_times = {0.25, 0.7, 1.0};
    const auto traj = solve(p);
    REQUIRE(traj.snapshots.size() == 4);
    CHECK(traj.snapshots[2].t == 0.7);
    CHECK(traj.final_time() == 1.0);
    CHECK(traj.diagnostics.size() == 4);
  }

  TEST_CASE("small data tracks the free flow") {
    const Grid g(2048, 200.0);
    const auto u0 = ComplexField::sample(g, [](double x) { return Complex(0.01 * std::exp(-x * x)); });
    auto p = problem(g, std::vector<double>(2048, 0.0), u0, 5.0);
    const auto traj = solve(p);
    CHECK(std::sqrt(l2_norm_sq(traj.snapshots.back().field - evolve_free(u0, 5.0))) < 1e-4);
  }

  TEST_CASE("linear mode reproduces the linear propagator") {
    const Grid g(512, 40.0);
    const auto v = build_potential(PotentialSpec{}, g);
    const auto u0 = ComplexField::sample(g, [](double x) { return Complex(std::exp(-x * x)); });
    auto p = problem(g, v, u0, 1.0);
    p.linear = true;
    const auto traj = solve(p);
    const auto ref = PerturbedPropagator::strang(g, v, p.dt).evolve(u0, 1.0);
    CHECK(std::sqrt(l2_norm_sq(traj.snapshots.back().field - ref)) < 1e-12);
  }

  TEST_CASE("mass and energy conservation with second-order energy drift") {
    const Grid g(1024, 60.0);
    const auto v = build_potential(PotentialSpec{}, g);
    const auto u0 = ComplexField::sample(g, [](double x) { return Complex(std::exp(-x * x)); });
    auto drift = [&](double dt) {
      auto p = problem(g, v, u0, 2.0);
      p.dt = dt;
      for (int k = 1; k <= 20; ++k) p.record_times.push_back(0.1 * k);
      const auto traj = solve(p);
      double dm = 0.0, de = 0.0;
      for (const auto& d : traj.diagnostics) {
        dm = std::max(dm, std::abs(d.mass / traj.diagnostics[0].mass - 1.0));
        de = std::max(de, std::abs(d.energy / traj.diagnostics[0].energy - 1.0));
      }
      return std::pair{dm, de};
    };
    const auto [m1, e1] = drift(2e-3);
    const auto [m2, e2] = drift(1e-3);
    CHECK(m1 < 1e-12);
    CHECK(e1 / e2 > 3.5);
  }

  TEST_CASE("phase substep") {
    const Grid g(64, 10.0);
    const std::vector<double> zero(64, 0.0);
    CHECK(sup_norm(phase_substep(ComplexField(g), zero, 5.0, 0.1)) == 0.0);
    const auto ones = ComplexField::sample(g, [](double x) { return std::polar(1.0, x); });
    const auto out = phase_substep(ones, zero, 5.0, 0.1);
    CHECK(std::sqrt(l2_norm_sq(out - std::polar(1.0, -0.1) * ones)) < 1e-14);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> n;
    std::vector<Complex> r(64);
    for (auto& z : r) z = {n(rng), n(rng)};
    const ComplexField f(g, r);
    std::vector<double> v(64);
    for (auto& x : v) x = std::abs(n(rng));
    for (double alpha : {5.0, 4.5, 6.25, 7.0}) {
      const auto o = phase_substep(f, v, alpha, 0.3);
      double err = 0.0, perr = 0.0;
      for (std::size_t j = 0; j < 64; ++j) {
        err = std::max(err, std::abs(std::abs(o[j]) - std::abs(f[j])));
        const Complex expect = f[j] * std::polar(1.0, -(v[j] + std::pow(std::abs(f[j]), alpha)) * 0.3);
        perr = std::max(perr, std::abs(o[j] - expect));
      }
      CHECK(err < 1e-14);
      CHECK(perr < 1e-12);
    }
  }

  TEST_CASE("validation") {
    const Grid g(64, 10.0);
    auto p = problem(g, std::vector<double>(64, 0.0), ComplexField(g), 1.0);
    p.alpha = 3.0;
    CHECK_THROWS_AS(validate(p), Error);
    p.permissive = true;
    CHECK_NOTHROW(validate(p));
    CHECK(solve(p).exploratory);
    p.alpha = 5.0;
    p.potential.resize(32);
    CHECK_THROWS_AS(validate(p), Error);
    p.potential.resize(64);
    p.record_times = {2.0};
    CHECK_THROWS_AS(validate(p), Error);
  }

  TEST_CASE("wrap-around warning") {
    const Grid g(512, 20.0);
    const auto u0 = ComplexField::sample(g, [](double x) { return std::exp(-x * x) * std::polar(1.0, 5.0 * x); });
    auto p = problem(g, std::vector<double>(512, 0.0), u0, 2.0);
    const auto traj = solve(p);
    CHECK_FALSE(traj.warnings.empty());
  }
}
