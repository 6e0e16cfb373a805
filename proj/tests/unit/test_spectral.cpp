#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "snls/error.hpp"
#include "snls/spectral.hpp"

using namespace snls;

namespace {

ComplexField gaussian(const Grid& g, double a = 1.0) {
  return ComplexField::sample(g, [a](double x) { return Complex(std::exp(-a * x * x)); });
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid rejects bad sizes") {
    CHECK(code_of([] { Grid(100, 10.0); }) == ErrorCode::kParameter);
    CHECK(code_of([] { Grid(8, 10.0); }) == ErrorCode::kParameter);
    CHECK(code_of([] { Grid(64, -1.0); }) == ErrorCode::kParameter);
    CHECK(code_of([] { Grid(64, std::nan("")); }) == ErrorCode::kParameter);
  }

  TEST_CASE("grid geometry and wavenumbers") {
    const Grid g(16, 8.0);
    CHECK(g.dx() == 0.5);
    CHECK(g.x(0) == -4.0);
    CHECK(g.x(8) == 0.0);
    const auto xi = g.fft_wavenumbers();
    CHECK(xi[1] == doctest::Approx(2.0 * oracle::kPi / 8.0));
    CHECK(xi[8] == doctest::Approx(-8.0 * 2.0 * oracle::kPi / 8.0));
    CHECK(xi[15] == doctest::Approx(-2.0 * oracle::kPi / 8.0));
    const auto sorted = g.wavenumbers();
    CHECK(std::is_sorted(sorted.begin(), sorted.end()));
    CHECK(sorted.front() == doctest::Approx(xi[8]));
  }

  TEST_CASE("fields validate finiteness and grid agreement") {
    const Grid g(16, 1.0);
    ComplexField f(g);
    CHECK(f.is_finite());
    f[3] = Complex(std::nan(""), 0.0);
    CHECK_FALSE(f.is_finite());
    CHECK(code_of([&] { f.validate(); }) == ErrorCode::kInvalidField);
    CHECK(code_of([&] { ComplexField(g, std::vector<Complex>(8)); }) == ErrorCode::kDimension);
    const ComplexField other(Grid(32, 1.0));
    CHECK(code_of([&] { ComplexField(g) + other; }) == ErrorCode::kDimension);
  }

  TEST_CASE("forward transform matches the brute-force DFT") {
    const Grid g(64, 12.0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    std::vector<Complex> v(64);
    for (auto& z : v) z = {n(rng), n(rng)};
    const ComplexField f(g, v);
    const auto fast = forward_transform(f);
    const auto slow = oracle::brute_force_dft(v, g.dx());
    double err = 0.0;
    for (std::size_t k = 0; k < 64; ++k) err = std::max(err, std::abs(fast[k] - slow[k]));
    CHECK(err < 1e-12);
    const auto back = inverse_transform(g, fast);
    CHECK(std::sqrt(l2_norm_sq(back - f)) < 1e-13);
  }

  TEST_CASE("transform of a Gaussian has the analytic modulus") {
    const Grid g(512, 40.0);
    const auto spec = forward_transform(gaussian(g));
    const auto xi = g.fft_wavenumbers();
    double err = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      err = std::max(err, std::abs(std::abs(spec[k]) - std::sqrt(oracle::kPi) * std::exp(-xi[k] * xi[k] / 4.0)));
    }
    CHECK(err < 1e-12);
  }

  TEST_CASE("quadrature and norms") {
    CHECK(l2_norm_sq(ComplexField(Grid(64, 3.0))) == 0.0);
    CHECK(l2_norm_sq(ComplexField::sample(Grid(64, 10.0), [](double) { return Complex(1.0); })) ==
          doctest::Approx(10.0).epsilon(1e-15));
    const Grid g(2048, 40.0);
    const auto f = gaussian(g);
    CHECK(std::abs(l2_norm_sq(f) - oracle::kGaussMass) < 1e-10);
    CHECK(std::abs(h1_norm_sq(f) - 2.0 * oracle::kGaussMass) < 1e-10);
    CHECK(std::abs(l1_norm(f) - std::sqrt(oracle::kPi)) < 1e-10);
    CHECK(sup_norm(f) == 1.0);
    CHECK(std::abs(std::pow(lp_norm(f, 7.0), 7.0) - oracle::kGaussL7Power) < 1e-10);
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(std::abs(inner_product(f, f).real() - oracle::kGaussMass) < 1e-10);
  }

  TEST_CASE("h1 norm of a plane wave") {
    const Grid g(64, 2.0 * oracle::kPi);
    const auto f = ComplexField::sample(g, [](double x) { return std::polar(1.0, x); });
    CHECK(h1_norm_sq(f) == doctest::Approx(4.0 * oracle::kPi).epsilon(1e-13));
  }

  TEST_CASE("spectral derivative") {
    const Grid g(2048, 40.0);
    const auto d = spectral_derivative(gaussian(g));
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_points(); ++j) {
      const double x = g.x(j);
      err = std::max(err, std::abs(d[j] - Complex(-2.0 * x * std::exp(-x * x))));
    }
    CHECK(err < 1e-9);

    const Grid h(64, 10.0);
    const double k1 = 2.0 * oracle::kPi / 10.0;
    const auto s = ComplexField::sample(h, [k1](double x) { return Complex(std::sin(k1 * x)); });
    const auto ds = spectral_derivative(s);
    const auto cst = spectral_derivative(ComplexField::sample(h, [](double) { return Complex(3.0); }));
    double es = 0.0, ec = 0.0;
    for (std::size_t j = 0; j < h.n_points(); ++j) {
      es = std::max(es, std::abs(ds[j] - Complex(k1 * std::cos(k1 * h.x(j)))));
      ec = std::max(ec, std::abs(cst[j]));
    }
    CHECK(es < 1e-13);
    CHECK(ec < 1e-13);
  }

  TEST_CASE("translation") {
    const Grid g(1024, 40.0);
    const auto f = gaussian(g);
    const auto moved = translate(f, 3.0);
    const auto exact = ComplexField::sample(g, [](double x) { return Complex(std::exp(-(x - 3.0) * (x - 3.0))); });
    CHECK(std::sqrt(l2_norm_sq(moved - exact)) < 1e-12);
    const auto odd = translate(f, 0.3 * g.dx());
    const auto exact_odd = ComplexField::sample(g, [&](double x) {
      const double y = x - 0.3 * g.dx();
      return Complex(std::exp(-y * y));
    });
    CHECK(std::sqrt(l2_norm_sq(odd - exact_odd)) < 1e-12);
    CHECK(std::sqrt(l2_norm_sq(translate(translate(f, 2.7), -2.7) - f)) < 1e-13);
  }

  TEST_CASE("wrap-around and high-band monitors") {
    const Grid g(1024, 40.0);
    CHECK(boundary_mass_fraction(gaussian(g)) < 1e-100);
    const auto edge = ComplexField::sample(g, [](double x) { return Complex(std::exp(-(x - 19.0) * (x - 19.0))); });
    CHECK(boundary_mass_fraction(edge) > 0.9);
    CHECK(high_band_fraction(gaussian(g)) < 1e-20);
    std::vector<Complex> alt(1024);
    for (std::size_t j = 0; j < alt.size(); ++j) alt[j] = (j % 2) ? 1.0 : -1.0;
    CHECK(high_band_fraction(ComplexField(g, alt)) > 0.99);
  }
}
