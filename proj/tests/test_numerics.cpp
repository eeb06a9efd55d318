#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "aclab/error.hpp"
#include "aclab/numerics/quadrature.hpp"
#include "aclab/numerics/roots.hpp"
#include "aclab/numerics/torus.hpp"
#include "aclab/oracle/simpson.hpp"
#include "doctest.h"

using namespace aclab;
using namespace aclab::numerics;
using std::numbers::pi;

TEST_CASE("integrate: constant and g(0) integrand") {
  CHECK(integrate([](double) { return 1.0; }, 0.0, pi / 2) == doctest::Approx(pi / 2).epsilon(1e-15));
  const double g0 = integrate([](double) { return 1.0 / std::sqrt(2.0); }, 0.0, pi / 2, 1e-14);
  CHECK(std::abs(g0 - 1.1107207345395915) < 1e-14);
}

TEST_CASE("integrate: elliptic-type integrand matches Simpson oracle") {
  auto f = [](double t) { return 1.0 / std::sqrt(2.0 - 0.81 * (1.0 + std::sin(t) * std::sin(t))); };
  const double reference = oracle::simpson(f, 0.0, pi / 2, 1'000'000);
  CHECK(std::abs(integrate(f, 0.0, pi / 2, 1e-14) - reference) < 1e-10);
}

TEST_CASE("integrate: polynomials up to degree 29 are exact on one panel") {
  for (int deg = 0; deg <= 29; ++deg) {
    auto p = [deg](double x) { return (deg + 1) * std::pow(x, deg); };
    CHECK(gauss_legendre_15(p, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(integrate(p, 0.0, 1.0, 1e-13) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("integrate: peaked integrand needs subdivision") {
  // Lorentzian with width 1e-4 centred inside the interval.
  const double w = 1e-4;
  auto f = [w](double x) { return w / ((x - 0.3) * (x - 0.3) + w * w); };
  const double exact = std::atan(0.7 / w) + std::atan(0.3 / w);
  CHECK(std::abs(integrate(f, 0.0, 1.0, 1e-13) - exact) < 1e-12 * exact);
}

TEST_CASE("integrate: failure reports the worst interval") {
  QuadratureOptions opts;
  opts.tol = 1e-15;
  opts.max_subdivisions = 3;
  auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.123456)); };
  try {
    integrate(f, 0.0, 1.0, opts);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::QuadratureFailure);
    CHECK(std::string(e.what()).find("worst interval") != std::string::npos);
  }
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), Error);
}

TEST_CASE("find_root: linear, quadratic and bracket errors") {
  CHECK(find_root([](double x) { return x - 0.5; }, 0.0, 1.0, 1e-14) == doctest::Approx(0.5).epsilon(1e-14));
  const double r = find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12);
  CHECK(std::abs(r - std::sqrt(2.0)) < 1e-12);
  try {
    find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12);
    FAIL("expected bracket error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Bracket);
  }
}

TEST_CASE("find_root: result stays inside the bracket (property)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double root = u(rng);
    const double lo = root - std::abs(u(rng)) - 1e-3;
    const double hi = root + std::abs(u(rng)) + 1e-3;
    const double s = u(rng) < 0 ? -1.0 : 1.0;
    auto f = [&](double x) { return s * std::sinh(x - root) * (1.0 + 0.1 * x * x); };
    const double x = find_root(f, lo, hi, RootOptions{1e-13, 0.0});
    CHECK(x >= lo);
    CHECK(x <= hi);
    CHECK(std::abs(x - root) < 1e-12);
  }
}

TEST_CASE("TorusGrid validation and geometry") {
  CHECK_THROWS_AS(TorusGrid(8), Error);
  CHECK_THROWS_AS(TorusGrid(100), Error);
  const TorusGrid g(64);
  CHECK(g.x(0) == doctest::Approx(-pi));
  CHECK(g.x(g.origin()) == doctest::Approx(0.0));
  CHECK(g.x(g.mirror(5)) == doctest::Approx(-g.x(5)));
  CHECK(TorusGrid().size() == 2048);
}

namespace {
TorusField sample(const TorusGrid& g, auto f) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
  return TorusField(g, std::move(v));
}
}  // namespace

TEST_CASE("sine_transform: basis functions") {
  const TorusGrid g(64);
  const auto s1 = sine_transform(sample(g, [](double x) { return std::sin(x); }));
  CHECK(s1.coeff(1) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t m = 2; m <= s1.max_mode(); ++m) CHECK(std::abs(s1.coeff(m)) < 1e-14);

  const auto s2 = sine_transform(sample(g, [](double x) { return 3.0 * std::sin(2.0 * x); }));
  CHECK(s2.coeff(2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(s2.coeff(1)) < 1e-14);
}

TEST_CASE("sine_transform: rejects non-odd input") {
  const TorusGrid g(32);
  try {
    sine_transform(sample(g, [](double x) { return std::cos(x); }));
    FAIL("expected symmetry violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SymmetryViolation);
  }
}

TEST_CASE("round trip field -> spectrum -> field for band-limited input (property)") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (std::size_t n : {16u, 64u, 256u, 2048u}) {
    const TorusGrid g(n);
    std::vector<double> c(n / 4);
    for (double& v : c) v = normal(rng);
    const TorusField f = synthesize(SineSpectrum(c), g);
    const TorusField back = synthesize(sine_transform(f), g);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(back[j] - f[j]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("spectral_derivative: sin x and sin 3x") {
  const TorusGrid g(64);
  const auto d2 = spectral_derivative(SineSpectrum({1.0}), 2, g);
  const auto d1 = spectral_derivative(SineSpectrum({0.0, 0.0, 1.0}), 1, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(d2[j] + std::sin(g.x(j))) < 1e-13);
    CHECK(std::abs(d1[j] - 3.0 * std::cos(3.0 * g.x(j))) < 1e-13);
  }
  CHECK_THROWS_AS(spectral_derivative(SineSpectrum({1.0}), 3, g), Error);
}

TEST_CASE("cosine_analysis recovers cosine coefficients") {
  const TorusGrid g(64);
  const auto f = sample(g, [](double x) { return 2.0 + 0.5 * std::cos(x) - 3.0 * std::cos(7.0 * x); });
  std::vector<double> a(10);
  cosine_analysis(f.values(), a);
  CHECK(a[0] == doctest::Approx(4.0));  // (1/pi) int 2 dx
  CHECK(a[1] == doctest::Approx(0.5));
  CHECK(a[7] == doctest::Approx(-3.0));
  CHECK(std::abs(a[3]) < 1e-14);
}
