#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "aclab/error.hpp"
#include "aclab/evolution.hpp"
#include "aclab/ground_state.hpp"
#include "doctest.h"

using namespace aclab;
using namespace aclab::evolve;
using numerics::SineSpectrum;
using numerics::TorusField;
using numerics::TorusGrid;
using std::numbers::pi;

namespace {

SineSpectrum modes(std::initializer_list<std::pair<std::size_t, double>> terms) {
  std::size_t top = 1;
  for (auto [m, c] : terms) top = std::max(top, m);
  std::vector<double> c(top, 0.0);
  for (auto [m, v] : terms) c[m - 1] = v;
  return SineSpectrum(std::move(c));
}

EvolveParams params(double kappa, double t_end) {
  EvolveParams p;
  p.kappa = kappa;
  p.t_end = t_end;
  return p;
}

double max_diff(const TorusField& a, const TorusField& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

}  // namespace

TEST_CASE("fractional_multiplier") {
  CHECK(fractional_multiplier(1, 1.0, 2.0) == 1.0);
  CHECK(fractional_multiplier(2, 2.0, 2.0) == 16.0);
  CHECK(fractional_multiplier(2, 2.0, 2.0) - 1.0 == 15.0);
  CHECK(fractional_multiplier(3, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(fractional_multiplier(0, 1.0, 2.0), Error);
}

TEST_CASE("parameter gates") {
  auto bad = [](auto mutate) {
    EvolveParams p;
    mutate(p);
    try {
      p.validate();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Domain;
    }
    return false;
  };
  CHECK(bad([](EvolveParams& p) { p.dt = 0.2; }));
  CHECK(bad([](EvolveParams& p) { p.dt = 0.0; }));
  CHECK(bad([](EvolveParams& p) { p.gamma = 2.5; }));
  CHECK(bad([](EvolveParams& p) { p.gamma = 0.0; }));
  CHECK(bad([](EvolveParams& p) { p.t_end = -1.0; }));
  CHECK(bad([](EvolveParams& p) { p.kappa = 0.0; }));
  CHECK(bad([](EvolveParams& p) { p.n_points = 100; }));
  CHECK(bad([](EvolveParams& p) { p.record_every = 0; }));
  CHECK_NOTHROW(EvolveParams{}.validate());
  CHECK(parse_filter("bandgap") == FilterKind::OddBandGap);
  CHECK(parse_filter("odd") == FilterKind::OddProjection);
  CHECK_THROWS_AS(parse_filter("even"), Error);
}

TEST_CASE("filters") {
  const SineSpectrum f = apply_filter(modes({{1, 1.0}, {2, 0.1}}), FilterKind::OddBandGap);
  CHECK(f.coeff(1) == 1.0);
  CHECK(f.coeff(2) == 0.0);
  const SineSpectrum g = apply_filter(modes({{3, 1.0}}), FilterKind::OddBandGap);
  CHECK(g.coeff(3) == 1.0);
  const SineSpectrum h = apply_filter(modes({{1, 1.0}, {2, 0.1}}), FilterKind::OddProjection);
  CHECK(h.coeff(2) == 0.1);
}

TEST_CASE("zero is a fixed point") {
  const SineSpectrum zero(std::vector<double>(85, 0.0));
  const SineSpectrum next = step(zero, params(0.7, 1.0));
  for (double c : next.coeffs()) CHECK(c == 0.0);
}

TEST_CASE("linear propagator is exact") {
  EvolveParams p = params(2.0, 1.0);
  p.disable_cubic = true;
  const Trajectory tr = evolve::evolve(modes({{1, 1.0}, {2, 0.5}}), p);
  for (const Snapshot& s : tr.snapshots) {
    CHECK(s.state.coeff(1) == doctest::Approx(std::exp(-3.0 * s.t)).epsilon(1e-13));
    CHECK(s.state.coeff(2) == doctest::Approx(0.5 * std::exp(-15.0 * s.t)).epsilon(1e-12));
  }
  // Zero symbol at kappa = 1, m = 1: the series branch of the phi functions.
  EvolveParams q = params(1.0, 0.5);
  q.disable_cubic = true;
  const Trajectory flat = evolve::evolve(modes({{1, 0.8}}), q);
  CHECK(flat.final_state.coeff(1) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("mass bounds") {
  SUBCASE("kappa = 1, algebraic") {
    const Trajectory tr = evolve::evolve(modes({{1, 1.0}}), params(1.0, 20.0));
    const auto& s = tr.diagnostics;
    CHECK(tr.terminal == Terminal::ReachedTEnd);  // detection off at kappa = 1
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double n0 = std::sqrt(pi);
      CHECK(std::sqrt(s.mass[i]) <= std::sqrt(pi) * n0 / std::sqrt(s.times[i] * n0 * n0 + pi) * (1 + 1e-14));
      CHECK(s.mass[i] > 0.0);
    }
  }
  SUBCASE("kappa = 2, exponential") {
    const Trajectory tr = evolve::evolve(modes({{1, 1.0}}), params(2.0, 3.0));
    const auto& s = tr.diagnostics;
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(std::sqrt(s.mass[i]) <= std::sqrt(pi) * std::exp(-3.0 * s.times[i]) * (1 + 1e-14));
      CHECK(s.mass[i] > 0.0);
    }
  }
}

TEST_CASE("band gap survives evolution") {
  EvolveParams p = params(0.6, 2.0);
  p.filter = FilterKind::OddBandGap;
  p.record_every = 1;
  const Trajectory tr = evolve::evolve(modes({{1, 1.0}, {3, 0.2}}), p);
  for (const Snapshot& s : tr.snapshots) {
    for (std::size_t m = 2; m <= s.state.max_mode(); m += 2) REQUIRE(s.state.coeff(m) == 0.0);
  }
  // Without the filter the even modes stay at round-off level only.
  p.filter = FilterKind::None;
  const Trajectory raw = evolve::evolve(modes({{1, 1.0}, {3, 0.2}}), p);
  double leak = 0.0;
  for (std::size_t m = 2; m <= raw.final_state.max_mode(); m += 2) {
    leak = std::max(leak, std::abs(raw.final_state.coeff(m)));
  }
  CHECK(leak < 1e-12);
}

TEST_CASE("sin 2x keeps c1 at zero") {
  const Trajectory tr = evolve::evolve(modes({{2, 1.0}}), params(2.0, 3.0));
  for (double c : tr.diagnostics.c1) CHECK(std::abs(c) < 1e-15);
  CHECK(diag::extract_profile(tr.diagnostics, 2.0).vanishing);
}

TEST_CASE("energy dissipation, max norm, snapshot order") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-0.6, 0.6);
  for (double kappa : {0.3, 0.9, 1.0, 1.5}) {
    std::vector<double> c(8);
    for (double& v : c) v = coef(rng);
    const SineSpectrum u0(c);
    EvolveParams p = params(kappa, 4.0);
    p.record_every = 5;
    const Trajectory tr = evolve::evolve(u0, p);
    const auto& s = tr.diagnostics;
    const double sup0 = s.linf.front();
    for (std::size_t i = 1; i < s.size(); ++i) {
      CHECK(s.energy[i] <= s.energy[i - 1] + 1e-10);
      CHECK(s.times[i] > s.times[i - 1]);
      CHECK(s.linf[i] <= std::max(1.0, sup0) + 0.01);
      CHECK(tr.snapshots[i].state.is_finite());
    }
  }
}

TEST_CASE("energy of constants of the flow") {
  const Integrator integ(params(0.5, 1.0));
  CHECK(integ.energy(SineSpectrum(std::vector<double>(85, 0.0))) == doctest::Approx(pi / 2).epsilon(1e-14));
  // sin x: (kappa^2 / 2) int cos^2 + int cos^4 / 4 = kappa^2 pi / 2 + 3 pi / 16.
  CHECK(integ.energy(modes({{1, 1.0}})) == doctest::Approx(0.25 * pi / 2 + 3 * pi / 16).epsilon(1e-14));
}

TEST_CASE("convergence to the ground state") {
  EvolveParams p = params(0.9, 400.0);
  const Trajectory tr = evolve::evolve(modes({{1, 0.5}}), p);
  CHECK(tr.terminal == Terminal::SteadyDetected);
  CHECK(tr.diagnostics.energy.front() == doctest::Approx(0.48797 * pi).epsilon(1e-5));
  CHECK(tr.diagnostics.energy.front() < pi / 2);
  const TorusGrid grid(p.n_points);
  const auto gs = ground::build_ground_state(0.9, grid);
  const TorusField u = numerics::synthesize(tr.final_state, grid);
  CHECK(tr.final_state.coeff(1) > 0.0);
  CHECK(max_diff(u, gs.field()) < 1e-6);
  CHECK(std::abs(diag::project_mode1(tr.final_state) - gs.spectrum().coeff(1)) < 1e-6);
}

TEST_CASE("second order in dt") {
  auto terminal = [](double dt) {
    EvolveParams p = params(0.4, 1.0);
    p.dt = dt;
    p.keep_snapshots = false;
    return evolve::evolve(modes({{1, 0.9}, {3, 0.3}}), p).final_state;
  };
  const SineSpectrum a = terminal(0.04);
  const SineSpectrum b = terminal(0.02);
  const SineSpectrum c = terminal(0.01);
  double dab = 0.0, dbc = 0.0;
  for (std::size_t i = 0; i < a.max_mode(); ++i) {
    dab = std::max(dab, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    dbc = std::max(dbc, std::abs(b.coeffs()[i] - c.coeffs()[i]));
  }
  CHECK(dab / dbc == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("entry and blow-up errors") {
  const TorusGrid grid(64);
  std::vector<double> v(64);
  for (std::size_t j = 0; j < 64; ++j) v[j] = std::cos(grid.x(j));
  try {
    evolve::evolve(TorusField(grid, v), params(1.0, 1.0));
    FAIL("expected a symmetry violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SymmetryViolation);
  }
  EvolveParams p = params(0.5, 5.0);
  p.dt = 0.1;
  try {
    evolve::evolve(modes({{1, 1e4}}), p);
    FAIL("expected blow-up");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BlowUp);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("field input matches spectrum input and runs are deterministic") {
  const TorusGrid grid(256);
  std::vector<double> v(256);
  for (std::size_t j = 0; j < 256; ++j) v[j] = 0.5 * std::sin(grid.x(j)) + 0.2 * std::sin(2 * grid.x(j));
  const Trajectory a = evolve::evolve(TorusField(grid, v), params(0.7, 1.0));
  const Trajectory b = evolve::evolve(modes({{1, 0.5}, {2, 0.2}}), params(0.7, 1.0));
  const Trajectory c = evolve::evolve(modes({{1, 0.5}, {2, 0.2}}), params(0.7, 1.0));
  for (std::size_t i = 0; i < b.final_state.max_mode(); ++i) {
    CHECK(std::abs(a.final_state.coeffs()[i] - b.final_state.coeffs()[i]) < 1e-14);
    CHECK(b.final_state.coeffs()[i] == c.final_state.coeffs()[i]);
  }
}

TEST_CASE("H1 distance is controlled by the energy gap near U_kappa") {
  const double kappa = 0.9;
  const TorusGrid grid(256);
  const auto gs = ground::build_ground_state(kappa, grid);
  const double e_ground = ground::energy(gs.field(), kappa);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int draw = 0; draw < 5; ++draw) {
    std::vector<double> phi(16);
    for (std::size_t m = 0; m < phi.size(); ++m) phi[m] = g(rng) / (1.0 + m * m);
    std::vector<double> ratios;
    for (double eps : {1e-2, 3e-3, 1e-3}) {
      std::vector<double> c(gs.spectrum().coeffs().begin(), gs.spectrum().coeffs().end());
      double h1 = 0.0;
      for (std::size_t m = 1; m <= phi.size(); ++m) {
        c[m - 1] += eps * phi[m - 1];
        h1 += (1.0 + double(m * m)) * eps * eps * phi[m - 1] * phi[m - 1];
      }
      const double gap = ground::energy(numerics::synthesize(SineSpectrum(c), grid), kappa) - e_ground;
      REQUIRE(gap > 0.0);
      ratios.push_back(std::sqrt(pi * h1) / std::sqrt(gap));
    }
    // Quadratic energy well: the ratio settles to a constant.
    CHECK(ratios[2] == doctest::Approx(ratios[1]).epsilon(0.05));
    CHECK(ratios[2] < 10.0);
  }
}

TEST_CASE("fractional steady states stay inside (-1, 1)") {
  for (double gamma : {0.5, 1.0, 1.5}) {
    EvolveParams p = params(0.5, 200.0);
    p.gamma = gamma;
    p.keep_snapshots = false;
    const Trajectory tr = evolve::evolve(modes({{1, 0.5}}), p);
    CAPTURE(gamma);
    CHECK(tr.terminal == Terminal::SteadyDetected);
    CHECK(tr.diagnostics.linf.back() < 1.0);
    CHECK(tr.diagnostics.linf.back() > 0.5);
  }
}

TEST_CASE("kappa > 1: the tail decays faster than the first mode") {
  EvolveParams p = params(2.0, 3.0);
  p.record_every = 1;
  const Trajectory tr = evolve::evolve(modes({{1, 1.0}, {3, 0.3}}), p);
  const auto& s = tr.diagnostics;
  const auto w = diag::usable_window(s.times, s.hi_mass, 1.0, 3.0);
  const auto tail = diag::fit_rate(s.times, s.hi_mass, diag::FitModel::Exponential, w);
  const auto head = diag::fit_rate(s.times, s.c1, diag::FitModel::Exponential, {1.0, 3.0});
  CHECK(tail.rate_or_exponent >= 9.0 - 0.2);
  CHECK(tail.rate_or_exponent > head.rate_or_exponent);
  CHECK(head.rate_or_exponent == doctest::Approx(3.0).epsilon(0.01));
}
