#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "aclab/error.hpp"
#include "aclab/ground_state.hpp"
#include "aclab/oracle/ode.hpp"
#include "aclab/steady_catalog.hpp"
#include "doctest.h"

using namespace aclab;
using namespace aclab::steady;
using numerics::TorusField;
using numerics::TorusGrid;
using std::numbers::pi;

namespace {
TorusField sample(const TorusGrid& g, auto f) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
  return TorusField(g, std::move(v));
}
}  // namespace

TEST_CASE("count_states") {
  CHECK(count_states(0.5) == 1);
  CHECK(count_states(0.26) == 3);
  CHECK(count_states(1.7) == 0);
  CHECK(count_states(1.0) == 0);
  CHECK(count_states(0.25) == 3);  // 1/4 <= 0.25 < 1/3
  CHECK(count_states(0.2) == 4);
  CHECK(count_states(0.99) == 1);
  CHECK_THROWS_AS(count_states(0.0), Error);
  for (int i = 1; i < 500; ++i) {
    const double kappa = i / 500.0;
    const int m = count_states(kappa);
    CHECK(1.0 / (m + 1) <= kappa);
    CHECK(kappa < 1.0 / m);
  }
}

TEST_CASE("catalog at kappa=0.9 is the ground state") {
  const TorusGrid grid(512);
  const auto cat = build_catalog(0.9, grid);
  REQUIRE(cat.m == 1);
  const auto gs = ground::build_ground_state(0.9, grid);
  const auto& r = cat.replicas.front();
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(r.field[j] == gs.field()[j]);
  CHECK(r.energy == gs.energy());
}

TEST_CASE("catalog at kappa=0.26: replicas, energies, periods") {
  const TorusGrid grid;
  const auto cat = build_catalog(0.26, grid);
  REQUIRE(cat.m == 3);
  REQUIRE(cat.replicas.size() == 3);

  const auto u052 = ground::build_ground_state(0.52, grid);
  const auto& r2 = cat.replicas[1];
  CHECK(r2.j == 2);
  CHECK(r2.period == doctest::Approx(pi));
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); i += 3) worst = std::max(worst, std::abs(r2.field[i] - u052.value_at(2.0 * grid.x(i))));
  CHECK(worst < 1e-10);
  CHECK(std::abs(r2.energy - u052.energy()) < 1e-8);

  for (const auto& r : cat.replicas) {
    const auto gs = ground::build_ground_state(r.j * 0.26, grid);
    CHECK(std::abs(r.energy - gs.energy()) < 1e-8);
    CHECK(r.residual < 1e-8);
  }
  CHECK(cat.replicas[0].energy < cat.replicas[1].energy);
  CHECK(cat.replicas[1].energy < cat.replicas[2].energy);
}

TEST_CASE("catalog rejects unresolved kappa") {
  try {
    build_catalog(0.05, TorusGrid(256));
    FAIL("expected resolution error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resolution);
    CHECK(std::string(e.what()).find("j=1") != std::string::npos);
  }
  CHECK_THROWS_AS(build_catalog(1.0), Error);
}

TEST_CASE("classify_orbit: the three regimes of C") {
  const auto zero = classify_orbit(0.0, 0.0, 0.5);
  CHECK(zero.kind == OrbitKind::Zero);
  CHECK(zero.C == 0.0);

  const double kappa = 0.5;
  const double u0 = std::tanh(1.0 / (std::sqrt(2.0) * kappa));
  const double v0 = (1.0 - u0 * u0) / (std::sqrt(2.0) * kappa);
  const auto front = classify_orbit(u0, v0, kappa);
  CHECK(front.kind == OrbitKind::HeteroclinicOrConstant);
  CHECK(std::abs(front.C - 0.5) < 1e-12);
  CHECK(classify_orbit(1.0, 0.0, 0.7).kind == OrbitKind::HeteroclinicOrConstant);

  const auto per = classify_orbit(0.3, 0.0, 0.5);
  CHECK(per.kind == OrbitKind::Periodic);
  CHECK(per.C == doctest::Approx(0.08595).epsilon(1e-14));
  CHECK(*per.amplitude == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(*per.period == doctest::Approx(4.0 * std::sqrt(2.0) * 0.5 * ground::eval_g(0.3)).epsilon(1e-13));
  CHECK(std::abs(*per.period - oracle::first_return_time(0.3, 0.0, 0.5)) < 1e-6);

  CHECK(classify_orbit(0.0, 2.0, 0.5).kind == OrbitKind::Unbounded);  // C = 1
  CHECK(classify_orbit(1.6, 0.0, 0.5).kind == OrbitKind::Unbounded);  // C < 0
  CHECK(classify_orbit(1.3, 0.0, 0.5).kind == OrbitKind::Unbounded);  // 0 < C < 1/2, outer branch
}

TEST_CASE("classify_orbit flags near-boundary orbits") {
  const auto oc = classify_orbit(std::sqrt(1e-9), 0.0, 0.5);  // C ~ 1e-9
  CHECK(oc.kind == OrbitKind::Periodic);
  CHECK(oc.near_boundary);
  CHECK_FALSE(classify_orbit(0.3, 0.0, 0.5).near_boundary);
}

TEST_CASE("minimal_period: harmonic limit, ground-state period, time of flight") {
  const double kappa = 0.5;
  CHECK(minimal_period(1e-14, kappa) == doctest::Approx(2.0 * pi * kappa).epsilon(1e-12));
  const auto peak = ground::solve_peak(kappa);
  const double C = peak.N * peak.N - 0.5 * std::pow(peak.N, 4);
  CHECK(std::abs(minimal_period(C, kappa) - 2.0 * pi) < 1e-9);
  CHECK(std::abs(minimal_period(0.08595, kappa) - oracle::first_return_time(0.3, 0.0, kappa)) < 1e-6);
  CHECK_THROWS_AS(minimal_period(0.5, kappa), Error);
  CHECK_THROWS_AS(minimal_period(0.0, kappa), Error);
}

TEST_CASE("C is conserved along the ground state orbit") {
  const double kappa = 0.4;
  const auto gs = ground::build_ground_state(kappa, TorusGrid(1024));
  const auto du = numerics::spectral_derivative(gs.spectrum(), 1, gs.field().grid());
  const double C0 = conserved_quantity(0.0, du[gs.field().grid().origin()], kappa);
  for (std::size_t j = 0; j < gs.field().size(); ++j) {
    CHECK(std::abs(classify_orbit(gs.field()[j], du[j], kappa).C - C0) < 1e-9);
  }
  CHECK(classify_orbit(0.0, du[gs.field().grid().origin()], kappa).kind == OrbitKind::Periodic);
}

TEST_CASE("spectral gap: zero background and ground states") {
  const TorusGrid grid(512);
  const auto zero = sample(grid, [](double) { return 0.0; });
  CHECK(spectral_gap(zero, 1.0, 64) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(spectral_gap(zero, 1.5, 64) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(spectral_gap(zero, 0.5, 64) == doctest::Approx(-0.75).epsilon(1e-12));

  const auto gs9 = ground::build_ground_state(0.9);
  CHECK(spectral_gap(gs9, 256) > 0.0);
  const auto gs5 = ground::build_ground_state(0.5);
  const double g256 = spectral_gap(gs5, 256), g512 = spectral_gap(gs5, 512);
  CHECK(g256 > 0.0);
  CHECK(std::abs(g256 - g512) < 1e-6);
  CHECK_THROWS_AS(spectral_gap(gs5, 32), Error);
}

TEST_CASE("energy monotonicity across kappa") {
  double prev = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const double e = ground::build_ground_state(0.05 * i).energy();
    CHECK(e > prev);
    CHECK(e < pi / 2);
    prev = e;
  }
  CHECK(ground::build_ground_state(0.999).energy() == doctest::Approx(pi / 2).epsilon(1e-3));
}

TEST_CASE("basin criterion") {
  const TorusGrid grid(256);
  const auto half_sin = sample(grid, [](double x) { return 0.5 * std::sin(x); });
  const auto v = basin_criterion(half_sin, 0.3);
  CHECK(v.applicable);
  CHECK(v.energy == doctest::Approx(ground::energy(half_sin, 0.3)));
  CHECK(v.threshold == doctest::Approx(ground::build_ground_state(0.6).energy()).epsilon(1e-10));
  CHECK(v.below_threshold == (v.energy < v.threshold));

  const auto zero = sample(grid, [](double) { return 0.0; });
  const auto vz = basin_criterion(zero, 0.2);
  CHECK(vz.energy == doctest::Approx(pi / 2));
  CHECK_FALSE(vz.below_threshold);  // E0(0.4) < pi/2

  const auto na = basin_criterion(half_sin, 0.9);
  CHECK_FALSE(na.applicable);
  CHECK(std::string(na.note).find("not applicable") != std::string::npos);

  CHECK_THROWS_AS(basin_criterion(sample(grid, [](double x) { return std::cos(x); }), 0.3), Error);
}
