#include "aclab/evolution.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aclab/error.hpp"

namespace aclab::evolve {

using numerics::SineSpectrum;

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// phi1(z) = (e^z - 1) / z and phi2(z) = (e^z - 1 - z) / z^2, by series near
// z = 0 where the closed forms cancel.
double phi1(double z) {
  if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-3) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
  return (std::expm1(z) - z) / (z * z);
}

double sum_squares(std::span<const double> c, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < c.size(); ++i) s += c[i] * c[i];
  return s;
}

}  // namespace

std::string_view to_string(FilterKind kind) noexcept {
  switch (kind) {
    case FilterKind::None: return "none";
    case FilterKind::OddProjection: return "odd_projection";
    case FilterKind::OddBandGap: return "odd_band_gap";
  }
  return "none";
}

FilterKind parse_filter(std::string_view name) {
  if (name == "none") return FilterKind::None;
  if (name == "odd" || name == "odd_projection") return FilterKind::OddProjection;
  if (name == "bandgap" || name == "odd_band_gap") return FilterKind::OddBandGap;
  throw Error(ErrorKind::Usage, fmt::format("unknown filter '{}' (none | odd | bandgap)", name));
}

std::string_view to_string(Terminal terminal) noexcept {
  return terminal == Terminal::SteadyDetected ? "steady_detected" : "reached_t_end";
}

void EvolveParams::validate() const {
  require(std::isfinite(kappa) && kappa > 0.0, ErrorKind::Domain, fmt::format("kappa must be > 0, got {}", kappa));
  require(gamma > 0.0 && gamma <= 2.0, ErrorKind::Domain, fmt::format("gamma must lie in (0, 2], got {}", gamma));
  require(dt > 0.0 && dt <= 0.1, ErrorKind::Domain, fmt::format("dt must lie in (0, 0.1], got {}", dt));
  require(std::isfinite(t_end) && t_end > 0.0, ErrorKind::Domain, fmt::format("t_end must be > 0, got {}", t_end));
  require(n_points >= 16 && is_power_of_two(n_points), ErrorKind::Domain,
          fmt::format("n_points must be a power of two >= 16, got {}", n_points));
  require(record_every >= 1, ErrorKind::Domain, "record_every must be positive");
  require(steady_tol > 0.0, ErrorKind::Domain, "steady_tol must be positive");
  require(steady_checks >= 1, ErrorKind::Domain, "steady_checks must be positive");
}

double fractional_multiplier(std::size_t m, double kappa, double gamma) {
  require(m >= 1, ErrorKind::Domain, "mode index must be >= 1");
  return kappa * kappa * std::pow(static_cast<double>(m), gamma);
}

SineSpectrum apply_filter(const SineSpectrum& state, FilterKind kind) {
  if (kind != FilterKind::OddBandGap) return state;
  std::vector<double> c(state.coeffs().begin(), state.coeffs().end());
  for (std::size_t m = 2; m <= c.size(); m += 2) c[m - 1] = 0.0;
  return SineSpectrum(std::move(c));
}

Integrator::Integrator(const EvolveParams& params) : params_(params), padded_(2 * params.n_points) {
  params_.validate();
  const std::size_t modes = params_.modes();
  decay_.resize(modes);
  phi1_.resize(modes);
  phi2_.resize(modes);
  symbol_.resize(modes);
  for (std::size_t m = 1; m <= modes; ++m) {
    symbol_[m - 1] = fractional_multiplier(m, params_.kappa, params_.gamma);
    const double z = (1.0 - symbol_[m - 1]) * params_.dt;
    decay_[m - 1] = std::exp(z);
    phi1_[m - 1] = params_.dt * phi1(z);
    phi2_[m - 1] = params_.dt * phi2(z);
  }
}

std::vector<double> Integrator::samples(std::span<const double> coeffs) const {
  std::vector<double> u(padded_);
  numerics::sine_synthesis(coeffs, u);
  return u;
}

std::vector<double> Integrator::cubic(std::span<const double> coeffs) const {
  std::vector<double> u = samples(coeffs);
  for (double& v : u) v = v * v * v;
  std::vector<double> out(params_.modes());
  numerics::sine_analysis(u, out);
  return out;
}

SineSpectrum Integrator::step(const SineSpectrum& state) const {
  const std::size_t modes = params_.modes();
  std::vector<double> c(modes, 0.0);
  std::copy_n(state.coeffs().begin(), std::min(modes, state.max_mode()), c.begin());

  // Nonlinear term N(c) = -[u^3].
  auto nonlinear = [&](const std::vector<double>& v) {
    if (params_.disable_cubic) return std::vector<double>(modes, 0.0);
    std::vector<double> n = cubic(v);
    for (double& x : n) x = -x;
    return n;
  };

  const std::vector<double> n0 = nonlinear(c);
  std::vector<double> a(modes);
  for (std::size_t i = 0; i < modes; ++i) a[i] = decay_[i] * c[i] + phi1_[i] * n0[i];
  const std::vector<double> n1 = nonlinear(a);
  for (std::size_t i = 0; i < modes; ++i) a[i] += phi2_[i] * (n1[i] - n0[i]);

  SineSpectrum next = apply_filter(SineSpectrum(std::move(a)), params_.filter);
  require(next.is_finite(), ErrorKind::BlowUp, "non-finite sine coefficients");
  return next;
}

double Integrator::energy(const SineSpectrum& state) const {
  const std::span<const double> c = state.coeffs();
  const std::size_t top = std::min(c.size(), params_.modes());
  double gradient = 0.0;
  for (std::size_t m = 1; m <= top; ++m) gradient += symbol_[m - 1] * c[m - 1] * c[m - 1];
  gradient *= 0.5 * std::numbers::pi;
  // (1 - u^2)^2 has bandwidth 4M < 2n, so the trapezoid rule is exact.
  const std::vector<double> u = samples(c.first(top));
  double potential = 0.0;
  for (double v : u) {
    const double w = 1.0 - v * v;
    potential += 0.25 * w * w;
  }
  potential *= 2.0 * std::numbers::pi / static_cast<double>(padded_);
  return gradient + potential;
}

SineSpectrum step(const SineSpectrum& state, const EvolveParams& params) {
  return Integrator(params).step(state);
}

Trajectory evolve(const numerics::TorusField& u0, const EvolveParams& params) {
  // Resample through the sine transform; rejects non-odd input.
  return evolve(numerics::sine_transform(u0), params);
}

Trajectory evolve(const SineSpectrum& u0, const EvolveParams& params) {
  params.validate();
  require(u0.is_finite(), ErrorKind::Domain, "initial state has non-finite coefficients");
  const Integrator integrator(params);
  const std::size_t modes = params.modes();

  std::vector<double> c0(modes, 0.0);
  std::copy_n(u0.coeffs().begin(), std::min(modes, u0.max_mode()), c0.begin());
  SineSpectrum state = apply_filter(SineSpectrum(std::move(c0)), params.filter);

  Trajectory traj;
  traj.params = params;
  const auto total_steps = static_cast<std::size_t>(std::llround(std::ceil(params.t_end / params.dt - 1e-9)));
  const bool detect = params.steady_detection_enabled();

  SineSpectrum previous;
  double previous_t = 0.0;
  std::size_t quiet = 0;

  auto record = [&](std::size_t k) {
    const double t = static_cast<double>(k) * params.dt;
    const std::span<const double> c = state.coeffs();
    const double mass = std::numbers::pi * sum_squares(c, 0);
    const std::vector<double> u = integrator.samples(c);
    double sup = 0.0;
    for (double v : u) sup = std::max(sup, std::abs(v));
    traj.diagnostics.push(t, mass, integrator.energy(state), diag::project_mode1(state),
                          diag::project_high_mass(state), sup);
    if (params.keep_snapshots) traj.snapshots.push_back({t, state});
    if (k > 0 && detect) {
      double diff = 0.0;
      for (std::size_t i = 0; i < modes; ++i) {
        const double d = c[i] - previous.coeffs()[i];
        diff += d * d;
      }
      const double rate = std::sqrt(std::numbers::pi * diff) / (t - previous_t);
      quiet = rate < params.steady_tol ? quiet + 1 : 0;
    }
    previous = state;
    previous_t = t;
  };

  record(0);
  std::size_t k = 0;
  while (k < total_steps) {
    try {
      state = integrator.step(state);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BlowUp) throw;
      throw Error(ErrorKind::BlowUp, fmt::format("non-finite state at step {} (t = {:.6g})", k + 1,
                                                 static_cast<double>(k + 1) * params.dt));
    }
    ++k;
    if (k % params.record_every == 0 || k == total_steps) {
      record(k);
      if (detect && quiet >= params.steady_checks) {
        traj.terminal = Terminal::SteadyDetected;
        break;
      }
    }
  }
  traj.steps = k;
  traj.final_time = static_cast<double>(k) * params.dt;
  traj.final_state = state;
  return traj;
}

}  // namespace aclab::evolve
