#include "aclab/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aclab/error.hpp"
#include "aclab/numerics/quadrature.hpp"
#include "aclab/numerics/roots.hpp"

namespace aclab::ground {
namespace {

using numerics::integrate;
using numerics::TorusField;
using numerics::TorusGrid;
using std::numbers::pi;

constexpr double kQuadTol = 1e-15;
constexpr double kAngleTol = 4e-16;
const double kSqrt2 = std::numbers::sqrt2;

// With q = 1 - N^2 the radicand 2 - N^2(1 + sin^2 t) is cos^2 t + q(1 + sin^2 t).
// The lower half of the angle range is integrated in t, the upper half in
// the complementary angle c = pi/2 - t, where the radicand is
// sin^2 c + q(1 + cos^2 c) and the near-singular peak sits at c = 0.
double lower_integrand(double q, double t) {
  const double s = std::sin(t), c = std::cos(t);
  return 1.0 / std::sqrt(c * c + q * (1.0 + s * s));
}

double upper_integrand(double q, double c) {
  const double s = std::sin(c), k = std::cos(c);
  return 1.0 / std::sqrt(s * s + q * (1.0 + k * k));
}

double lower_partial(double q, double phi) {
  return integrate([q](double t) { return lower_integrand(q, t); }, 0.0, phi, kQuadTol);
}

double upper_partial(double q, double chi) {
  return integrate([q](double c) { return upper_integrand(q, c); }, 0.0, chi, kQuadTol);
}

void check_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    std::ostringstream msg;
    msg << "kappa must lie in (0, 1), got " << kappa;
    throw Error(ErrorKind::Domain, msg.str());
  }
}

double fourth_order_derivative(std::span<const double> u, double h, std::size_t j) {
  const std::size_t n = u.size();
  auto at = [&](std::ptrdiff_t k) { return u[static_cast<std::size_t>((static_cast<std::ptrdiff_t>(j) + k + static_cast<std::ptrdiff_t>(n)) % static_cast<std::ptrdiff_t>(n))]; };
  return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
}

double potential_integral(const TorusField& field) {
  double s = 0.0;
  for (double v : field.values()) {
    const double w = 1.0 - v * v;
    s += 0.25 * w * w;
  }
  return s * field.grid().spacing();
}

}  // namespace

double eval_g_complement(double q) {
  require(q > 0.0 && q <= 1.0, ErrorKind::Domain, "q = 1 - N^2 must lie in (0, 1]");
  return lower_partial(q, pi / 4) + upper_partial(q, pi / 4);
}

double eval_g(double N) {
  if (!(N >= 0.0 && N < 1.0)) {
    std::ostringstream msg;
    msg << "g(N) requires 0 <= N < 1, got " << N;
    throw Error(ErrorKind::Domain, msg.str());
  }
  return eval_g_complement((1.0 - N) * (1.0 + N));
}

PeakValue solve_peak(double kappa) {
  check_kappa(kappa);
  const double target = pi / (2.0 * kSqrt2 * kappa);
  // g decreases in q; search log q so that q ~ e^{-pi/kappa} stays reachable.
  auto f = [target](double log_q) { return eval_g_complement(std::exp(log_q)) - target; };
  numerics::RootOptions opts;
  opts.xtol = 1e-15;
  opts.ftol = 1e-14 * target;
  const double log_q = numerics::find_root(f, std::log(1e-300), 0.0, opts);

  PeakValue p;
  p.kappa = kappa;
  p.q = std::exp(log_q);
  p.N = std::sqrt(1.0 - p.q);
  p.residual = std::abs(eval_g_complement(p.q) - target) / target;
  return p;
}

PeakBounds peak_bounds(const PeakValue& peak) {
  PeakBounds b;
  const double N = peak.N;
  b.gap = peak.one_minus_N();
  b.applicable = N > std::sqrt(2.0 / 3.0);
  const double pre = N * N / (2.0 + 2.0 * N);
  b.lower = pre * std::exp(-N * pi / peak.kappa);
  b.upper = pre * std::exp(2.0 * kSqrt2 - 2.0 * N / peak.kappa);
  return b;
}

double min_resolvable_kappa(std::size_t n_points) {
  return 0.03 * 2048.0 / static_cast<double>(n_points);
}

double quarter_value(const PeakValue& peak, double x) {
  const double q = peak.q;
  const double scale = kSqrt2 * peak.kappa;
  const double x_mid = scale * lower_partial(q, pi / 4);
  numerics::RootOptions opts;
  opts.xtol = kAngleTol;
  if (x <= x_mid) {
    if (x <= 0.0) return 0.0;
    const double target = x / scale;
    const double phi =
        numerics::find_root([&](double p) { return lower_partial(q, p) - target; }, 0.0, pi / 4, opts);
    return peak.N * std::sin(phi);
  }
  const double target = (pi / 2 - x) / scale;
  if (target <= 0.0) return peak.N;
  // The two halves meet at pi/4 only up to the peak residual; widen slightly.
  const double chi = numerics::find_root([&](double c) { return upper_partial(q, c) - target; }, 0.0,
                                         pi / 4 + 0.05, opts);
  return peak.N * std::cos(chi);
}

GroundState::GroundState(PeakValue peak, TorusField field, numerics::SineSpectrum spectrum,
                         std::vector<QuarterSample> quarter, double energy, double residual)
    : peak_(peak),
      field_(std::move(field)),
      spectrum_(std::move(spectrum)),
      quarter_(std::move(quarter)),
      energy_(energy),
      residual_(residual) {}

double GroundState::value_at(double x) const {
  x = std::remainder(x, 2.0 * pi);  // [-pi, pi]
  double sign = 1.0;
  if (x < 0.0) {
    x = -x;
    sign = -1.0;
  }
  if (x > pi / 2) x = pi - x;
  return sign * quarter_value(peak_, x);
}

GroundState build_ground_state(double kappa, const TorusGrid& grid) {
  check_kappa(kappa);
  const double kmin = min_resolvable_kappa(grid.size());
  if (kappa < kmin) {
    std::ostringstream msg;
    msg << "kappa=" << kappa << " is below the resolvable limit " << kmin << " for n_points=" << grid.size()
        << "; use a larger n_points (>= " << static_cast<std::size_t>(std::ceil(0.03 * 2048 / kappa))
        << ")";
    throw Error(ErrorKind::Domain, msg.str());
  }
  const PeakValue peak = solve_peak(kappa);

  const std::size_t n = grid.size();
  const std::size_t zero = grid.origin();
  const std::size_t quarter_len = n / 4 + 1;  // x = 0 .. pi/2 inclusive
  std::vector<QuarterSample> quarter(quarter_len);
  for (std::size_t k = 0; k < quarter_len; ++k) {
    const double x = grid.x(zero + k);
    quarter[k] = {x, k == 0 ? 0.0 : (k + 1 == quarter_len ? peak.N : quarter_value(peak, x))};
  }

  // Odd reflection about 0, even reflection about pi/2.
  std::vector<double> values(n, 0.0);
  for (std::size_t k = 0; k < quarter_len; ++k) {
    const double u = quarter[k].u;
    values[zero + k] = u;        // x
    values[(n - k) % n] = u;     // pi - x
    values[zero - k] = -u;       // -x
    if (k > 0) values[k] = -u;   // -pi + x
  }
  TorusField field(grid, std::move(values));
  numerics::SineSpectrum spectrum = numerics::sine_transform(field);

  const double residual = pde_residual(field, kappa);
  if (!(residual < kResidualThreshold)) {
    // Report where the residual concentrates.
    const auto d2 = numerics::spectral_derivative(spectrum, 2, grid);
    std::ostringstream msg;
    msg.precision(3);
    msg << "PDE residual " << residual << " exceeds " << kResidualThreshold << "; profile:";
    for (std::size_t k = 0; k < quarter_len; k += std::max<std::size_t>(1, quarter_len / 8)) {
      const std::size_t j = zero + k;
      const double u = field[j];
      msg << " x=" << grid.x(j) << ":" << std::abs(kappa * kappa * d2[j] + u - u * u * u);
    }
    throw Error(ErrorKind::ConstructionFailure, msg.str());
  }
  const double e = energy(field, kappa);
  return GroundState(peak, std::move(field), std::move(spectrum), std::move(quarter), e, residual);
}

double pde_residual(const TorusField& field, double kappa) {
  const auto spec = numerics::sine_transform(field);
  const auto d2 = numerics::spectral_derivative(spec, 2, field.grid());
  double worst = 0.0;
  for (std::size_t j = 0; j < field.size(); ++j) {
    const double u = field[j];
    worst = std::max(worst, std::abs(kappa * kappa * d2[j] + u - u * u * u));
  }
  return worst;
}

double energy(const TorusField& field, double kappa) {
  require(kappa > 0.0, ErrorKind::Domain, "energy requires kappa > 0");
  double kinetic = 0.0;
  if (field.oddness_defect() <= numerics::kSymmetryTolerance) {
    const auto spec = numerics::sine_transform(field);
    double s = 0.0;
    for (std::size_t m = 1; m <= spec.max_mode(); ++m) {
      const double c = spec.coeff(m);
      s += static_cast<double>(m * m) * c * c;
    }
    kinetic = 0.5 * kappa * kappa * pi * s;
  } else {
    const double h = field.grid().spacing();
    double s = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) {
      const double d = fourth_order_derivative(field.values(), h, j);
      s += d * d;
    }
    kinetic = 0.5 * kappa * kappa * s * h;
  }
  return kinetic + potential_integral(field);
}

double quarter_energy_form(const TorusField& field) {
  double s = 0.0;
  for (double v : field.values()) {
    const double v2 = v * v;
    s += (1.0 - v2) * (1.0 + v2);
  }
  return 0.25 * s * field.grid().spacing();
}

EnergyIdentityReport energy_identities(const GroundState& gs) {
  const PeakValue& p = gs.peak();
  const double q = p.q, N2 = p.N * p.N;
  const double scale = kSqrt2 * p.kappa;

  EnergyIdentityReport r;
  r.definition = energy(gs.field(), p.kappa);

  // x(phi) = scale * G(phi) on the lower half, x(chi) = pi/2 - scale * H(chi) on the upper.
  const double lower = integrate(
      [&](double t) {
        const double s2 = std::sin(t) * std::sin(t);
        return (1.0 - N2 * N2 * s2 * s2) * lower_integrand(q, t);
      },
      0.0, pi / 4, kQuadTol);
  const double upper = integrate(
      [&](double c) {
        const double s2 = std::sin(c) * std::sin(c), k2 = 1.0 - s2;
        // 1 - N^4 cos^4 c = (q + N^2 sin^2 c)(1 + N^2 cos^2 c), free of cancellation
        return (q + N2 * s2) * (1.0 + N2 * k2) * upper_integrand(q, c);
      },
      0.0, pi / 4, kQuadTol);
  r.quarter = scale * (lower + upper);

  double s = 0.0;
  for (double v : gs.field().values()) {
    const double w = 1.0 - v * v;
    s += 0.5 * w * w;
  }
  r.second_form = s * gs.field().grid().spacing() - 0.25 * q * q * 2.0 * pi;

  r.max_discrepancy = std::max({std::abs(r.definition - r.quarter), std::abs(r.definition - r.second_form),
                                std::abs(r.quarter - r.second_form)});
  if (!(r.max_discrepancy <= kIdentityTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "energy forms disagree at kappa=" << p.kappa << ": definition=" << r.definition
        << " quarter=" << r.quarter << " second=" << r.second_form;
    throw Error(ErrorKind::IdentityViolation, msg.str());
  }
  return r;
}

}  // namespace aclab::ground
