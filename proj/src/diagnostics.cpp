#include "aclab/diagnostics.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "aclab/error.hpp"

namespace aclab::diag {

using numerics::SineSpectrum;

namespace {

constexpr double kWindowSlack = 1e-9;
// Round-off allowance on the ratio in the log-convexity test; the sharp
// inequality is an equality for log-linear mass.
constexpr double kConvexityRoundoff = 1e-12;

std::size_t pow2_at_least(std::size_t n) {
  std::size_t p = 16;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

void DiagnosticSeries::push(double t, double m, double e, double a, double hi, double sup) {
  times.push_back(t);
  mass.push_back(m);
  energy.push_back(e);
  c1.push_back(a);
  hi_mass.push_back(hi);
  linf.push_back(sup);
}

std::pair<std::size_t, std::size_t> DiagnosticSeries::window(double t_lo, double t_hi) const {
  const auto first = std::lower_bound(times.begin(), times.end(), t_lo - kWindowSlack);
  const auto last = std::upper_bound(times.begin(), times.end(), t_hi + kWindowSlack);
  return {static_cast<std::size_t>(first - times.begin()),
          static_cast<std::size_t>(std::max(first, last) - times.begin())};
}

double project_mode1(const SineSpectrum& spec) { return spec.coeff(1); }

double project_high_mass(const SineSpectrum& spec) {
  double s = 0.0;
  const auto c = spec.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i) s += c[i] * c[i];
  return std::sqrt(std::numbers::pi * s);
}

RateFit fit_rate(std::span<const double> t, std::span<const double> y, FitModel model,
                 std::pair<double, double> window) {
  require(t.size() == y.size(), ErrorKind::Domain, "time and value series differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.first - kWindowSlack || t[i] > window.second + kWindowSlack) continue;
    require(y[i] > 0.0, ErrorKind::Domain,
            fmt::format("fit needs y > 0 on the window, got {} at t = {}", y[i], t[i]));
    if (model == FitModel::Algebraic) require(t[i] > 0.0, ErrorKind::Domain, "algebraic fit needs t > 0");
    xs.push_back(model == FitModel::Exponential ? t[i] : std::log(t[i]));
    ys.push_back(std::log(y[i]));
  }
  require(xs.size() >= kMinFitPoints, ErrorKind::Window,
          fmt::format("window [{}, {}] holds {} samples, need {}", window.first, window.second, xs.size(),
                      kMinFitPoints));

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0.0, ErrorKind::Window, "window has a single abscissa");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  RateFit fit;
  fit.window = window;
  fit.model = model;
  fit.rate_or_exponent = -slope;
  fit.prefactor = std::exp(intercept);
  fit.points = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double rel = std::expm1(intercept + slope * xs[i] - ys[i]);
    fit.residual = std::max(fit.residual, std::abs(rel));
  }
  fit.rejected = !(fit.residual <= kMaxFitResidual);
  return fit;
}

std::pair<double, double> usable_window(std::span<const double> t, std::span<const double> y, double t_lo,
                                        double t_hi, double floor) {
  double last = t_lo;
  for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
    if (t[i] < t_lo - kWindowSlack) continue;
    if (t[i] > t_hi + kWindowSlack) break;
    if (!(std::abs(y[i]) >= 100.0 * floor)) break;
    last = t[i];
  }
  return {t_lo, last};
}

ProfileEstimate extract_profile(const DiagnosticSeries& series, double kappa) {
  require(kappa >= 1.0, ErrorKind::Domain, fmt::format("profile extraction needs kappa >= 1, got {}", kappa));
  ProfileEstimate est;
  double peak = 0.0;
  for (double a : series.c1) peak = std::max(peak, std::abs(a));
  if (peak < 100.0 * kSignalFloor) {
    est.vanishing = true;
    return est;
  }

  const double rate = kappa * kappa - 1.0;
  std::vector<double> ts, amp;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    if (t < 1.0) continue;
    if (std::abs(series.c1[i]) < 100.0 * kSignalFloor) break;
    ts.push_back(t);
    amp.push_back(kappa > 1.0 ? series.c1[i] * std::exp(rate * t) : series.c1[i] * std::sqrt(t));
  }
  require(ts.size() >= 2 * kMinFitPoints, ErrorKind::Window,
          fmt::format("only {} usable samples past t = 1 for the profile fit", ts.size()));

  // Late half of the usable run, cut into four windows. Exponential
  // corrections (kappa > 1) are already negligible there; the kappa = 1
  // amplitude carries a 1/t correction, removed by fitting A + B/t.
  const std::size_t start = ts.size() / 2;
  const std::size_t len = (ts.size() - start) / 4;
  auto estimate = [&](std::size_t lo, std::size_t hi) {
    if (kappa > 1.0) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += amp[i];
      return s / static_cast<double>(hi - lo);
    }
    Eigen::MatrixXd a(hi - lo, 2);
    Eigen::VectorXd b(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      a(i - lo, 0) = 1.0;
      a(i - lo, 1) = ts[hi - 1] / ts[i];
      b(i - lo) = amp[i];
    }
    return Eigen::VectorXd(a.householderQr().solve(b))(0);
  };
  double lo_v = std::numeric_limits<double>::infinity(), hi_v = -lo_v;
  for (std::size_t w = 0; w < 4; ++w) {
    const double v = estimate(start + w * len, start + (w + 1) * len);
    lo_v = std::min(lo_v, v);
    hi_v = std::max(hi_v, v);
  }
  est.value = estimate(start, ts.size());
  est.stability = hi_v - lo_v;
  est.windows = 4;
  return est;
}

namespace {

std::size_t nearest_record(const std::vector<double>& times, double t) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const auto i = static_cast<std::size_t>(it - times.begin());
  return (t - times[i - 1] <= times[i] - t) ? i - 1 : i;
}

std::vector<double> log_mass(const DiagnosticSeries& series) {
  std::vector<double> lm(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    require(series.mass[i] > 0.0, ErrorKind::Domain, fmt::format("mass vanishes at t = {}", series.times[i]));
    lm[i] = std::log(series.mass[i]);
  }
  return lm;
}

// log of m(t_k) / (m(t_i)^{1-l} m(t_j)^l).
double log_excess(const DiagnosticSeries& s, const std::vector<double>& lm, std::size_t i, std::size_t k,
                  std::size_t j) {
  const double l = (s.times[k] - s.times[i]) / (s.times[j] - s.times[i]);
  return lm[k] - ((1.0 - l) * lm[i] + l * lm[j]);
}

}  // namespace

LogConvexityReport check_log_convexity(const DiagnosticSeries& series, double t1, double t2, double factor) {
  require(series.size() >= 2 && t1 < t2, ErrorKind::Domain, "log-convexity needs t1 < t2 inside the series");
  require(factor > 0.0, ErrorKind::Domain, "factor must be positive");
  const std::size_t i = nearest_record(series.times, t1);
  const std::size_t j = nearest_record(series.times, t2);
  require(i < j, ErrorKind::Domain, "t1 and t2 snap to the same record");
  const std::vector<double> lm = log_mass(series);
  LogConvexityReport rep;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = i + 1; k < j; ++k) {
    worst = std::max(worst, log_excess(series, lm, i, k, j));
    ++rep.points;
  }
  rep.worst_ratio = rep.points ? std::exp(worst) / factor : 0.0;
  rep.pass = rep.worst_ratio <= 1.0 + kConvexityRoundoff;
  return rep;
}

LogConvexityReport check_log_convexity_all(const DiagnosticSeries& series, double t_lo, double t_hi,
                                           const std::function<double(double)>& factor_of) {
  const auto [first, last] = series.window(t_lo, t_hi);
  const std::vector<double> lm = log_mass(series);
  LogConvexityReport rep;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < last; ++i) {
    for (std::size_t j = i + 2; j < last; ++j) {
      const double allowed = std::log(factor_of(series.times[j] - series.times[i]));
      for (std::size_t k = i + 1; k < j; ++k) {
        worst = std::max(worst, log_excess(series, lm, i, k, j) - allowed);
        ++rep.points;
      }
    }
  }
  rep.worst_ratio = rep.points ? std::exp(worst) : 0.0;
  rep.pass = rep.worst_ratio <= 1.0 + kConvexityRoundoff;
  return rep;
}

double fit_log_convexity_exponent(const DiagnosticSeries& series, double t_lo, double t_hi) {
  const auto [first, last] = series.window(t_lo, t_hi);
  const std::vector<double> lm = log_mass(series);
  double c = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    for (std::size_t j = i + 2; j < last; ++j) {
      const double scale = std::log1p(series.times[j] - series.times[i]);
      for (std::size_t k = i + 1; k < j; ++k) c = std::max(c, log_excess(series, lm, i, k, j) / scale);
    }
  }
  return c;
}

Eta0Report check_eta0_inequality(const SineSpectrum& spec, double gamma) {
  require(gamma > 0.0 && gamma <= 2.0, ErrorKind::Domain, fmt::format("gamma must lie in (0, 2], got {}", gamma));
  require(spec.is_finite(), ErrorKind::Domain, "spectrum has non-finite coefficients");
  const std::size_t modes = std::max<std::size_t>(spec.max_mode(), 1);
  // u^3 Lambda u has bandwidth 4M; the trapezoid rule is exact above that.
  const std::size_t n = pow2_at_least(4 * modes + 2);
  std::vector<double> c(spec.coeffs().begin(), spec.coeffs().end());
  std::vector<double> lc(c.size());
  for (std::size_t m = 1; m <= c.size(); ++m) lc[m - 1] = std::pow(static_cast<double>(m), gamma) * c[m - 1];
  std::vector<double> u(n), lu(n);
  numerics::sine_synthesis(c, u);
  numerics::sine_synthesis(lc, lu);
  double lhs = 0.0, quartic = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u3 = u[j] * u[j] * u[j];
    lhs += u3 * lu[j];
    quartic += u3 * u[j];
  }
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  Eta0Report rep;
  rep.lhs = lhs * h;
  rep.quartic = quartic * h;
  rep.ratio = rep.quartic > 0.0 ? rep.lhs / rep.quartic : 0.0;
  if (gamma == 2.0) {
    rep.eta0 = 0.75;
    rep.rhs = 0.75 * rep.quartic;
  }
  return rep;
}

ThetaOdeResult theta_ode_oracle(double theta0, double t0, const std::function<double(double)>& forcing,
                                double t_end) {
  require(theta0 >= 0.0 && std::isfinite(theta0), ErrorKind::Domain, "theta0 must be finite and >= 0");
  require(t0 >= 3.0, ErrorKind::Domain, fmt::format("t0 must be >= 3, got {}", t0));
  require(t_end >= 10.0 * t0, ErrorKind::Domain, "t_end must span at least a decade past t0");

  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  auto rhs = [&](const State& th, State& d, double t) { d[0] = -1.5 * th[0] * th[0] + forcing(t); };

  // Log-spaced output: 40 points per decade before the last decade, 400 in it.
  std::vector<double> times;
  const double decades = std::log10(t_end / t0);
  const auto coarse = static_cast<std::size_t>(std::ceil(40.0 * (decades - 1.0)));
  for (std::size_t i = 0; i < coarse; ++i) {
    times.push_back(t0 * std::pow(10.0, (decades - 1.0) * static_cast<double>(i) / static_cast<double>(coarse)));
  }
  const std::size_t fine = 400;
  for (std::size_t i = 0; i <= fine; ++i) {
    times.push_back(t_end / 10.0 * std::pow(10.0, static_cast<double>(i) / static_cast<double>(fine)));
  }

  ThetaOdeResult res;
  State th{theta0};
  auto stepper = odeint::make_dense_output(1e-24, 1e-13, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, th, times.begin(), times.end(), 1e-3,
                          [&](const State& s, double t) {
                            if (s[0] < -1e-12) {
                              throw Error(ErrorKind::Sign, fmt::format("theta = {} < 0 at t = {}", s[0], t));
                            }
                            res.samples.emplace_back(t, s[0]);
                          });

  // t theta(t) = theta* + B/t + C ln(t)/t + D/t^2 over the last decade.
  const std::size_t first = res.samples.size() - (fine + 1);
  const std::size_t rows = fine + 1;
  Eigen::MatrixXd a(rows, 4);
  Eigen::VectorXd b(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto [t, v] = res.samples[first + i];
    const double s = t_end / t;
    a(i, 0) = 1.0;
    a(i, 1) = s;
    a(i, 2) = s * std::log(t / t_end);
    a(i, 3) = s * s;
    b(i) = t * v;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  res.theta_star = coef(0);
  res.theta_end = res.samples.back().second;
  for (std::size_t i = first; i < res.samples.size(); ++i) {
    const auto [t, v] = res.samples[i];
    res.remainder_bound = std::max(res.remainder_bound, std::abs(v - res.theta_star / t) * t * t / std::log(t));
  }
  for (const auto& [t, v] : res.samples) res.max_t2_theta = std::max(res.max_t2_theta, t * t * v);
  return res;
}

double profile_remainder(const SineSpectrum& spec, double t, double beta) {
  require(t > 0.0, ErrorKind::Domain, "profile remainder needs t > 0");
  const double d = spec.coeff(1) - beta / std::sqrt(t);
  const double hi = project_high_mass(spec);
  return std::sqrt(std::numbers::pi * d * d + hi * hi);
}

}  // namespace aclab::diag
