#include "aclab/oracle/ode.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace aclab::oracle {
namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

constexpr double kTol = 1e-13;

struct SteadyOde {
  double kappa2;
  void operator()(const State& s, State& ds, double) const {
    ds[0] = s[1];
    ds[1] = (s[0] * s[0] * s[0] - s[0]) / kappa2;
  }
};

auto stepper() { return odeint::make_controlled(kTol, kTol, odeint::runge_kutta_dopri5<State>()); }

State advance(const SteadyOde& ode, State s, double from, double to) {
  if (from == to) return s;
  const double dt = (to > from ? 1.0 : -1.0) * 1e-4;
  odeint::integrate_adaptive(stepper(), ode, s, from, to, dt);
  return s;
}

}  // namespace

std::vector<double> shoot_ground_state(double kappa, double N, double q, std::span<const double> xs) {
  const double pi = std::numbers::pi;
  const SteadyOde ode{kappa * kappa};
  std::vector<double> out(xs.size());
  const State start{0.0, std::sqrt(1.0 - q * q) / (std::numbers::sqrt2 * kappa)};
  const State peak{N, 0.0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    out[i] = x <= pi / 4 ? advance(ode, start, 0.0, x)[0] : advance(ode, peak, pi / 2, x)[0];
  }
  return out;
}

double first_return_time(double u0, double v0, double kappa, double escape, double t_max) {
  const SteadyOde ode{kappa * kappa};
  auto controlled = stepper();
  State s{u0, v0};
  double t = 0.0, dt = 1e-3 * kappa;
  // Locate sign changes of v from + to - (maxima of u); refine each by bisection
  // on re-integration from the bracketing step.
  std::array<double, 2> maxima{};
  int found = 0;
  while (t < t_max && found < 2) {
    const State prev = s;
    const double t_prev = t;
    double trial = dt;
    while (controlled.try_step(ode, s, t, trial) == odeint::fail) {
    }
    dt = trial;
    if (std::abs(s[0]) > escape) return -1.0;
    if (prev[1] > 0.0 && s[1] <= 0.0) {
      double lo = 0.0, hi = t - t_prev;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, t); ++it) {
        const double mid = 0.5 * (lo + hi);
        const State m = advance(ode, prev, t_prev, t_prev + mid);
        (m[1] > 0.0 ? lo : hi) = mid;
      }
      maxima[found++] = t_prev + 0.5 * (lo + hi);
    }
  }
  return found == 2 ? maxima[1] - maxima[0] : -1.0;
}

double escape_time(double u0, double v0, double kappa, double escape, double t_max) {
  const SteadyOde ode{kappa * kappa};
  auto controlled = stepper();
  State s{u0, v0};
  double t = 0.0, dt = 1e-3 * kappa;
  while (t < t_max) {
    double trial = dt;
    while (controlled.try_step(ode, s, t, trial) == odeint::fail) {
    }
    dt = trial;
    if (!std::isfinite(s[0]) || std::abs(s[0]) > escape) return t;
  }
  return -1.0;
}

}  // namespace aclab::oracle
