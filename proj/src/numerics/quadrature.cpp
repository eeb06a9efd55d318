#include "aclab/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "aclab/error.hpp"

namespace aclab::numerics {
namespace {

constexpr int kOrder = 15;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Newton iteration on P_n from the Chebyshev-like initial guess.
Rule make_rule() {
  Rule r;
  const int n = kOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel estimate(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double whole = gauss_legendre_15(f, a, b);
  const double halves = gauss_legendre_15(f, a, mid) + gauss_legendre_15(f, mid, b);
  return {a, b, halves, std::abs(halves - whole)};
}

}  // namespace

double gauss_legendre_15(const std::function<double(double)>& f, double a, double b) {
  const Rule& r = rule();
  const double half = 0.5 * (b - a);
  const double centre = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < kOrder; ++i) sum += r.weights[i] * f(centre + half * r.nodes[i]);
  return half * sum;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  require(a <= b, ErrorKind::Domain, "integration bounds must satisfy a <= b");
  require(opts.tol > 0.0, ErrorKind::Domain, "quadrature tolerance must be positive");
  if (a == b) return 0.0;

  std::priority_queue<Panel> panels;
  panels.push(estimate(f, a, b));
  double total = panels.top().value;
  double total_error = panels.top().error;

  std::size_t splits = 0;
  while (total_error > opts.tol * std::max(1.0, std::abs(total))) {
    if (!std::isfinite(total)) {
      throw Error(ErrorKind::QuadratureFailure, "integrand produced a non-finite value");
    }
    const Panel worst = panels.top();
    if (splits >= opts.max_subdivisions || worst.b - worst.a <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                                       std::max(std::abs(worst.a), std::abs(worst.b))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "no convergence after " << splits << " subdivisions; worst interval [" << worst.a << ", "
          << worst.b << "] with error estimate " << worst.error;
      throw Error(ErrorKind::QuadratureFailure, msg.str());
    }
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = estimate(f, worst.a, mid);
    const Panel right = estimate(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++splits;
  }

  // Re-sum to shed the drift of the running updates.
  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

}  // namespace aclab::numerics
