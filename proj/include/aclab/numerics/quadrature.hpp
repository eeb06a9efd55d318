#pragma once

#include <cstddef>
#include <functional>

namespace aclab::numerics {

struct QuadratureOptions {
  double tol = 1e-13;
  std::size_t max_subdivisions = 20000;
};

/// Adaptive 15-point Gauss-Legendre quadrature of f over [a, b].
///
/// Each panel is estimated once as a whole and once as two halves; the
/// panel with the largest discrepancy is bisected until the summed
/// discrepancy drops below tol * max(1, |Q|). Integrands must be finite on
/// the closed interval: endpoint singularities have to be removed by a
/// change of variables before calling.
///
/// Throws Error(QuadratureFailure) naming the worst panel when the
/// subdivision budget runs out.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts);

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  return integrate(f, a, b, QuadratureOptions{tol});
}

/// Single application of the 15-point rule on [a, b]; exact for
/// polynomials of degree <= 29.
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

}  // namespace aclab::numerics
