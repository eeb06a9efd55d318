#pragma once

#include <span>
#include <vector>

namespace aclab::oracle {

/// Reference U_kappa on [0, pi/2] by integrating kappa^2 u'' = u^3 - u with
/// Dormand-Prince at tolerance 1e-13: forward from (u, u') = (0, sqrt(1-q^2)/(sqrt2 kappa))
/// up to pi/4 and backward from (N, 0) at pi/2 down to pi/4. Splitting at
/// pi/4 keeps the exponential sensitivity near the plateau u ~ 1 bounded.
/// `xs` must lie in [0, pi/2].
std::vector<double> shoot_ground_state(double kappa, double N, double q, std::span<const double> xs);

/// Time for the orbit of u' = v, kappa^2 v' = u^3 - u through (u0, v0) to
/// return to its starting point, measured between consecutive maxima of u.
/// Returns a negative value when |u| exceeds `escape` first (unbounded orbit).
double first_return_time(double u0, double v0, double kappa, double escape = 3.0, double t_max = 1e3);

/// First time |u| exceeds `escape` along the same orbit, or a negative value
/// if it stays below up to t_max.
double escape_time(double u0, double v0, double kappa, double escape = 3.0, double t_max = 1e3);

}  // namespace aclab::oracle
