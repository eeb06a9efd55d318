#pragma once

#include <functional>

namespace aclab::numerics {

struct RootOptions {
  double xtol = 1e-14;  // stop once the bracket is this narrow
  double ftol = 0.0;    // or once |f| is this small
  int max_iter = 400;
};

/// Bracketed root of a continuous monotone function. Secant steps are taken
/// while they land strictly inside the bracket and keep halving it at least
/// every other step; otherwise the step falls back to bisection, so the
/// result always lies in [lo, hi].
///
/// Throws Error(Bracket) when f(lo) and f(hi) have the same strict sign.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts);

/// Convenience form: tol is used both as the bracket width and |f| target.
inline double find_root(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
  return find_root(f, lo, hi, RootOptions{tol, tol});
}

}  // namespace aclab::numerics
