#include "aclab/numerics/roots.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "aclab/error.hpp"

namespace aclab::numerics {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts) {
  require(lo <= hi, ErrorKind::Domain, "root bracket must satisfy lo <= hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0) || std::isnan(fa) || std::isnan(fb)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no sign change on [" << lo << ", " << hi << "]: f(lo)=" << fa << ", f(hi)=" << fb;
    throw Error(ErrorKind::Bracket, msg.str());
  }

  double width_two_steps_ago = b - a;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double width = b - a;
    if (width <= opts.xtol) break;

    double x = b - fb * (b - a) / (fb - fa);
    const bool stalled = (it % 2 == 1) && width > 0.5 * width_two_steps_ago;
    if (!(x > a && x < b) || stalled) x = 0.5 * (a + b);
    if (it % 2 == 1) width_two_steps_ago = width;
    if (x <= a || x >= b) break;  // bracket cannot be split further

    const double fx = f(x);
    if (std::abs(fx) <= opts.ftol || fx == 0.0) return x;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace aclab::numerics
