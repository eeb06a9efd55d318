#pragma once

#include <cstddef>
#include <functional>

namespace aclab::oracle {

/// Composite Simpson rule with `panels` (even) subintervals. Reference
/// values only; the library's quadrature never calls this.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < panels; ++i) {
    const double v = f(a + h * static_cast<double>(i));
    (i % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace aclab::oracle
