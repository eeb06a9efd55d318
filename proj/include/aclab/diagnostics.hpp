#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aclab/numerics/torus.hpp"

namespace aclab::diag {

/// Scalars recorded along an evolution run. mass is the squared L2 norm.
struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> c1;
  std::vector<double> hi_mass;  // ||Pi_{>=2} u||_2
  std::vector<double> linf;

  std::size_t size() const noexcept { return times.size(); }
  void push(double t, double m, double e, double a, double hi, double sup);
  /// Index range [first, last) of records with t in [t_lo, t_hi].
  std::pair<std::size_t, std::size_t> window(double t_lo, double t_hi) const;
};

/// Pi_1: the first sine coefficient.
double project_mode1(const numerics::SineSpectrum& spec);
/// ||Pi_{>=2} u||_2 = sqrt(pi * sum_{m>=2} c_m^2).
double project_high_mass(const numerics::SineSpectrum& spec);

enum class FitModel { Exponential, Algebraic };

struct RateFit {
  std::pair<double, double> window;
  FitModel model = FitModel::Exponential;
  double rate_or_exponent = 0.0;  // y ~ prefactor * exp(-rate t)  or  prefactor * t^(-exponent)
  double prefactor = 0.0;
  double residual = 0.0;  // max |fit / y - 1| over the window
  std::size_t points = 0;
  bool rejected = false;  // residual > kMaxFitResidual
};

inline constexpr double kMaxFitResidual = 0.1;
inline constexpr std::size_t kMinFitPoints = 20;
inline constexpr double kSignalFloor = 1e-13;

/// Least squares of ln y against t (exponential) or ln t (algebraic) on the
/// samples with t in [t_lo, t_hi]. Throws Error(Domain) for non-positive y
/// in the window and Error(Window) for fewer than kMinFitPoints samples.
RateFit fit_rate(std::span<const double> t, std::span<const double> y, FitModel model,
                 std::pair<double, double> window);

/// Shrinks [t_lo, t_hi] to the leading stretch where y stays at least
/// 100 * floor, so fits never see the round-off plateau.
std::pair<double, double> usable_window(std::span<const double> t, std::span<const double> y, double t_lo,
                                        double t_hi, double floor = kSignalFloor);

/// Late-time amplitude of the first mode: alpha* = lim c1 e^{(kappa^2-1)t}
/// for kappa > 1, beta* = lim c1 sqrt(t) for kappa = 1.
struct ProfileEstimate {
  double value = 0.0;
  double stability = 0.0;  // spread of the estimate across late windows
  bool vanishing = false;  // c1 identically zero on the run
  std::size_t windows = 0;
};

ProfileEstimate extract_profile(const DiagnosticSeries& series, double kappa);

struct LogConvexityReport {
  bool pass = true;
  double worst_ratio = 0.0;  // max over t of m(t) / (m(t1)^{1-l} m(t2)^l)
  std::size_t points = 0;
};

/// m(t) <= factor * m(t1)^{1-l} m(t2)^l, l = (t-t1)/(t2-t1), at every record
/// strictly between t1 and t2 (t1, t2 snapped to the nearest records).
LogConvexityReport check_log_convexity(const DiagnosticSeries& series, double t1, double t2, double factor);

/// The same test over every ordered pair of records in [t_lo, t_hi];
/// factor_of(t2 - t1) supplies the allowed slack per pair.
LogConvexityReport check_log_convexity_all(const DiagnosticSeries& series, double t_lo, double t_hi,
                                           const std::function<double(double)>& factor_of);

/// Smallest c >= 0 with m(t) <= (1 + t2 - t1)^c m(t1)^{1-l} m(t2)^l over all
/// record triples in [t_lo, t_hi].
double fit_log_convexity_exponent(const DiagnosticSeries& series, double t_lo, double t_hi);

struct Eta0Report {
  double lhs = 0.0;                // int u^3 Lambda^gamma u dx
  double quartic = 0.0;            // ||u||_4^4
  double ratio = 0.0;              // lhs / quartic
  std::optional<double> eta0;      // 3/4 for gamma = 2, unknown otherwise
  std::optional<double> rhs;       // eta0 * ||u||_4^4 when eta0 is known
  bool holds() const noexcept { return !rhs || lhs >= *rhs; }
};

Eta0Report check_eta0_inequality(const numerics::SineSpectrum& spec, double gamma);

struct ThetaOdeResult {
  double theta_star = 0.0;
  double remainder_bound = 0.0;  // sup over the last decade of |theta - theta*/t| t^2 / ln t
  double theta_end = 0.0;
  double max_t2_theta = 0.0;     // sup t^2 theta(t) over the run, finite when theta = O(t^-2)
  std::vector<std::pair<double, double>> samples;  // (t, theta) on a log-spaced grid
};

/// Integrates theta' = -(3/2) theta^2 + F(t) from t0 to t_end with an
/// adaptive Dormand-Prince method and extrapolates t * theta(t) over the
/// last decade. Requires t0 >= 3 and t_end >= 10 t0. Throws Error(Sign) if
/// theta drops below -1e-12.
ThetaOdeResult theta_ode_oracle(double theta0, double t0, const std::function<double(double)>& forcing,
                                double t_end);

/// ||u - beta t^{-1/2} sin x||_2, the kappa = 1 profile remainder.
double profile_remainder(const numerics::SineSpectrum& spec, double t, double beta);

/// One verification result, serialised as
/// {check_name, pass, observed, expected, tolerance, window}.
struct CheckReport {
  std::string check_name;
  bool pass = false;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::optional<std::pair<double, double>> window;
  std::string detail;
};

}  // namespace aclab::diag
