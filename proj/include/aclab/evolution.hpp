#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aclab/diagnostics.hpp"
#include "aclab/numerics/torus.hpp"

namespace aclab::evolve {

enum class FilterKind { None, OddProjection, OddBandGap };
std::string_view to_string(FilterKind kind) noexcept;
FilterKind parse_filter(std::string_view name);  // none | odd | bandgap

struct EvolveParams {
  double kappa = 1.0;
  double gamma = 2.0;
  double dt = 0.01;
  double t_end = 1.0;
  std::size_t n_points = 256;
  FilterKind filter = FilterKind::None;
  std::size_t record_every = 10;
  double steady_tol = 1e-10;
  std::size_t steady_checks = 10;
  /// Defaults to on except at kappa = 1, where decay is algebraic.
  std::optional<bool> detect_steady;
  bool keep_snapshots = true;
  /// Test hook: drop the cubic term to expose the linear propagator.
  bool disable_cubic = false;

  /// Number of retained sine modes, floor(n_points / 3).
  std::size_t modes() const noexcept { return n_points / 3; }
  bool steady_detection_enabled() const noexcept { return detect_steady.value_or(kappa != 1.0); }
  /// Throws Error(Domain) when a field is out of range.
  void validate() const;
};

/// Symbol of kappa^2 Lambda^gamma on sin(m x): kappa^2 m^gamma.
double fractional_multiplier(std::size_t m, double kappa, double gamma);

/// odd_projection validates and passes through; odd_band_gap zeroes every
/// even mode.
numerics::SineSpectrum apply_filter(const numerics::SineSpectrum& state, FilterKind kind);

/// Exponential time differencing (ETDRK2) for
///   d/dt c_m = (1 - kappa^2 m^gamma) c_m - [u^3]_m,
/// linear part exact, cubic explicit and evaluated on a 2n-point grid so the
/// product of three retained modes is alias-free.
class Integrator {
 public:
  explicit Integrator(const EvolveParams& params);

  /// One time step followed by the configured filter. The state is resized
  /// to params.modes(). Throws Error(BlowUp) on non-finite output.
  numerics::SineSpectrum step(const numerics::SineSpectrum& state) const;

  /// [u^3]_m for m = 1..modes on the padded grid.
  std::vector<double> cubic(std::span<const double> coeffs) const;
  /// Samples on the padded grid.
  std::vector<double> samples(std::span<const double> coeffs) const;

  double energy(const numerics::SineSpectrum& state) const;
  const EvolveParams& params() const noexcept { return params_; }

 private:
  EvolveParams params_;
  std::size_t padded_;
  std::vector<double> decay_, phi1_, phi2_, symbol_;
};

numerics::SineSpectrum step(const numerics::SineSpectrum& state, const EvolveParams& params);

struct Snapshot {
  double t;
  numerics::SineSpectrum state;
};

enum class Terminal { ReachedTEnd, SteadyDetected };
std::string_view to_string(Terminal terminal) noexcept;

struct Trajectory {
  EvolveParams params;
  std::vector<Snapshot> snapshots;
  diag::DiagnosticSeries diagnostics;
  Terminal terminal = Terminal::ReachedTEnd;
  std::size_t steps = 0;
  numerics::SineSpectrum final_state;
  double final_time = 0.0;
};

/// Integrates from u0 (odd to 1e-8) to t_end or until the time derivative
/// stays below steady_tol for steady_checks consecutive record points.
Trajectory evolve(const numerics::TorusField& u0, const EvolveParams& params);
Trajectory evolve(const numerics::SineSpectrum& u0, const EvolveParams& params);

}  // namespace aclab::evolve
