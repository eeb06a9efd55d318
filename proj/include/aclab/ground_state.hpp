#pragma once

#include <cstddef>
#include <vector>

#include "aclab/numerics/torus.hpp"

namespace aclab::ground {

/// g(N) = int_0^{pi/2} dtheta / sqrt(2 - N^2 (1 + sin^2 theta)), 0 <= N < 1.
/// Strictly increasing, g(0) = pi / (2 sqrt 2), divergent as N -> 1.
double eval_g(double N);

/// The same integral parametrised by q = 1 - N^2 in (0, 1]. Accurate for q
/// far below machine epsilon, where N itself is no longer representable.
double eval_g_complement(double q);

/// The peak value N_kappa solving g(N) = pi / (2 sqrt 2 kappa).
struct PeakValue {
  double kappa = 0.0;
  double N = 0.0;
  double q = 1.0;  // 1 - N^2, kept separately: it underflows 1 - N in double for small kappa
  double residual = 0.0;  // |g(N) - target| / target

  double one_minus_N() const noexcept { return q / (1.0 + N); }
};

PeakValue solve_peak(double kappa);

/// Two sides of the exponential bracket on 1 - N_kappa, meaningful when
/// N_kappa > sqrt(2/3):  N^2/(2+2N) e^{-N pi/kappa} < 1 - N < N^2/(2+2N) e^{2 sqrt2 - 2N/kappa}.
struct PeakBounds {
  bool applicable = false;
  double lower = 0.0;
  double gap = 0.0;  // 1 - N
  double upper = 0.0;
  bool holds() const noexcept { return !applicable || (lower < gap && gap < upper); }
};

PeakBounds peak_bounds(const PeakValue& peak);

/// Smallest kappa whose transition layer the grid resolves: 0.03 at 2048
/// points, scaling inversely with the point count.
double min_resolvable_kappa(std::size_t n_points);

inline constexpr double kResidualThreshold = 1e-8;

struct QuarterSample {
  double x;
  double u;
};

/// Odd zero-up ground state U_kappa sampled on a torus grid.
class GroundState {
 public:
  double kappa() const noexcept { return peak_.kappa; }
  const PeakValue& peak() const noexcept { return peak_; }
  const numerics::TorusField& field() const noexcept { return field_; }
  const numerics::SineSpectrum& spectrum() const noexcept { return spectrum_; }
  double energy() const noexcept { return energy_; }
  double residual() const noexcept { return residual_; }
  /// Grid samples on [0, pi/2], increasing in x.
  const std::vector<QuarterSample>& quarter_profile() const noexcept { return quarter_; }

  /// U_kappa at an arbitrary x, by direct inversion (no interpolation).
  double value_at(double x) const;

 private:
  friend GroundState build_ground_state(double kappa, const numerics::TorusGrid& grid);
  GroundState(PeakValue peak, numerics::TorusField field, numerics::SineSpectrum spectrum,
              std::vector<QuarterSample> quarter, double energy, double residual);

  PeakValue peak_;
  numerics::TorusField field_;
  numerics::SineSpectrum spectrum_;
  std::vector<QuarterSample> quarter_;
  double energy_;
  double residual_;
};

/// Builds U_kappa by inverting h on the quarter [0, pi/2] and reflecting:
/// odd about 0, even about pi/2. Throws Error(Domain) for kappa outside
/// (0, 1) or below min_resolvable_kappa, Error(ConstructionFailure) when the
/// PDE residual exceeds kResidualThreshold.
GroundState build_ground_state(double kappa, const numerics::TorusGrid& grid = numerics::TorusGrid());

/// Same inversion as build_ground_state for a single point of [0, pi/2].
double quarter_value(const PeakValue& peak, double x);

/// E_kappa(u) = int (kappa^2/2 u'^2 + (1-u^2)^2/4) dx. The derivative is
/// spectral for odd fields and a fourth-order periodic difference otherwise.
double energy(const numerics::TorusField& field, double kappa);

/// max |kappa^2 u'' + u - u^3| over the grid, spectral derivative.
double pde_residual(const numerics::TorusField& field, double kappa);

struct EnergyIdentityReport {
  double definition = 0.0;   // E_kappa(U) on the grid
  double quarter = 0.0;      // int_0^{pi/2} (1 - U^4) dx by quadrature in the angle variable
  double second_form = 0.0;  // int (1/2 (U^2-1)^2 - 1/4 (N^2-1)^2) dx on the grid
  double max_discrepancy = 0.0;
};

inline constexpr double kIdentityTolerance = 1e-8;

/// Evaluates the ground-state energy three ways; throws
/// Error(IdentityViolation) when they disagree by more than kIdentityTolerance.
EnergyIdentityReport energy_identities(const GroundState& gs);

/// int_0^{pi/2} (1 - u^4) dx for a field sampled on the full torus, using
/// the symmetry of u^4 about 0 and pi/2.
double quarter_energy_form(const numerics::TorusField& field);

}  // namespace aclab::ground
