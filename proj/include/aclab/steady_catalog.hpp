#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "aclab/ground_state.hpp"
#include "aclab/numerics/torus.hpp"

namespace aclab::steady {

/// m_kappa, the number of odd zero-up steady states: the integer with
/// 1/(m+1) <= kappa < 1/m, or 0 when kappa >= 1.
int count_states(double kappa);

struct Replica {
  int j = 0;
  numerics::TorusField field;  // U_{j kappa}(j x)
  double energy = 0.0;         // computed from the samples, not inherited
  double period = 0.0;         // 2 pi / j
  double residual = 0.0;       // max |kappa^2 u'' + u - u^3|
};

struct SteadyCatalog {
  double kappa = 0.0;
  int m = 0;
  std::vector<Replica> replicas;  // j = 1..m
};

/// All odd zero-up 2 pi-periodic steady states for kappa in (0, 1). Replica
/// j is built from the ground state of diffusion j*kappa sampled at j*x,
/// which is an exact index map on the uniform grid. Throws
/// Error(Resolution) naming j when a replica's layer is below the grid's
/// resolvable width.
SteadyCatalog build_catalog(double kappa, const numerics::TorusGrid& grid = numerics::TorusGrid());

/// Field with samples f(j x_i) taken from f on the same grid.
numerics::TorusField compress(const numerics::TorusField& f, int j);

enum class OrbitKind { Unbounded, HeteroclinicOrConstant, Periodic, Zero };
std::string_view to_string(OrbitKind kind) noexcept;

inline constexpr double kBoundaryTolerance = 1e-12;
inline constexpr double kNearBoundaryBand = 1e-8;

struct OrbitClass {
  double C = 0.0;
  OrbitKind kind = OrbitKind::Zero;
  std::optional<double> period;
  std::optional<double> amplitude;
  bool near_boundary = false;  // within kNearBoundaryBand of C = 0 or C = 1/2
};

/// C = kappa^2 v^2 + u^2 - u^4 / 2, constant along kappa^2 u'' = u^3 - u.
double conserved_quantity(double u, double v, double kappa);

/// Classifies the orbit through (u0, v0). C > 1/2 is unbounded, C = 1/2 a
/// tanh front or constant, 0 < C < 1/2 periodic with amplitude
/// sqrt(1 - sqrt(1 - 2C)), C = 0 the zero orbit. Starting points on the
/// outer branch (|u0| beyond the separatrix, including C < 0) are unbounded.
OrbitClass classify_orbit(double u0, double v0, double kappa);

/// Minimal period 4 sqrt2 kappa g(N) of the periodic orbit with 0 < C < 1/2.
double minimal_period(double C, double kappa);

/// Lowest Rayleigh quotient of phi -> int (kappa^2 phi'^2 + (3U^2 - 1) phi^2)
/// over span{sin m x : m = 1..modes}, relative to the L2 Gram matrix.
double spectral_gap(const ground::GroundState& gs, std::size_t modes = 256);

/// Same quadratic form about an arbitrary odd background field.
double spectral_gap(const numerics::TorusField& background, double kappa, std::size_t modes = 256);

struct BasinVerdict {
  bool applicable = false;
  bool below_threshold = false;  // E_kappa(u0) < E^(0)_{2 kappa}
  double energy = 0.0;
  double threshold = 0.0;
  std::string_view note;
};

/// Sufficient condition for convergence to +-U_kappa: E_kappa(u0) < E^(0)_{2kappa}.
/// Not applicable for kappa >= 1/2. Throws Error(SymmetryViolation) for non-odd u0.
BasinVerdict basin_criterion(const numerics::TorusField& u0, double kappa);

}  // namespace aclab::steady
