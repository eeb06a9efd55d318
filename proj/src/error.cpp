#include "aclab/error.hpp"

namespace aclab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::QuadratureFailure: return "quadrature failure";
    case ErrorKind::Bracket: return "bracket error";
    case ErrorKind::SymmetryViolation: return "symmetry violation";
    case ErrorKind::ConstructionFailure: return "construction failure";
    case ErrorKind::IdentityViolation: return "identity violation";
    case ErrorKind::Resolution: return "resolution error";
    case ErrorKind::BlowUp: return "blow-up detected";
    case ErrorKind::Window: return "window error";
    case ErrorKind::Sign: return "sign error";
    case ErrorKind::Usage: return "usage error";
  }
  return "error";
}

}  // namespace aclab
