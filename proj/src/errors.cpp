#include "floq/errors.hpp"

namespace floq {

const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::non_unit_period: return "NonUnitPeriod";
    case errc::non_positive_thickness: return "NonPositiveThickness";
    case errc::zero_permittivity: return "ZeroPermittivity";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::degenerate_layer: return "DegenerateLayer";
    case errc::non_real_trace: return "NonRealTrace";
    case errc::degenerate_eigenvalues: return "DegenerateEigenvalues";
    case errc::not_in_gap: return "NotInGap";
    case errc::grazing_incidence: return "GrazingIncidence";
    case errc::pole_on_axis: return "PoleOnAxis";
    case errc::singular_system: return "SingularSystem";
    case errc::outside_band: return "OutsideBand";
    case errc::branch_tracking_lost: return "BranchTrackingLost";
    case errc::no_convergence: return "NoConvergence";
    case errc::escaped_neighborhood: return "EscapedNeighborhood";
    case errc::undefined_at_non_mode: return "UndefinedAtNonMode";
    case errc::poor_fit: return "PoorFit";
    case errc::no_band_found: return "NoBandFound";
    case errc::config_error: return "ConfigError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

int exit_code(errc c) noexcept {
  switch (c) {
    case errc::non_unit_period:
    case errc::non_positive_thickness:
    case errc::zero_permittivity:
    case errc::config_error:
      return 2;
    case errc::io_error:
      return 4;
    default:
      return 3;
  }
}

}  // namespace floq
