#pragma once

#include <optional>
#include <vector>

#include "floq/bands.hpp"
#include "floq/mat2.hpp"
#include "floq/medium.hpp"
#include "floq/transfer.hpp"

namespace floq {

// entries of the defect-cell map expressed in the Floquet basis:
//   T0 v = a0 v + b0 w,  T0 w = c0 v + d0 w
// d0 = 0 signals a localized mode of the infinite defective structure.
struct defect_coeffs {
  cplx a0, b0, c0, d0;
};

defect_coeffs to_floquet_basis(const mat2& T0, const eigen_basis& basis);

mat2 from_floquet_basis(const defect_coeffs& c, const eigen_basis& basis);

// d0 along with everything downstream needs: only valid inside a gap
struct dispersion_point {
  cplx d0;
  defect_coeffs coeffs;
  eigen_basis basis;
  mat2 T, T0;
};

dispersion_point dispersion(const crystal_spec& spec, double k, double alpha, polarization pol);

struct defect_mode {
  double k0, alpha0;
  std::optional<double> theta0;
  int gap_index;
  double residual;  // |d0| at the converged root
};

std::vector<defect_mode> find_defect_modes(const crystal_spec& spec, polarization pol,
                                           const incidence& inc, double k_min, double k_max,
                                           std::size_t scan_points = 2000);

}  // namespace floq
