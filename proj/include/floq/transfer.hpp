#pragma once

#include "floq/mat2.hpp"
#include "floq/medium.hpp"

namespace floq {

struct spectral_point {
  cplx k, alpha, beta0_sq;
  polarization pol{polarization::e_par};

  static spectral_point at(cplx k, cplx alpha, polarization pol) {
    return {k, alpha, k * k - alpha * alpha, pol};
  }
};

// entire functions of z = beta^2: c = cos(d sqrt z), s = sin(d sqrt z)/sqrt z;
// both are even in sqrt z, so no branch of the square root is ever selected
struct cs_pair {
  cplx c, s;
};
cs_pair cs_functions(cplx z, double d);

mat2 layer_matrix(double eps, double d, const spectral_point& pt);
mat2 profile_monodromy(const layer_profile& profile, const spectral_point& pt);
mat2 cell_monodromy(const crystal_spec& spec, const spectral_point& pt);
mat2 defect_monodromy(const crystal_spec& spec, const spectral_point& pt);

// T^n T0 T^n with T^n by repeated squaring
mat2 matrix_power_product(const mat2& T, const mat2& T0, unsigned n);

}  // namespace floq
