#pragma once

#include "floq/defect.hpp"
#include "floq/mat2.hpp"
#include "floq/medium.hpp"
#include "floq/transfer.hpp"

namespace floq {

// boundary-matching coefficients between the vacuum plane waves and the
// Floquet basis at the structure faces
struct chi_mat {
  cplx x11, x12, x21, x22;
};

chi_mat chi_matrix(const eigen_basis& basis, cplx beta0);

struct rt_pair {
  cplx r, t;
};

// numerator and denominator of r_n as polynomials in X = mu^{2n}
struct pq_values {
  cplx p, q;
};

pq_values rn_pq(const defect_coeffs& c, const chi_mat& chi, cplx X);

// closed-form reflection/transmission of the n-cells | defect | n-cells stack
rt_pair rt_analytic(const defect_coeffs& c, const chi_mat& chi, cplx mu, int n, double beta0);

// direct boundary solve from the full transfer matrix of the finite stack
rt_pair rt_direct(const mat2& M, double beta0, double length);

struct rt_limit_values {
  cplx r_inf_at_mode;   // n -> inf limit when d0 = 0
  cplx r_inf_off_mode;  // n -> inf limit when d0 != 0
  bool defect_free;     // b0 = c0 = 0: the two limits coincide
};

rt_limit_values rt_limits(const defect_coeffs& c, const chi_mat& chi);

// sharp pointwise bound on |r| over all truncations sharing this supercell
double envelope(const mat2& Ttilde, double beta0);

rt_pair rt_at(const crystal_spec& spec, double k, double alpha, polarization pol, int n);

}  // namespace floq
