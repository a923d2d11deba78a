#pragma once

// Independent cross-checks the unit tests measure the library against. Each
// one deliberately avoids the code paths it validates: fixed-step integration
// instead of closed-form layer matrices, plain repeated multiplication instead
// of squaring, and a literal interface-matching solve instead of the analytic
// reflection formula.

#include "floq/mat2.hpp"
#include "floq/medium.hpp"
#include "floq/scattering.hpp"

namespace floq::oracles {

// fundamental matrix of U' = A(x) U over one pass through the profile,
// A = [[0, q], [-(k^2 eps - alpha^2)/q, 0]], classic RK4 with fixed steps
mat2 rk4_monodromy(const layer_profile& profile, double k, double alpha, polarization pol,
                   int steps_per_layer = 4096);

// T^n T0 T^n as 2n+1 explicit multiplications
mat2 naive_power_product(const mat2& T, const mat2& T0, int n);

// solve the two interface equations M (1+r, i b (1-r)) = (t, i b t) for (r, t)
rt_pair boundary_solve(const mat2& M, double beta0);

}  // namespace floq::oracles
