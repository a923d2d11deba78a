#pragma once

#include <functional>

#include "floq/bands.hpp"
#include "floq/defect.hpp"
#include "floq/medium.hpp"
#include "floq/scattering.hpp"

namespace floq {

// everything evaluated along the complex-k continuation at fixed theta:
// alpha = k sin(theta), beta0 = k cos(theta) stay entire in k
struct continued_state {
  cplx k, alpha, beta0, mu;
  eigen_basis basis;
  defect_coeffs coeffs;
  chi_mat chi;
};

// tracks the Floquet eigenvalue from the real-axis anchor Re(k) down to k,
// keeping the branch continuous (nearest-root continuation with adaptive
// step halving when the discriminant turns too fast)
cplx mu_continued(const crystal_spec& spec, polarization pol, double theta, cplx k);

continued_state continue_state(const crystal_spec& spec, polarization pol, double theta, cplx k);

// r_n at complex k, as the raw p/q ratio (poles are the point here)
cplx rn_complex(const crystal_spec& spec, polarization pol, double theta, int n, cplx k);

struct pole_zero_pair {
  int n;
  cplx k_zero, k_pole;
  double delta_n;  // -Im k_pole, the pole's distance below the axis
  double gamma_n;  // Im k_zero / Im k_pole
};

pole_zero_pair find_pair(const crystal_spec& spec, polarization pol, double theta, int n,
                         double k0, double gap_width);

// limit of gamma_n from the defect data alone; requires |d0| <= 1e-6
double gamma_closed_form(const defect_coeffs& c, const chi_mat& chi);

struct circle_fit_result {
  cplx center;
  double diameter;
  double rms_residual;
  bool unit_circle_regime;  // fit degenerated to the unit circle (n too small)
};

circle_fit_result circle_fit(const crystal_spec& spec, double theta, int n, double k0,
                             polarization pol, double window);

struct rect {
  double re_lo, re_hi, im_lo, im_hi;
};

// winding number of f around the counterclockwise rectangle boundary via
// accumulated argument, subdividing edges until each step turns < pi/2
double winding_number(const std::function<cplx(cplx)>& f, const rect& box,
                      std::size_t samples_per_edge = 400);

std::function<cplx(cplx)> p_of_k(const crystal_spec& spec, polarization pol, double theta, int n);
std::function<cplx(cplx)> q_of_k(const crystal_spec& spec, polarization pol, double theta, int n);

}  // namespace floq
