#include "floq/scattering.hpp"

#include <cmath>

namespace floq {

chi_mat chi_matrix(const eigen_basis& basis, cplx beta0) {
  if (beta0 == 0.0) fail(errc::grazing_incidence, "beta0 vanishes at grazing incidence");
  const cplx ib = cplx(0.0, 1.0) * beta0;
  return {basis.w.y - ib * basis.w.x, basis.w.y + ib * basis.w.x,
          -basis.v.y + ib * basis.v.x, -basis.v.y - ib * basis.v.x};
}

pq_values rn_pq(const defect_coeffs& c, const chi_mat& chi, cplx X) {
  const cplx p = chi.x21 * chi.x11 * c.a0 * X * X +
                 (chi.x21 * chi.x21 * c.c0 - chi.x11 * chi.x11 * c.b0) * X -
                 chi.x21 * chi.x11 * c.d0;
  const cplx q = -chi.x21 * chi.x12 * c.a0 * X * X +
                 (chi.x11 * chi.x12 * c.b0 - chi.x21 * chi.x22 * c.c0) * X +
                 chi.x11 * chi.x22 * c.d0;
  return {p, q};
}

namespace {

double q_coeff_scale(const defect_coeffs& c, const chi_mat& chi) {
  return std::max({std::abs(chi.x21 * chi.x12 * c.a0),
                   std::abs(chi.x11 * chi.x12 * c.b0 - chi.x21 * chi.x22 * c.c0),
                   std::abs(chi.x11 * chi.x22 * c.d0)});
}

}  // namespace

rt_pair rt_analytic(const defect_coeffs& c, const chi_mat& chi, cplx mu, int n, double beta0) {
  if (n < 0) fail(errc::config_error, "cell count must be nonnegative");
  const cplx X = pow_int(mu * mu, unsigned(n));
  const auto [p, q] = rn_pq(c, chi, X);
  if (std::abs(q) < 1e-14 * q_coeff_scale(c, chi))
    fail(errc::pole_on_axis, "reflection denominator vanishes on the real axis");
  return {p / q, -2.0 * cplx(0.0, 1.0) * beta0 * X / q};
}

rt_pair rt_direct(const mat2& M, double beta0, double length) {
  // the transmitted phase is referenced to the exit face, so the stack
  // length never enters explicitly
  (void)length;
  if (!(beta0 > 0.0)) fail(errc::grazing_incidence, "need a propagating incident wave");
  const cplx ib(0.0, beta0);
  const double b2 = beta0 * beta0;
  const cplx D = b2 * M.a12 - M.a21 + ib * (M.a11 + M.a22);
  const double scale = b2 * std::abs(M.a12) + std::abs(M.a21) +
                       beta0 * (std::abs(M.a11) + std::abs(M.a22));
  if (std::abs(D) < 1e-14 * std::max(scale, 1.0))
    fail(errc::singular_system, "boundary system is singular");
  return {(b2 * M.a12 + M.a21 + ib * (M.a22 - M.a11)) / D, 2.0 * ib / D};
}

rt_limit_values rt_limits(const defect_coeffs& c, const chi_mat& chi) {
  const cplx r_off = -chi.x21 / chi.x22;
  const double tol = 1e-14 * std::max({1.0, std::abs(c.a0), std::abs(c.d0)});
  const bool defect_free = std::abs(c.b0) <= tol && std::abs(c.c0) <= tol;
  if (defect_free) return {r_off, r_off, true};
  const cplx r_at = (chi.x21 * chi.x21 * c.c0 - chi.x11 * chi.x11 * c.b0) /
                    (chi.x11 * chi.x12 * c.b0 - chi.x21 * chi.x22 * c.c0);
  return {r_at, r_off, false};
}

double envelope(const mat2& Ttilde, double beta0) {
  if (!(beta0 > 0.0)) fail(errc::grazing_incidence, "need a propagating incident wave");
  const double m11 = Ttilde.a11.real(), m12 = Ttilde.a12.real();
  const double m21 = Ttilde.a21.real(), m22 = Ttilde.a22.real();
  const double tr = m11 + m22;
  if (tr * tr > 4.0) fail(errc::outside_band, "envelope is defined over conduction bands only");
  // sqrt(1 - (4 - tr^2)/D^2) written without the subtraction: with det = 1,
  // D^2 - P^2 - Q^2 = 4 - tr^2, so the bound is sqrt(P^2 + Q^2)/|D|
  const double P = m12 * beta0 + m21 / beta0;
  const double Q = m11 - m22;
  const double D = m12 * beta0 - m21 / beta0;
  return std::min(std::sqrt(P * P + Q * Q) / std::abs(D), 1.0);
}

rt_pair rt_at(const crystal_spec& spec, double k, double alpha, polarization pol, int n) {
  const auto pt = spectral_point::at(k, alpha, pol);
  const mat2 T = cell_monodromy(spec, pt);
  const auto basis = eigenbasis(T, classify(T));
  const auto c = to_floquet_basis(defect_monodromy(spec, pt), basis);
  const double b2 = k * k - alpha * alpha;
  if (!(b2 > 0.0)) fail(errc::grazing_incidence, "incident wave is evanescent");
  const double beta0 = std::sqrt(b2);
  return rt_analytic(c, chi_matrix(basis, beta0), basis.mu, n, beta0);
}

}  // namespace floq
