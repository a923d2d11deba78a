#include "floq/transfer.hpp"

#include <cmath>

namespace floq {

cs_pair cs_functions(cplx z, double d) {
  const cplx w = z * (d * d);
  if (std::abs(w) < 1e-4) {
    // both functions are entire in w; near zero the closed forms lose digits,
    // so switch to the truncated series (error below 1e-19 at this cutoff)
    const cplx c = 1.0 + w * (-1.0 / 2.0 + w * (1.0 / 24.0 + w * (-1.0 / 720.0)));
    const cplx s = d * (1.0 + w * (-1.0 / 6.0 + w * (1.0 / 120.0 + w * (-1.0 / 5040.0))));
    return {c, s};
  }
  const cplx root = std::sqrt(z);
  return {std::cos(d * root), std::sin(d * root) / root};
}

mat2 layer_matrix(double eps, double d, const spectral_point& pt) {
  if (!(d > 0.0)) fail(errc::degenerate_layer, "layer thickness must be positive");
  const double q = q_of(pt.pol, eps);
  const cplx z = pt.k * pt.k * eps - pt.alpha * pt.alpha;
  const auto [c, s] = cs_functions(z, d);
  return {c, q * s, -z * s / q, c};
}

mat2 profile_monodromy(const layer_profile& profile, const spectral_point& pt) {
  mat2 m = mat2::identity();
  for (const auto& l : profile.layers) m = layer_matrix(l.eps, l.thickness, pt) * m;
  return m;
}

mat2 cell_monodromy(const crystal_spec& spec, const spectral_point& pt) {
  return profile_monodromy(spec.cell, pt);
}

mat2 defect_monodromy(const crystal_spec& spec, const spectral_point& pt) {
  return profile_monodromy(spec.require_defect().profile, pt);
}

mat2 matrix_power_product(const mat2& T, const mat2& T0, unsigned n) {
  const mat2 tn = mat_pow(T, n);
  return tn * T0 * tn;
}

}  // namespace floq
