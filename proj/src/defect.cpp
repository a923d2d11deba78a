#include "floq/defect.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "floq/runner.hpp"

namespace floq {

defect_coeffs to_floquet_basis(const mat2& T0, const eigen_basis& basis) {
  const vec2 tv = T0 * basis.v;
  const vec2 tw = T0 * basis.w;
  return {det2(tv, basis.w), det2(basis.v, tv), det2(tw, basis.w), det2(basis.v, tw)};
}

mat2 from_floquet_basis(const defect_coeffs& c, const eigen_basis& basis) {
  const mat2 P{basis.v.x, basis.w.x, basis.v.y, basis.w.y};
  const mat2 C{c.a0, c.c0, c.b0, c.d0};
  // det P = det(v, w) = 1, so the inverse is the adjugate
  const mat2 Pinv{P.a22, -P.a12, -P.a21, P.a11};
  return P * C * Pinv;
}

dispersion_point dispersion(const crystal_spec& spec, double k, double alpha, polarization pol) {
  const auto pt = spectral_point::at(k, alpha, pol);
  const mat2 T = cell_monodromy(spec, pt);
  const auto cls = classify(T);
  if (cls.cls != band_class::gap)
    fail(errc::not_in_gap, "localized modes are only defined inside a gap");
  const auto basis = eigenbasis(T, cls);
  const mat2 T0 = defect_monodromy(spec, pt);
  const auto c = to_floquet_basis(T0, basis);
  // det(T0 w, v) = -d0 whenever det(v, w) = 1; a violation means the basis
  // normalization degraded
  const cplx check = det2(T0 * basis.w, basis.v) + c.d0;
  const double scale = std::max(1.0, norm_max(T0) * std::max(std::abs(basis.v.x) + std::abs(basis.v.y),
                                                             std::abs(basis.w.x) + std::abs(basis.w.y)));
  if (std::abs(check) > 1e-10 * scale)
    fail(errc::singular_system, "Floquet basis lost its normalization");
  return {c.d0, c, basis, T, T0};
}

namespace {

struct gap_root {
  double k;
  double residual;
};

// bisection on the bracketing sign change, then secant refinement
gap_root refine_root(const std::function<double(double)>& f, double a, double b, double fa,
                     double fb) {
  while (b - a > 1e-6) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  for (int i = 0; i < 80; ++i) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
    if (std::abs(x1 - x0) < 1e-11) break;
  }
  // keep whichever endpoint evaluates smallest
  if (std::abs(f0) < std::abs(f1)) {
    x1 = x0;
    f1 = f0;
  }
  return {x1, std::abs(f1)};
}

}  // namespace

std::vector<defect_mode> find_defect_modes(const crystal_spec& spec, polarization pol,
                                           const incidence& inc, double k_min, double k_max,
                                           std::size_t scan_points) {
  spec.require_defect();
  std::vector<defect_mode> modes;
  for (const auto& gap : find_gaps(spec, pol, inc, k_min, k_max)) {
    const auto d0_at = [&](double k) {
      return dispersion(spec, k, inc.alpha_at(k), pol).d0.real();
    };
    // the eigenbasis normalization degenerates at the edges, so stay off them
    const double margin = std::max(1e-9, 1e-6 * (gap.k_hi - gap.k_lo));
    const auto ks = linspace(gap.k_lo + margin, gap.k_hi - margin, scan_points);
    std::vector<double> vals(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) vals[i] = d0_at(ks[i]);
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 1; i < ks.size(); ++i) {
      if ((vals[i - 1] <= 0.0) != (vals[i] <= 0.0)) {
        const auto root = refine_root(d0_at, ks[i - 1], ks[i], vals[i - 1], vals[i]);
        const double a0 = inc.alpha_at(root.k);
        std::optional<double> theta0;
        if (inc.mode == incidence::kind::fixed_theta)
          theta0 = inc.value;
        else if (std::abs(a0) < root.k)
          theta0 = std::asin(a0 / root.k);
        modes.push_back({root.k, a0, theta0, gap.index, root.residual});
      } else if (i + 1 < ks.size() && std::abs(vals[i]) < std::abs(vals[i - 1]) &&
                 std::abs(vals[i]) < std::abs(vals[i + 1]) &&
                 std::abs(vals[i]) < 1e-6 * std::max(scale, 1.0)) {
        std::fprintf(stderr,
                     "warning: d0 has a near-zero minimum without a sign change at k=%.12g "
                     "(possible double root)\n",
                     ks[i]);
      }
    }
  }
  return modes;
}

}  // namespace floq
