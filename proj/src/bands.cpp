#include "floq/bands.hpp"

#include <cmath>
#include <functional>

#include "floq/kernels.hpp"
#include "floq/runner.hpp"

namespace floq {

const char* band_class_name(band_class c) noexcept {
  switch (c) {
    case band_class::band: return "Band";
    case band_class::gap: return "Gap";
    case band_class::edge: return "Edge";
    case band_class::non_real_trace: return "NonRealTrace";
  }
  return "?";
}

namespace {

band_class class_of_real_trace(double tr, double edge_tol) {
  const double a = std::abs(tr);
  if (std::abs(a - 2.0) <= edge_tol) return band_class::edge;
  return a > 2.0 ? band_class::gap : band_class::band;
}

}  // namespace

classification classify(const mat2& T, double edge_tol) {
  const cplx tr = trace(T);
  if (std::abs(tr.imag()) > 1e-9) return {band_class::non_real_trace, 0.0};
  const double t = tr.real();
  return {class_of_real_trace(t, edge_tol), t * t / 4.0 - 1.0};
}

namespace {

// direction annihilated by (T - lam I): orthogonal to its larger row
vec2 null_direction(const mat2& T, cplx lam) {
  const cplx r1x = T.a11 - lam, r1y = T.a12;
  const cplx r2x = T.a21, r2y = T.a22 - lam;
  const double n1 = std::norm(r1x) + std::norm(r1y);
  const double n2 = std::norm(r2x) + std::norm(r2y);
  const double floor = 1e-28 * norm_max(T) * norm_max(T);
  if (n1 < floor && n2 < floor)
    fail(errc::degenerate_eigenvalues, "transfer matrix is a multiple of the identity");
  return n1 >= n2 ? vec2{r1y, -r1x} : vec2{r2y, -r2x};
}

}  // namespace

eigen_basis basis_from_mu(const mat2& T, cplx mu) {
  vec2 v = null_direction(T, mu);
  // gauge: rotate the larger component of v onto the positive real axis
  const cplx lead = std::abs(v.x) >= std::abs(v.y) ? v.x : v.y;
  const cplx ph = std::abs(lead) / lead;
  v.x *= ph;
  v.y *= ph;
  vec2 w = null_direction(T, 1.0 / mu);
  const cplx dw = det2(v, w);
  if (std::abs(dw) < 1e-280)
    fail(errc::degenerate_eigenvalues, "Floquet eigendirections collapse");
  w.x /= dw;
  w.y /= dw;
  return {v, w, mu};
}

eigen_basis eigenbasis(const mat2& T, const classification& cls) {
  switch (cls.cls) {
    case band_class::edge:
      fail(errc::degenerate_eigenvalues, "eigenbasis undefined at a band edge");
    case band_class::non_real_trace:
      fail(errc::non_real_trace, "monodromy trace has an imaginary part");
    default:
      break;
  }
  const double tr = trace(T).real();
  cplx mu;
  if (cls.cls == band_class::gap) {
    // reciprocal of the growing multiplier: stable for any |tr|
    const double s = tr >= 0.0 ? 1.0 : -1.0;
    mu = 1.0 / (tr / 2.0 + s * std::sqrt(cls.discriminant));
  } else {
    mu = cplx(tr / 2.0, std::sqrt(-cls.discriminant));
  }
  return basis_from_mu(T, mu);
}

namespace {

std::vector<band_sample> sample_grid(const crystal_spec& spec, polarization pol,
                                     const std::vector<double>& ks,
                                     const std::vector<double>& alphas, int jobs) {
  const auto seq = kernels::flatten(spec.cell, pol);
  std::vector<band_sample> out(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    double m11, m12, m21, m22;
    kernels::monodromy_batch(seq, &ks[i], &alphas[i], 1, &m11, &m12, &m21, &m22);
    const double tr = m11 + m22;
    out[i] = {ks[i], alphas[i], tr, class_of_real_trace(tr, 1e-9)};
  });
  return out;
}

}  // namespace

std::vector<band_sample> band_map(const crystal_spec& spec, polarization pol, const axis& k_axis,
                                  const axis& alpha_axis, int jobs) {
  const auto ks = linspace(k_axis.lo, k_axis.hi, k_axis.count);
  const auto as = linspace(alpha_axis.lo, alpha_axis.hi, alpha_axis.count);
  std::vector<double> kk, aa;
  kk.reserve(ks.size() * as.size());
  aa.reserve(kk.capacity());
  for (double k : ks)
    for (double a : as) {
      kk.push_back(k);
      aa.push_back(a);
    }
  return sample_grid(spec, pol, kk, aa, jobs);
}

std::vector<band_sample> band_map_theta(const crystal_spec& spec, polarization pol,
                                        const axis& k_axis, double theta, int jobs) {
  const auto ks = linspace(k_axis.lo, k_axis.hi, k_axis.count);
  std::vector<double> aa(ks.size());
  const double s = std::sin(theta);
  for (std::size_t i = 0; i < ks.size(); ++i) aa[i] = ks[i] * s;
  return sample_grid(spec, pol, ks, aa, jobs);
}

namespace {

double gap_indicator(const crystal_spec& spec, polarization pol, const incidence& inc, double k) {
  const auto pt = spectral_point::at(k, inc.alpha_at(k), pol);
  return std::abs(trace(cell_monodromy(spec, pt)).real()) - 2.0;
}

double bisect_edge(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<gap_interval> find_gaps(const crystal_spec& spec, polarization pol,
                                    const incidence& inc, double k_min, double k_max,
                                    std::size_t scan_points) {
  if (!(k_min > 0.0) || !(k_max > k_min)) fail(errc::config_error, "need 0 < k_min < k_max");
  const auto f = [&](double k) { return gap_indicator(spec, pol, inc, k); };
  const auto ks = linspace(k_min, k_max, scan_points);
  std::vector<gap_interval> gaps;
  bool inside = f(ks[0]) > 0.0;
  double lo = inside ? k_min : 0.0;
  double prev = f(ks[0]);
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const double cur = f(ks[i]);
    if (!inside && prev <= 0.0 && cur > 0.0) {
      lo = bisect_edge(f, ks[i - 1], ks[i], prev);
      inside = true;
    } else if (inside && prev > 0.0 && cur <= 0.0) {
      const double hi = bisect_edge(f, ks[i - 1], ks[i], prev);
      gaps.push_back({lo, hi, int(gaps.size()) + 1});
      inside = false;
    }
    prev = cur;
  }
  if (inside) gaps.push_back({lo, k_max, int(gaps.size()) + 1});
  return gaps;
}

}  // namespace floq
