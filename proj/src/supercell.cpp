#include "floq/supercell.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "floq/bands.hpp"
#include "floq/transfer.hpp"

namespace floq {

super_trace_result super_trace(const crystal_spec& spec, double k, double alpha, polarization pol,
                               int n) {
  if (n < 0) fail(errc::config_error, "cell count must be nonnegative");
  const auto pt = spectral_point::at(k, alpha, pol);
  const mat2 T = cell_monodromy(spec, pt);
  const mat2 T0 = defect_monodromy(spec, pt);
  const auto basis = eigenbasis(T, classify(T));
  const auto c = to_floquet_basis(T0, basis);

  const cplx mu = basis.mu;
  const double log_grow = -2.0 * n * std::log(std::abs(mu));
  cplx grow_term;
  if (c.d0 == 0.0) {
    grow_term = 0.0;
  } else if (log_grow + std::log(std::abs(c.d0)) > 709.0) {
    fail(errc::no_convergence, "supercell trace exceeds double range");
  } else if (log_grow <= 690.0) {
    grow_term = pow_int(1.0 / mu, 2u * unsigned(n)) * c.d0;
  } else {
    grow_term = std::polar(std::exp(log_grow + std::log(std::abs(c.d0))),
                           2.0 * n * std::arg(1.0 / mu) + std::arg(c.d0));
  }
  const cplx tr_eig = pow_int(mu * mu, unsigned(n)) * c.a0 + grow_term;

  super_trace_result out{tr_eig, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0), false};
  // the raw product is skipped once its entries would leave double range
  if (log_grow <= std::log(1e300)) {
    const mat2 tn = mat_pow(T, unsigned(n));
    const mat2 prod = tn * T0 * tn;
    out.trace_prod = trace(prod);
    // rounding in the repeated squaring grows with the power's magnitude
    const double cond = norm_max(tn) * norm_max(tn) * std::max(1.0, norm_max(T0));
    const double tol = std::max(1e-8 * std::max(1.0, std::abs(tr_eig)),
                                32.0 * std::numeric_limits<double>::epsilon() * cond);
    if (std::abs(out.trace_prod - tr_eig) > tol)
      fail(errc::no_convergence, "supercell trace identity check failed");
    out.product_ok = true;
  }
  return out;
}

namespace {

double bisect_sign_change(const std::function<double(double)>& f, double a, double b, double fa) {
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

supercell_report defect_band(const crystal_spec& spec, polarization pol, const incidence& inc,
                             double k0, int n) {
  const auto pt = spectral_point::at(k0, inc.alpha_at(k0), pol);
  if (classify(cell_monodromy(spec, pt)).cls != band_class::gap)
    fail(errc::not_in_gap, "supercell analysis needs a mode inside a host gap");

  const auto gaps = find_gaps(spec, pol, inc, 0.25 * k0, 2.5 * k0, 4000);
  const gap_interval* host = nullptr;
  for (const auto& g : gaps)
    if (g.k_lo <= k0 && k0 <= g.k_hi) host = &g;
  if (!host) fail(errc::not_in_gap, "no host gap encloses the given mode");

  const auto g = [&](double k) {
    return std::abs(super_trace(spec, k, inc.alpha_at(k), pol, n).trace.real()) - 2.0;
  };
  const double g0 = g(k0);
  if (!(g0 < 0.0)) fail(errc::no_band_found, "no open supercell band at the mode");

  const double margin = 1e-9;
  const double lo_end = host->k_lo + margin, hi_end = host->k_hi - margin;
  if (!(g(lo_end) > 0.0) || !(g(hi_end) > 0.0))
    fail(errc::no_band_found, "supercell band is not isolated inside the host gap");
  const double k_hi = bisect_sign_change(g, k0, hi_end, g0);
  const double k_lo_raw = bisect_sign_change(g, lo_end, k0, g(lo_end));

  bool simple = true;
  for (int i = 1; i < 128 && simple; ++i) {
    const double k = k_lo_raw + (k_hi - k_lo_raw) * double(i) / 128.0;
    if (!(g(k) < 0.0)) simple = false;
  }
  const double tr0 = super_trace(spec, k0, inc.alpha_at(k0), pol, n).trace.real();
  return {n, tr0, k_lo_raw, k_hi, k_hi - k_lo_raw, simple};
}

}  // namespace floq
