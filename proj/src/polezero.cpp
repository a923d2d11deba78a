#include "floq/polezero.hpp"

#include <algorithm>
#include <cmath>

#include "floq/runner.hpp"
#include "floq/transfer.hpp"

namespace floq {

namespace {

constexpr double pi = 3.14159265358979323846;

mat2 cell_at(const crystal_spec& spec, polarization pol, double theta, cplx k) {
  return cell_monodromy(spec, spectral_point::at(k, k * std::sin(theta), pol));
}

struct mu_roots {
  cplx r1, r2, disc;
};

mu_roots roots_at(const mat2& T) {
  const cplx tr = trace(T);
  const cplx disc = tr * tr / 4.0 - 1.0;
  const cplx s = std::sqrt(disc);
  return {tr / 2.0 + s, tr / 2.0 - s, disc};
}

cplx nearest(const mu_roots& r, cplx mu) {
  return std::abs(r.r1 - mu) <= std::abs(r.r2 - mu) ? r.r1 : r.r2;
}

}  // namespace

cplx mu_continued(const crystal_spec& spec, polarization pol, double theta, cplx k) {
  const cplx anchor(k.real(), 0.0);
  const mat2 Ta = cell_at(spec, pol, theta, anchor);
  cplx mu = eigenbasis(Ta, classify(Ta)).mu;
  if (k.imag() == 0.0) return mu;
  cplx disc = roots_at(Ta).disc;
  // walk the vertical segment; the sqrt branch of the multiplier cannot be
  // chosen pointwise, so follow the nearest root and shrink the step when
  // the discriminant's argument turns more than pi/2
  double t = 0.0, h = 0.125;
  for (int guard = 0; guard < 100000 && t < 1.0; ++guard) {
    const double t2 = std::min(1.0, t + h);
    const auto r = roots_at(cell_at(spec, pol, theta, anchor + (k - anchor) * t2));
    if (disc == 0.0 || r.disc == 0.0 || std::abs(std::arg(r.disc / disc)) > pi / 2.0) {
      h /= 2.0;
      if (h < 1e-7)
        fail(errc::branch_tracking_lost, "discriminant winds too fast for the tracker");
      continue;
    }
    mu = nearest(r, mu);
    disc = r.disc;
    t = t2;
    h = std::min(h * 2.0, 0.125);
  }
  if (t < 1.0) fail(errc::branch_tracking_lost, "multiplier tracking stalled");
  return mu;
}

continued_state continue_state(const crystal_spec& spec, polarization pol, double theta, cplx k) {
  const cplx alpha = k * std::sin(theta);
  const cplx beta0 = k * std::cos(theta);
  const auto pt = spectral_point::at(k, alpha, pol);
  const mat2 T = cell_monodromy(spec, pt);
  const auto basis = basis_from_mu(T, mu_continued(spec, pol, theta, k));
  const auto coeffs = to_floquet_basis(defect_monodromy(spec, pt), basis);
  return {k, alpha, beta0, basis.mu, basis, coeffs, chi_matrix(basis, beta0)};
}

cplx rn_complex(const crystal_spec& spec, polarization pol, double theta, int n, cplx k) {
  const auto st = continue_state(spec, pol, theta, k);
  const auto pq = rn_pq(st.coeffs, st.chi, pow_int(st.mu * st.mu, unsigned(n)));
  return pq.p / pq.q;
}

namespace {

// monic-in-d0 forms whose roots are the zero and pole of r_n:
//   zero: X^2 a0 + X E - d0,  E = (x21/x11)c0 - (x11/x21)b0
//   pole: X^2 (x21 x12)/(x11 x22) a0 + X G - d0,  G = (x21/x11)c0 - (x12/x22)b0
struct root_fn_value {
  cplx f;
  double coeff_scale;
};

root_fn_value root_fn(const crystal_spec& spec, polarization pol, double theta, int n, cplx k,
                      bool pole) {
  const auto st = continue_state(spec, pol, theta, k);
  const cplx X = pow_int(st.mu * st.mu, unsigned(n));
  const auto& c = st.coeffs;
  const auto& x = st.chi;
  const cplx A = pole ? (x.x21 * x.x12) / (x.x11 * x.x22) * c.a0 : c.a0;
  const cplx B = (x.x21 / x.x11) * c.c0 -
                 (pole ? (x.x12 / x.x22) * c.b0 : (x.x11 / x.x21) * c.b0);
  const double scale = std::max({1.0, std::abs(A), std::abs(B), std::abs(c.d0)});
  return {X * X * A + X * B - c.d0, scale};
}

cplx newton_root(const crystal_spec& spec, polarization pol, double theta, int n, bool pole,
                 cplx seed, double k0, double gap_width) {
  cplx k = seed;
  const double h = 1e-7 * std::abs(k0);
  for (int it = 0; it < 100; ++it) {
    const auto f0 = root_fn(spec, pol, theta, n, k, pole);
    const cplx fp = (root_fn(spec, pol, theta, n, k + h, pole).f -
                     root_fn(spec, pol, theta, n, k - h, pole).f) /
                    (2.0 * h);
    if (fp == 0.0) fail(errc::no_convergence, "flat derivative in root refinement");
    const cplx step = f0.f / fp;
    k -= step;
    if (std::abs(k - k0) > gap_width)
      fail(errc::escaped_neighborhood, "root iteration left the defect-mode neighborhood");
    if (std::abs(f0.f) < 1e-12 * f0.coeff_scale && std::abs(step) < 1e-12) return k;
  }
  fail(errc::no_convergence, "root refinement did not converge in 100 iterations");
}

double p_coeff_scale(const defect_coeffs& c, const chi_mat& x) {
  return std::max({std::abs(x.x21 * x.x11 * c.a0),
                   std::abs(x.x21 * x.x21 * c.c0 - x.x11 * x.x11 * c.b0),
                   std::abs(x.x21 * x.x11 * c.d0)});
}

double q_scale(const defect_coeffs& c, const chi_mat& x) {
  return std::max({std::abs(x.x21 * x.x12 * c.a0),
                   std::abs(x.x11 * x.x12 * c.b0 - x.x21 * x.x22 * c.c0),
                   std::abs(x.x11 * x.x22 * c.d0)});
}

}  // namespace

pole_zero_pair find_pair(const crystal_spec& spec, polarization pol, double theta, int n,
                         double k0, double gap_width) {
  const mat2 T = cell_at(spec, pol, theta, k0);
  const cplx mu = eigenbasis(T, classify(T)).mu;
  const double eps0 = std::pow(std::abs(mu), 2.0 * n);
  const cplx seed = cplx(k0, -eps0);
  const cplx kz = newton_root(spec, pol, theta, n, false, seed, k0, gap_width);
  const cplx kp = newton_root(spec, pol, theta, n, true, seed, k0, gap_width);

  // certify against the raw numerator/denominator
  const auto stz = continue_state(spec, pol, theta, kz);
  const auto stp = continue_state(spec, pol, theta, kp);
  const auto pqz = rn_pq(stz.coeffs, stz.chi, pow_int(stz.mu * stz.mu, unsigned(n)));
  const auto pqp = rn_pq(stp.coeffs, stp.chi, pow_int(stp.mu * stp.mu, unsigned(n)));
  if (std::abs(pqz.p) > 1e-10 * p_coeff_scale(stz.coeffs, stz.chi))
    fail(errc::no_convergence, "zero candidate fails the numerator residual");
  if (std::abs(pqp.q) > 1e-10 * q_scale(stp.coeffs, stp.chi))
    fail(errc::no_convergence, "pole candidate fails the denominator residual");
  if (!(kp.imag() < 0.0))
    fail(errc::no_convergence, "pole must lie strictly below the real axis");
  return {n, kz, kp, -kp.imag(), kz.imag() / kp.imag()};
}

double gamma_closed_form(const defect_coeffs& c, const chi_mat& x) {
  if (std::abs(c.d0) > 1e-6)
    fail(errc::undefined_at_non_mode, "closed-form ratio needs d0 = 0");
  const cplx E = (x.x21 / x.x11) * c.c0 - (x.x11 / x.x21) * c.b0;
  const cplx G = (x.x21 / x.x11) * c.c0 - (x.x12 / x.x22) * c.b0;
  if (G.imag() == 0.0) {
    if (std::abs(E.imag()) <= 1e-14 * std::abs(E)) return 1.0;
    fail(errc::no_convergence, "degenerate displacement ratio");
  }
  return E.imag() / G.imag();
}

circle_fit_result circle_fit(const crystal_spec& spec, double theta, int n, double k0,
                             polarization pol, double window) {
  if (!(window > 0.0)) fail(errc::config_error, "window must be positive");
  const auto ks = linspace(k0 - window, k0 + window, 401);
  std::vector<double> xs(ks.size()), ys(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const cplx r = rt_at(spec, ks[i], ks[i] * std::sin(theta), pol, n).r;
    xs[i] = r.real();
    ys[i] = r.imag();
  }
  // algebraic (Kasa) fit: x^2 + y^2 = A x + B y + C, solved by 3x3 normal
  // equations with partial pivoting
  double M[3][4] = {};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double row[3] = {xs[i], ys[i], 1.0};
    const double rhs = xs[i] * xs[i] + ys[i] * ys[i];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) M[a][b] += row[a] * row[b];
      M[a][3] += row[a] * rhs;
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (std::abs(M[piv][col]) < 1e-30) fail(errc::poor_fit, "degenerate circle system");
    if (piv != col)
      for (int b = 0; b < 4; ++b) std::swap(M[piv][b], M[col][b]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double fct = M[r][col] / M[col][col];
      for (int b = col; b < 4; ++b) M[r][b] -= fct * M[col][b];
    }
  }
  const double cx = M[0][3] / M[0][0] / 2.0;
  const double cy = M[1][3] / M[1][1] / 2.0;
  const double c2 = M[2][3] / M[2][2] + cx * cx + cy * cy;
  if (!(c2 > 0.0)) fail(errc::poor_fit, "circle fit produced a nonpositive radius");
  const double R = std::sqrt(c2);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dev = std::hypot(xs[i] - cx, ys[i] - cy) - R;
    ss += dev * dev;
  }
  const double rms = std::sqrt(ss / double(xs.size()));
  circle_fit_result out{cplx(cx, cy), 2.0 * R, rms,
                        std::abs(2.0 * R - 2.0) < 0.05 && std::hypot(cx, cy) < 0.05};
  // a window that misses the resonance samples only a short arc; the fitted
  // circle is then an extrapolation and must not be reported as a resonance
  // circle, so require the samples to wrap most of the way around the center
  std::vector<double> angles(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) angles[i] = std::atan2(ys[i] - cy, xs[i] - cx);
  std::sort(angles.begin(), angles.end());
  double max_gap = 2.0 * pi - (angles.back() - angles.front());
  for (std::size_t i = 1; i < angles.size(); ++i)
    max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
  if (2.0 * pi - max_gap < 4.5) {
    if (out.unit_circle_regime) return out;
    fail(errc::poor_fit, "sample window does not wrap the resonance circle");
  }
  if (!(rms < 1e-3 * out.diameter))
    fail(errc::poor_fit, "circle residual exceeds 1e-3 of the diameter");
  return out;
}

namespace {

double accumulate_arg(const std::function<cplx(cplx)>& f, cplx za, cplx zb, cplx fa, cplx fb,
                      int depth) {
  if (fa == 0.0 || fb == 0.0)
    fail(errc::no_convergence, "winding contour passes through a root");
  const double d = std::arg(fb / fa);
  if (std::abs(d) <= pi / 2.0) return d;
  if (depth > 48) fail(errc::no_convergence, "winding phase cannot be resolved");
  const cplx zm = (za + zb) / 2.0;
  const cplx fm = f(zm);
  return accumulate_arg(f, za, zm, fa, fm, depth + 1) +
         accumulate_arg(f, zm, zb, fm, fb, depth + 1);
}

}  // namespace

double winding_number(const std::function<cplx(cplx)>& f, const rect& box,
                      std::size_t samples_per_edge) {
  if (samples_per_edge < 2) fail(errc::config_error, "need at least 2 samples per edge");
  const cplx corners[5] = {{box.re_lo, box.im_lo},
                           {box.re_hi, box.im_lo},
                           {box.re_hi, box.im_hi},
                           {box.re_lo, box.im_hi},
                           {box.re_lo, box.im_lo}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    cplx za = corners[e];
    cplx fa = f(za);
    for (std::size_t j = 1; j <= samples_per_edge; ++j) {
      const double t = double(j) / double(samples_per_edge);
      const cplx zb = corners[e] + (corners[e + 1] - corners[e]) * t;
      const cplx fb = f(zb);
      total += accumulate_arg(f, za, zb, fa, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  return total / (2.0 * pi);
}

std::function<cplx(cplx)> p_of_k(const crystal_spec& spec, polarization pol, double theta, int n) {
  return [spec, pol, theta, n](cplx k) {
    const auto st = continue_state(spec, pol, theta, k);
    return rn_pq(st.coeffs, st.chi, pow_int(st.mu * st.mu, unsigned(n))).p;
  };
}

std::function<cplx(cplx)> q_of_k(const crystal_spec& spec, polarization pol, double theta, int n) {
  return [spec, pol, theta, n](cplx k) {
    const auto st = continue_state(spec, pol, theta, k);
    return rn_pq(st.coeffs, st.chi, pow_int(st.mu * st.mu, unsigned(n))).q;
  };
}

}  // namespace floq
