#include "floq/verify.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "floq/bands.hpp"
#include "floq/defect.hpp"
#include "floq/kernels.hpp"
#include "floq/polezero.hpp"
#include "floq/scattering.hpp"
#include "floq/supercell.hpp"
#include "floq/transfer.hpp"

namespace floq {

crystal_spec golden_crystal() {
  layer_profile cell;
  cell.layers = {{0.5, 4.0}, {0.5, 1.0}};
  defect_spec defect;
  defect.width = 0.8;
  defect.profile.layers = {{0.8, 2.25}};
  return validate_crystal(cell, defect);
}

namespace {

constexpr double k_window_lo = 0.05, k_window_hi = 3.5;

struct golden_ctx {
  crystal_spec spec;
  polarization pol = polarization::e_par;
  incidence inc = incidence::at_theta(0.0);
  gap_interval gap{};
  defect_mode mode{};
  dispersion_point dp;
  chi_mat chi{};
  cplx mu{};
  double beta0 = 0.0, gw = 0.0;
};

golden_ctx make_ctx() {
  golden_ctx c;
  c.spec = golden_crystal();
  const auto gaps = find_gaps(c.spec, c.pol, c.inc, k_window_lo, k_window_hi);
  if (gaps.empty()) fail(errc::no_band_found, "golden structure lost its first gap");
  c.gap = gaps.front();
  c.gw = c.gap.k_hi - c.gap.k_lo;
  const auto modes = find_defect_modes(c.spec, c.pol, c.inc, k_window_lo, k_window_hi);
  if (modes.empty()) fail(errc::no_band_found, "golden structure lost its defect mode");
  c.mode = modes.front();
  c.dp = dispersion(c.spec, c.mode.k0, c.mode.alpha0, c.pol);
  c.beta0 = c.mode.k0;
  c.chi = chi_matrix(c.dp.basis, c.beta0);
  c.mu = c.dp.basis.mu;
  return c;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct sample_point {
  double k;
  int n;
};

std::vector<sample_point> oracle_samples(const golden_ctx& c) {
  const int n_cycle[] = {0, 1, 2, 3, 4, 5, 8, 10, 12, 15, 20, 25};
  const int n_near[] = {6, 10, 15, 20, 25};
  std::vector<sample_point> pts;
  std::size_t ni = 0;
  const auto push_grid = [&](double lo, double hi, std::size_t count) {
    for (double k : linspace(lo, hi, count)) pts.push_back({k, n_cycle[ni++ % 12]});
  };
  const double glo = c.gap.k_lo, ghi = c.gap.k_hi, k0 = c.mode.k0, gw = c.gw;
  push_grid(0.25, glo - 0.02, 100);
  push_grid(ghi + 0.02, 3.45, 100);
  push_grid(glo + 0.015, k0 - 0.025 * gw, 100);
  push_grid(k0 + 0.025 * gw, ghi - 0.015, 100);
  for (int j = 0; j < 50; ++j) {
    const double off = (0.02 + 0.08 * double(j) / 49.0) * gw;
    pts.push_back({k0 - off, n_near[j % 5]});
    pts.push_back({k0 + off, n_near[j % 5]});
  }
  return pts;
}

struct rt_sample {
  rt_pair analytic, direct;
};

rt_sample eval_both(const golden_ctx& c, double k, int n) {
  const auto pt = spectral_point::at(k, 0.0, c.pol);
  const mat2 M = matrix_power_product(cell_monodromy(c.spec, pt), defect_monodromy(c.spec, pt),
                                      unsigned(n));
  return {rt_at(c.spec, k, 0.0, c.pol, n), rt_direct(M, k, 2.0 * n + 0.8)};
}

criterion_result run_unimodularity(const golden_ctx&) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid_k = linspace(0.05, 10.0, 200);
  const auto grid_a = linspace(0.0, 3.0, 50);
  const auto spec = golden_crystal();
  double worst = 0.0;
  for (polarization pol : {polarization::e_par, polarization::h_par})
    for (double k : grid_k)
      for (double a : grid_a) {
        const mat2 T = cell_monodromy(spec, spectral_point::at(k, a, pol));
        worst = std::max(worst, std::abs(det(T) - 1.0));
      }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = worst < 1e-12 && secs < 5.0;
  return {1, "unimodularity", pass,
          "max |det T - 1| = " + sci(worst) + std::string(secs < 5.0 ? ", under 5 s" : ", over 5 s")};
}

criterion_result run_oracle_equivalence(const golden_ctx& c) {
  double worst = 0.0;
  for (const auto& s : oracle_samples(c)) {
    const auto rt = eval_both(c, s.k, s.n);
    const double ref = std::hypot(std::abs(rt.direct.r), std::abs(rt.direct.t));
    const double dev =
        std::hypot(std::abs(rt.analytic.r - rt.direct.r), std::abs(rt.analytic.t - rt.direct.t)) /
        ref;
    worst = std::max(worst, dev);
  }
  return {2, "closed-form vs direct solve", worst < 1e-9,
          "max relative deviation = " + sci(worst) + " over 500 samples"};
}

criterion_result run_energy_conservation(const golden_ctx& c) {
  double worst = 0.0;
  for (const auto& s : oracle_samples(c)) {
    const auto rt = eval_both(c, s.k, s.n);
    worst = std::max(worst, std::abs(std::norm(rt.analytic.r) + std::norm(rt.analytic.t) - 1.0));
    worst = std::max(worst, std::abs(std::norm(rt.direct.r) + std::norm(rt.direct.t) - 1.0));
  }
  return {3, "energy conservation", worst < 1e-10,
          "max | |r|^2+|t|^2 - 1 | = " + sci(worst)};
}

criterion_result run_gauge_invariance(const golden_ctx& c) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  const auto uniform = [&rng](double lo, double hi) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  const double k0 = c.mode.k0, gw = c.gw;
  const double ks[] = {k0, k0 - 0.2 * gw, k0 + 0.3 * gw, c.gap.k_lo + 0.1 * gw, 1.0, 3.0};
  double worst = 0.0;
  for (double k : ks)
    for (int n : {3, 10}) {
      const auto pt = spectral_point::at(k, 0.0, c.pol);
      const mat2 T = cell_monodromy(c.spec, pt);
      const mat2 T0 = defect_monodromy(c.spec, pt);
      const auto basis = eigenbasis(T, classify(T));
      const double beta0 = k;
      const auto base =
          rt_analytic(to_floquet_basis(T0, basis), chi_matrix(basis, beta0), basis.mu, n, beta0);
      for (int trial = 0; trial < 20; ++trial) {
        const cplx s = std::polar(std::exp(uniform(-0.693, 0.693)), uniform(0.0, 6.283185307));
        eigen_basis scaled{{basis.v.x * s, basis.v.y * s}, {basis.w.x / s, basis.w.y / s},
                           basis.mu};
        const auto rt = rt_analytic(to_floquet_basis(T0, scaled), chi_matrix(scaled, beta0),
                                    scaled.mu, n, beta0);
        worst = std::max(worst, std::abs(rt.r - base.r) / std::max(1.0, std::abs(base.r)));
        worst = std::max(worst, std::abs(rt.t - base.t) / std::max(1.0, std::abs(base.t)));
      }
    }
  return {4, "gauge invariance", worst < 1e-12,
          "max drift over 240 rescalings = " + sci(worst)};
}

criterion_result run_mode_detection(const golden_ctx& c) {
  const cplx cross = det2(c.dp.T0 * c.dp.basis.w, c.dp.basis.v) + c.dp.coeffs.d0;
  const bool pass = c.mode.gap_index == 1 && c.mode.residual < 1e-9 && std::abs(cross) < 1e-10;
  return {5, "defect mode detection", pass,
          "k0 = " + fmt_double(c.mode.k0) + ", residual = " + sci(c.mode.residual) +
              ", basis cross-check = " + sci(std::abs(cross))};
}

criterion_result run_reflectance_limits(const golden_ctx& c) {
  const double k0 = c.mode.k0;
  const auto limits = rt_limits(c.dp.coeffs, c.chi);
  const double side_lo = 1.0 - std::abs(rt_at(c.spec, k0 - 0.1 * c.gw, 0.0, c.pol, 20).r);
  const double side_hi = 1.0 - std::abs(rt_at(c.spec, k0 + 0.1 * c.gw, 0.0, c.pol, 20).r);
  const double at_mode =
      std::abs(std::abs(rt_at(c.spec, k0, 0.0, c.pol, 20).r) - std::abs(limits.r_inf_at_mode));
  const double off_mode = std::abs(std::abs(limits.r_inf_off_mode) - 1.0);
  const bool pass = side_lo < 1e-5 && side_hi < 1e-5 && at_mode < 1e-4 && off_mode < 1e-12;
  return {6, "deep-gap reflectance limits", pass,
          "1-|r| off mode = " + sci(std::max(side_lo, side_hi)) +
              ", dip vs limit = " + sci(at_mode) + ", |off-mode limit|-1 = " + sci(off_mode)};
}

struct tracked_pairs {
  std::vector<pole_zero_pair> pairs;  // n = 6..14
  bool windings_ok = false;
  double worst_winding = 0.0;
};

tracked_pairs track_sequence(const golden_ctx& c) {
  tracked_pairs out;
  const double half_w = 0.8 * std::min(c.mode.k0 - c.gap.k_lo, c.gap.k_hi - c.mode.k0);
  const rect box{c.mode.k0 - half_w, c.mode.k0 + half_w, -0.2, 0.0};
  out.windings_ok = true;
  for (int n = 6; n <= 14; ++n) {
    out.pairs.push_back(find_pair(c.spec, c.pol, 0.0, n, c.mode.k0, c.gw));
    const double wp = winding_number(p_of_k(c.spec, c.pol, 0.0, n), box);
    const double wq = winding_number(q_of_k(c.spec, c.pol, 0.0, n), box);
    out.worst_winding = std::max({out.worst_winding, std::abs(wp - 1.0), std::abs(wq - 1.0)});
    if (std::abs(wp - 1.0) > 1e-6 || std::abs(wq - 1.0) > 1e-6) out.windings_ok = false;
  }
  return out;
}

criterion_result run_pair_certification(const golden_ctx& c, const tracked_pairs& t) {
  std::vector<double> ns, logz, logp;
  for (const auto& pr : t.pairs) {
    ns.push_back(double(pr.n));
    logz.push_back(std::log(std::abs(pr.k_zero - c.mode.k0)));
    logp.push_back(std::log(std::abs(pr.k_pole - c.mode.k0)));
  }
  const double predicted = 2.0 * std::log(std::abs(c.mu));
  const auto fz = fit_line(ns, logz);
  const auto fp = fit_line(ns, logp);
  const bool slopes_ok = std::abs(fz.slope / predicted - 1.0) < 0.05 &&
                         std::abs(fp.slope / predicted - 1.0) < 0.05 && fz.r_squared > 0.99 &&
                         fp.r_squared > 0.99;
  return {7, "pole/zero certification", t.windings_ok && slopes_ok,
          "max |winding - 1| = " + sci(t.worst_winding) + ", zero slope = " +
              fmt_double(fz.slope) + ", pole slope = " + fmt_double(fp.slope) +
              ", predicted = " + fmt_double(predicted)};
}

criterion_result run_displacement_ratio(const golden_ctx& c, const tracked_pairs& t) {
  const double gamma_closed = gamma_closed_form(c.dp.coeffs, c.chi);
  std::vector<double> gammas;
  for (const auto& pr : t.pairs)
    if (pr.n == 8 || pr.n == 10 || pr.n == 12) gammas.push_back(pr.gamma_n);
  bool pass = gammas.size() == 3;
  double spread = 0.0, vs_closed = 0.0;
  for (double a : gammas)
    for (double b : gammas) spread = std::max(spread, std::abs(a / b - 1.0));
  for (double a : gammas)
    vs_closed = std::max(vs_closed, std::abs(std::abs(a) / std::abs(gamma_closed) - 1.0));
  pass = pass && spread < 0.01 && vs_closed < 0.01;
  return {8, "displacement ratio", pass,
          "tracked spread = " + sci(spread) + ", vs closed form " + fmt_double(gamma_closed) +
              " = " + sci(vs_closed)};
}

criterion_result run_reflection_circle(const golden_ctx& c, const tracked_pairs& t) {
  double delta10 = 0.0;
  for (const auto& pr : t.pairs)
    if (pr.n == 10) delta10 = pr.delta_n;
  const auto fit = circle_fit(c.spec, 0.0, 10, c.mode.k0, c.pol, 50.0 * delta10);
  const double gamma_closed = gamma_closed_form(c.dp.coeffs, c.chi);
  const double predicted = std::abs(1.0 - gamma_closed);
  const double rel = std::abs(fit.diameter / predicted - 1.0);
  const bool pass = rel < 0.01 && fit.rms_residual < 1e-3 * fit.diameter;
  return {9, "reflection circle", pass,
          "diameter = " + fmt_double(fit.diameter) + " vs predicted " + fmt_double(predicted) +
              " (" + sci(rel) + "), rms = " + sci(fit.rms_residual)};
}

criterion_result run_supercell_band(const golden_ctx& c) {
  std::vector<double> ns, logw;
  bool pass = true;
  double worst_tr = 0.0, worst_id = 0.0;
  for (int n = 4; n <= 10; ++n) {
    const auto st = super_trace(c.spec, c.mode.k0, 0.0, c.pol, n);
    const cplx lead = pow_int(c.mu * c.mu, unsigned(n)) * c.dp.coeffs.a0;
    const double id_err = std::abs(st.trace - lead) / std::max(1.0, std::abs(c.dp.coeffs.a0));
    worst_id = std::max(worst_id, id_err);
    if (!st.product_ok || id_err > 1e-9) pass = false;
    const auto rep = defect_band(c.spec, c.pol, c.inc, c.mode.k0, n);
    worst_tr = std::max(worst_tr, std::abs(rep.trace_at_mode));
    if (!(std::abs(rep.trace_at_mode) < 2.0) || !rep.simple_interval) pass = false;
    ns.push_back(double(n));
    logw.push_back(std::log(rep.width));
  }
  const double predicted = 2.0 * std::log(std::abs(c.mu));
  const auto fw = fit_line(ns, logw);
  if (!(std::abs(fw.slope / predicted - 1.0) < 0.05) || !(fw.r_squared > 0.99)) pass = false;
  return {10, "supercell defect band", pass,
          "max |trace| at mode = " + fmt_double(worst_tr) + ", identity drift = " + sci(worst_id) +
              ", width slope = " + fmt_double(fw.slope) + " vs " + fmt_double(predicted)};
}

criterion_result run_envelope_bound(const golden_ctx& c) {
  const int n = 5;
  std::size_t band_samples = 0, violations = 0;
  double vac_worst = 0.0;
  const auto vac = [] {
    layer_profile cell;
    cell.layers = {{1.0, 1.0}};
    defect_spec d;
    d.width = 0.8;
    d.profile.layers = {{0.8, 1.0}};
    return validate_crystal(cell, d);
  }();
  for (double k : linspace(0.05, 3.5, 2000)) {
    const auto pt = spectral_point::at(k, 0.0, c.pol);
    const mat2 M = matrix_power_product(cell_monodromy(c.spec, pt), defect_monodromy(c.spec, pt),
                                        unsigned(n));
    const double tr = trace(M).real();
    if (tr * tr <= 4.0) {
      ++band_samples;
      const double env = envelope(M, k);
      const double r = std::abs(rt_direct(M, k, 2.0 * n + 0.8).r);
      if (r > env + 1e-8) ++violations;
    }
    const mat2 Mv = matrix_power_product(cell_monodromy(vac, pt), defect_monodromy(vac, pt),
                                         unsigned(n));
    vac_worst = std::max(vac_worst, envelope(Mv, k));
  }
  const bool pass = violations == 0 && band_samples >= 500 && vac_worst < 1e-12;
  return {11, "reflectance envelope", pass,
          std::to_string(band_samples) + " band samples, " + std::to_string(violations) +
              " violations, vacuum max = " + sci(vac_worst)};
}

criterion_result run_defect_independence(const golden_ctx& c) {
  const axis ka{k_window_lo, k_window_hi, 500};
  const auto serialize = [&](const crystal_spec& s) {
    csv_table t;
    t.header = {"k", "alpha", "trace", "class"};
    for (const auto& smp : band_map_theta(s, c.pol, ka, 0.0, 1))
      t.rows.push_back({smp.k, smp.alpha, smp.trace, std::string(band_class_name(smp.cls))});
    return t.to_csv();
  };
  const auto bare = validate_crystal(c.spec.cell, std::nullopt);
  const bool maps_equal = serialize(c.spec) == serialize(bare);

  double kfar = c.mode.k0 + 0.3 * c.gw;
  if (kfar > c.gap.k_hi - 0.05 * c.gw) kfar = c.mode.k0 - 0.3 * c.gw;
  std::vector<double> ns, logt;
  for (int n = 5; n <= 20; ++n) {
    ns.push_back(double(n));
    logt.push_back(std::log(std::abs(rt_at(c.spec, kfar, 0.0, c.pol, n).t)));
  }
  const auto pt = spectral_point::at(kfar, 0.0, c.pol);
  const mat2 T = cell_monodromy(c.spec, pt);
  const double predicted = 2.0 * std::log(std::abs(eigenbasis(T, classify(T)).mu));
  const auto ft = fit_line(ns, logt);
  const bool decay_ok = std::abs(ft.slope / predicted - 1.0) < 0.05;
  return {12, "defect-independent bands", maps_equal && decay_ok,
          std::string("band maps ") + (maps_equal ? "identical" : "differ") +
              ", |t| slope = " + fmt_double(ft.slope) + " vs " + fmt_double(predicted)};
}

criterion_result guarded(criterion_result (*fn)(const golden_ctx&), const golden_ctx& c, int index,
                         const char* name) {
  try {
    return fn(c);
  } catch (const std::exception& e) {
    return {index, name, false, std::string("error: ") + e.what()};
  }
}

}  // namespace

std::vector<criterion_result> run_verification() {
  std::vector<criterion_result> out;
  golden_ctx ctx;
  try {
    ctx = make_ctx();
  } catch (const std::exception& e) {
    for (int i = 1; i <= 12; ++i)
      out.push_back({i, "golden structure setup", false, std::string("error: ") + e.what()});
    return out;
  }
  out.push_back(guarded(run_unimodularity, ctx, 1, "unimodularity"));
  out.push_back(guarded(run_oracle_equivalence, ctx, 2, "closed-form vs direct solve"));
  out.push_back(guarded(run_energy_conservation, ctx, 3, "energy conservation"));
  out.push_back(guarded(run_gauge_invariance, ctx, 4, "gauge invariance"));
  out.push_back(guarded(run_mode_detection, ctx, 5, "defect mode detection"));
  out.push_back(guarded(run_reflectance_limits, ctx, 6, "deep-gap reflectance limits"));
  tracked_pairs t;
  bool tracked = false;
  try {
    t = track_sequence(ctx);
    tracked = true;
  } catch (const std::exception& e) {
    const std::string msg = std::string("error: ") + e.what();
    out.push_back({7, "pole/zero certification", false, msg});
    out.push_back({8, "displacement ratio", false, msg});
    out.push_back({9, "reflection circle", false, msg});
  }
  if (tracked) {
    const auto with_pairs = [&](int index, const char* name,
                                criterion_result (*fn)(const golden_ctx&, const tracked_pairs&)) {
      try {
        return fn(ctx, t);
      } catch (const std::exception& e) {
        return criterion_result{index, name, false, std::string("error: ") + e.what()};
      }
    };
    out.push_back(with_pairs(7, "pole/zero certification", run_pair_certification));
    out.push_back(with_pairs(8, "displacement ratio", run_displacement_ratio));
    out.push_back(with_pairs(9, "reflection circle", run_reflection_circle));
  }
  out.push_back(guarded(run_supercell_band, ctx, 10, "supercell defect band"));
  out.push_back(guarded(run_envelope_bound, ctx, 11, "reflectance envelope"));
  out.push_back(guarded(run_defect_independence, ctx, 12, "defect-independent bands"));
  return out;
}

csv_table verification_table(const std::vector<criterion_result>& results) {
  csv_table t;
  t.header = {"criterion", "name", "status", "detail"};
  for (const auto& r : results)
    t.rows.push_back(
        {double(r.index), r.name, std::string(r.pass ? "PASS" : "FAIL"), r.detail});
  return t;
}

bool report_verification(const std::vector<criterion_result>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    os << "criterion " << r.index << " [" << r.name << "] " << (r.pass ? "PASS" : "FAIL") << " - "
       << r.detail << "\n";
    all = all && r.pass;
  }
  os << (all ? "all criteria passed\n" : "some criteria FAILED\n");
  return all;
}

}  // namespace floq
