#include "floq/runner.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "floq/bands.hpp"
#include "floq/defect.hpp"
#include "floq/polezero.hpp"
#include "floq/scattering.hpp"
#include "floq/supercell.hpp"
#include "floq/transfer.hpp"

namespace floq {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) fail(errc::config_error, "grid needs at least one point");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / double(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * double(i);
  v.back() = hi;
  return v;
}

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    jobs = hc ? int(hc) : 1;
  }
  const std::size_t workers = std::min<std::size_t>(std::size_t(jobs), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::string csv_table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (std::holds_alternative<double>(row[i]))
        out += fmt_double(std::get<double>(row[i]));
      else if (std::holds_alternative<std::string>(row[i]))
        out += std::get<std::string>(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string csv_table::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < header.size(); ++i) {
      if (std::holds_alternative<double>(row[i]))
        obj[header[i]] = std::get<double>(row[i]);
      else if (std::holds_alternative<std::string>(row[i]))
        obj[header[i]] = std::get<std::string>(row[i]);
      // nil cells are omitted
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump() + "\n";
}

line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(errc::config_error, "fit needs >= 2 points");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) fail(errc::singular_system, "degenerate abscissae in line fit");
  const double slope = (n * sxy - sx * sy) / den;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fit = intercept + slope * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  return {intercept, slope, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

namespace {

[[noreturn]] void rethrow_at(const error& e, double k) {
  throw error(e.code(), std::string(e.what()) + " (at k=" + fmt_double(k) + ")");
}

const sweep_block& need(const std::optional<sweep_block>& b, const char* name) {
  if (!b) fail(errc::config_error, std::string("config is missing the '") + name + "' block");
  return *b;
}

// the defect mode the complex-plane and supercell scenarios are anchored to
defect_mode locate_mode(const run_config& cfg, const incidence& inc, double k_min, double k_max) {
  const auto modes = find_defect_modes(cfg.crystal, cfg.pol, inc, k_min, k_max);
  if (modes.empty()) fail(errc::no_band_found, "no defect mode inside the configured k window");
  return modes.front();
}

gap_interval host_gap(const run_config& cfg, const incidence& inc, double k_min, double k_max,
                      double k0) {
  for (const auto& g : find_gaps(cfg.crystal, cfg.pol, inc, k_min, k_max))
    if (g.k_lo <= k0 && k0 <= g.k_hi) return g;
  fail(errc::not_in_gap, "located mode has no enclosing gap in the window");
}

}  // namespace

csv_table run_bands_scenario(const run_config& cfg, int jobs) {
  if (!cfg.bands) fail(errc::config_error, "config is missing the 'bands' block");
  const auto& b = *cfg.bands;
  std::vector<band_sample> samples;
  if (b.theta) {
    samples = band_map_theta(cfg.crystal, cfg.pol, {b.k_min, b.k_max, b.k_count}, *b.theta, jobs);
  } else {
    samples = band_map(cfg.crystal, cfg.pol, {b.k_min, b.k_max, b.k_count},
                       {*b.alpha_min, *b.alpha_max, *b.alpha_count}, jobs);
  }
  csv_table t;
  t.header = {"k", "alpha", "trace", "class"};
  t.rows.reserve(samples.size());
  const auto edge_tol = cfg.tolerances.edge_tol;
  for (const auto& s : samples) {
    band_class cls = s.cls;
    if (edge_tol) {
      const double a = std::abs(s.trace);
      cls = std::abs(a - 2.0) <= *edge_tol ? band_class::edge
                                           : (a > 2.0 ? band_class::gap : band_class::band);
    }
    t.rows.push_back({s.k, s.alpha, s.trace, std::string(band_class_name(cls))});
  }
  return t;
}

csv_table run_modes_scenario(const run_config& cfg, int jobs) {
  (void)jobs;  // the gap scan is already cheap and strictly ordered
  if (!cfg.modes) fail(errc::config_error, "config is missing the 'modes' block");
  const auto& m = *cfg.modes;
  const auto modes =
      find_defect_modes(cfg.crystal, cfg.pol, m.inc, m.k_min, m.k_max, m.scan_points);
  csv_table t;
  t.header = {"k0", "alpha0", "theta0", "gap_index", "residual"};
  for (const auto& md : modes) {
    cell_value theta0 = md.theta0 ? cell_value(*md.theta0) : cell_value(nil_t{});
    t.rows.push_back({md.k0, md.alpha0, theta0, double(md.gap_index), md.residual});
  }
  return t;
}

namespace {

csv_table sweep_like(const run_config& cfg, const sweep_block& b, int jobs, bool direct) {
  const auto ks = linspace(b.k_min, b.k_max, b.k_count);
  const double sin_t = std::sin(b.theta);
  const double cos_t = std::cos(b.theta);
  csv_table t;
  t.header = {"k",     "theta", "n",     "re_r",  "im_r",           "re_t",
              "im_t",  "abs_r", "abs_t", "energy_residual", "envelope"};
  t.rows.resize(ks.size());
  const double defect_width = cfg.crystal.require_defect().width;
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    const double k = ks[i];
    try {
      const double alpha = k * sin_t;
      const double beta0 = k * cos_t;
      const auto pt = spectral_point::at(k, alpha, cfg.pol);
      const mat2 M =
          matrix_power_product(cell_monodromy(cfg.crystal, pt), defect_monodromy(cfg.crystal, pt),
                               unsigned(b.n));
      rt_pair rt{};
      if (direct) {
        rt = rt_direct(M, beta0, 2.0 * b.n + defect_width);
      } else {
        rt = rt_at(cfg.crystal, k, alpha, cfg.pol, b.n);
      }
      const double energy = std::abs(std::norm(rt.r) + std::norm(rt.t) - 1.0);
      cell_value env{nil_t{}};
      const double tr = trace(M).real();
      if (tr * tr <= 4.0) env = envelope(M, beta0);
      t.rows[i] = {k,
                   b.theta,
                   double(b.n),
                   rt.r.real(),
                   rt.r.imag(),
                   rt.t.real(),
                   rt.t.imag(),
                   std::abs(rt.r),
                   std::abs(rt.t),
                   energy,
                   env};
    } catch (const error& e) {
      rethrow_at(e, k);
    }
  });
  return t;
}

}  // namespace

csv_table run_sweep_scenario(const run_config& cfg, int jobs) {
  return sweep_like(cfg, need(cfg.sweep, "sweep"), jobs, false);
}

csv_table run_envelope_scenario(const run_config& cfg, int jobs) {
  return sweep_like(cfg, need(cfg.envelope, "envelope"), jobs, true);
}

csv_table run_polezero_scenario(const run_config& cfg, int jobs) {
  if (!cfg.polezero) fail(errc::config_error, "config is missing the 'polezero' block");
  const auto& p = *cfg.polezero;
  const auto inc = incidence::at_theta(p.theta);
  const auto mode = locate_mode(cfg, inc, p.k_min, p.k_max);
  const auto gap = host_gap(cfg, inc, p.k_min, p.k_max, mode.k0);
  const double gap_width = gap.k_hi - gap.k_lo;

  const auto dp = dispersion(cfg.crystal, mode.k0, mode.alpha0, cfg.pol);
  const double beta0 = std::sqrt(mode.k0 * mode.k0 - mode.alpha0 * mode.alpha0);
  const double gamma_closed = gamma_closed_form(dp.coeffs, chi_matrix(dp.basis, beta0));

  // the certification rectangle stays clear of the band edges, where the
  // eigenbasis normalization is singular and the winding integrand blows up
  const double half_w = 0.8 * std::min(mode.k0 - gap.k_lo, gap.k_hi - mode.k0);
  const rect box{mode.k0 - half_w, mode.k0 + half_w, -0.2, 0.0};

  csv_table t;
  t.header = {"n",       "re_k_zero", "im_k_zero", "re_k_pole",         "im_k_pole",
              "delta_n", "gamma_n",   "gamma_closed_form", "winding_p", "winding_q"};
  t.rows.resize(p.n_values.size());
  parallel_for(p.n_values.size(), jobs, [&](std::size_t i) {
    const int n = p.n_values[i];
    const auto pair = find_pair(cfg.crystal, cfg.pol, p.theta, n, mode.k0, gap_width);
    const double wp = winding_number(p_of_k(cfg.crystal, cfg.pol, p.theta, n), box);
    const double wq = winding_number(q_of_k(cfg.crystal, cfg.pol, p.theta, n), box);
    t.rows[i] = {double(n),
                 pair.k_zero.real(),
                 pair.k_zero.imag(),
                 pair.k_pole.real(),
                 pair.k_pole.imag(),
                 pair.delta_n,
                 pair.gamma_n,
                 gamma_closed,
                 wp,
                 wq};
  });
  return t;
}

csv_table run_supercell_scenario(const run_config& cfg, int jobs) {
  if (!cfg.supercell) fail(errc::config_error, "config is missing the 'supercell' block");
  const auto& s = *cfg.supercell;
  const auto inc = incidence::at_theta(s.theta);
  const auto mode = locate_mode(cfg, inc, s.k_min, s.k_max);

  const auto pt = spectral_point::at(mode.k0, mode.alpha0, cfg.pol);
  const mat2 T = cell_monodromy(cfg.crystal, pt);
  const cplx mu = eigenbasis(T, classify(T)).mu;
  const double predicted = 2.0 * std::log(std::abs(mu));

  csv_table t;
  t.header = {"n", "k_lo", "k_hi", "width", "log_width", "predicted_slope"};
  const std::size_t count = std::size_t(s.n_max - s.n_min) + 1;
  t.rows.resize(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    const int n = s.n_min + int(i);
    const auto rep = defect_band(cfg.crystal, cfg.pol, inc, mode.k0, n);
    t.rows[i] = {double(n), rep.k_lo, rep.k_hi, rep.width, std::log(rep.width), predicted};
  });
  return t;
}

}  // namespace floq
