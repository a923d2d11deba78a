#include "floq/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace floq {

namespace {

using njson = nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(errc::config_error, "config field '" + path + "': " + what);
}

void expect_object(const njson& v, const std::string& path) {
  if (!v.is_object()) bad(path, "expected an object");
}

void reject_unknown(const njson& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) ok = true;
    if (!ok) bad(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

double require_num(const njson& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) bad(path + "." + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

std::optional<double> optional_num(const njson& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) return std::nullopt;
  const auto& v = obj.at(key);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

std::size_t require_count(const njson& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) bad(path + "." + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
    bad(path + "." + key, "expected a positive integer");
  return v.get<std::size_t>();
}

int require_int(const njson& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) bad(path + "." + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
  return v.get<int>();
}

layer_profile parse_layers(const njson& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) bad(path, "expected a nonempty array of [thickness, eps]");
  layer_profile p;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& pair = arr[i];
    const std::string ipath = path + "[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      bad(ipath, "expected [thickness, eps]");
    p.layers.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return p;
}

incidence parse_incidence(const njson& obj, const std::string& path) {
  const auto theta = optional_num(obj, path, "theta");
  const auto alpha = optional_num(obj, path, "alpha");
  if (theta && alpha) bad(path, "give either theta or alpha, not both");
  if (theta) return incidence::at_theta(*theta);
  if (alpha) return incidence::at_alpha(*alpha);
  bad(path, "needs theta or alpha");
}

sweep_block parse_sweep(const njson& obj, const std::string& path) {
  expect_object(obj, path);
  reject_unknown(obj, path, {"k_min", "k_max", "k_count", "n", "theta"});
  sweep_block b;
  b.k_min = require_num(obj, path, "k_min");
  b.k_max = require_num(obj, path, "k_max");
  b.k_count = require_count(obj, path, "k_count");
  b.n = require_int(obj, path, "n");
  b.theta = require_num(obj, path, "theta");
  if (b.n < 0) bad(path + ".n", "must be nonnegative");
  if (!(b.k_min < b.k_max)) bad(path, "needs k_min < k_max");
  return b;
}

}  // namespace

run_config parse_config_text(const std::string& text) {
  njson root;
  try {
    root = njson::parse(text);
  } catch (const njson::exception& e) {
    fail(errc::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  expect_object(root, "");
  reject_unknown(root, "",
                 {"cell", "defect", "polarization", "slices_per_period", "bands", "modes", "sweep",
                  "polezero", "supercell", "envelope", "tolerances"});

  run_config cfg;
  if (!root.contains("cell")) bad("cell", "missing");
  const layer_profile cell = parse_layers(root.at("cell"), "cell");

  std::optional<defect_spec> defect;
  if (root.contains("defect")) {
    const auto& d = root.at("defect");
    expect_object(d, "defect");
    reject_unknown(d, "defect", {"width", "layers"});
    defect_spec ds;
    ds.width = require_num(d, "defect", "width");
    if (!d.contains("layers")) bad("defect.layers", "missing");
    ds.profile = parse_layers(d.at("layers"), "defect.layers");
    defect = std::move(ds);
  }
  cfg.crystal = validate_crystal(cell, std::move(defect));

  if (!root.contains("polarization")) bad("polarization", "missing");
  const auto& pol = root.at("polarization");
  if (!pol.is_string() || (pol.get<std::string>() != "E" && pol.get<std::string>() != "H"))
    bad("polarization", "expected \"E\" or \"H\"");
  cfg.pol = pol.get<std::string>() == "E" ? polarization::e_par : polarization::h_par;

  if (root.contains("slices_per_period")) {
    const auto& v = root.at("slices_per_period");
    if (!v.is_number_unsigned()) bad("slices_per_period", "expected a nonnegative integer");
    cfg.slices_per_period = v.get<std::size_t>();
  }

  if (root.contains("bands")) {
    const auto& b = root.at("bands");
    expect_object(b, "bands");
    reject_unknown(b, "bands",
                   {"k_min", "k_max", "k_count", "theta", "alpha_min", "alpha_max", "alpha_count"});
    bands_block bb;
    bb.k_min = require_num(b, "bands", "k_min");
    bb.k_max = require_num(b, "bands", "k_max");
    bb.k_count = require_count(b, "bands", "k_count");
    bb.theta = optional_num(b, "bands", "theta");
    bb.alpha_min = optional_num(b, "bands", "alpha_min");
    bb.alpha_max = optional_num(b, "bands", "alpha_max");
    if (b.contains("alpha_count")) bb.alpha_count = require_count(b, "bands", "alpha_count");
    const bool has_alpha = bb.alpha_min || bb.alpha_max || bb.alpha_count;
    if (bb.theta && has_alpha) bad("bands", "give either theta or an alpha grid, not both");
    if (!bb.theta && !(bb.alpha_min && bb.alpha_max && bb.alpha_count))
      bad("bands", "needs theta or alpha_min/alpha_max/alpha_count");
    cfg.bands = bb;
  }

  if (root.contains("modes")) {
    const auto& m = root.at("modes");
    expect_object(m, "modes");
    reject_unknown(m, "modes", {"k_min", "k_max", "theta", "alpha", "scan_points"});
    modes_block mb;
    mb.k_min = require_num(m, "modes", "k_min");
    mb.k_max = require_num(m, "modes", "k_max");
    mb.inc = parse_incidence(m, "modes");
    if (m.contains("scan_points")) mb.scan_points = require_count(m, "modes", "scan_points");
    cfg.modes = mb;
  }

  if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"), "sweep");
  if (root.contains("envelope")) cfg.envelope = parse_sweep(root.at("envelope"), "envelope");

  if (root.contains("polezero")) {
    const auto& p = root.at("polezero");
    expect_object(p, "polezero");
    reject_unknown(p, "polezero", {"n_values", "theta", "k_min", "k_max"});
    polezero_block pb;
    if (!p.contains("n_values") || !p.at("n_values").is_array() || p.at("n_values").empty())
      bad("polezero.n_values", "expected a nonempty array of integers");
    for (const auto& v : p.at("n_values")) {
      if (!v.is_number_integer() || v.get<int>() < 0)
        bad("polezero.n_values", "entries must be nonnegative integers");
      pb.n_values.push_back(v.get<int>());
    }
    pb.theta = require_num(p, "polezero", "theta");
    pb.k_min = require_num(p, "polezero", "k_min");
    pb.k_max = require_num(p, "polezero", "k_max");
    cfg.polezero = pb;
  }

  if (root.contains("supercell")) {
    const auto& s = root.at("supercell");
    expect_object(s, "supercell");
    reject_unknown(s, "supercell", {"n_min", "n_max", "theta", "k_min", "k_max"});
    supercell_block sb;
    sb.n_min = require_int(s, "supercell", "n_min");
    sb.n_max = require_int(s, "supercell", "n_max");
    sb.theta = require_num(s, "supercell", "theta");
    sb.k_min = require_num(s, "supercell", "k_min");
    sb.k_max = require_num(s, "supercell", "k_max");
    if (sb.n_min < 0 || sb.n_max < sb.n_min) bad("supercell", "needs 0 <= n_min <= n_max");
    cfg.supercell = sb;
  }

  if (root.contains("tolerances")) {
    const auto& t = root.at("tolerances");
    expect_object(t, "tolerances");
    reject_unknown(t, "tolerances", {"edge_tol"});
    cfg.tolerances.edge_tol = optional_num(t, "tolerances", "edge_tol");
  }

  return cfg;
}

run_config parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(errc::io_error, "cannot read config file '" + path + "'");
  return parse_config_text(ss.str());
}

}  // namespace floq
