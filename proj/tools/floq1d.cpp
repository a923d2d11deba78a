#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "floq/config.hpp"
#include "floq/errors.hpp"
#include "floq/kernels.hpp"
#include "floq/runner.hpp"
#include "floq/verify.hpp"
#include "floq/version.hpp"

namespace {

struct scenario_opts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int jobs = 0;  // 0: machine parallelism
};

void add_common(CLI::App* sub, scenario_opts& o, bool config_required) {
  auto* cfg = sub->add_option("--config", o.config_path, "JSON run configuration");
  if (config_required) cfg->required();
  sub->add_option("--out", o.out_path, "output path (default: <subcommand>.csv)");
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--jobs", o.jobs, "worker threads (0: machine parallelism)")
      ->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) floq::fail(floq::errc::io_error, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) floq::fail(floq::errc::io_error, "read failure on '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) floq::fail(floq::errc::io_error, "cannot open output file '" + path + "'");
  out << text;
  out.flush();
  if (!out) floq::fail(floq::errc::io_error, "write failure on '" + path + "'");
}

void write_manifest(const scenario_opts& o, const std::string& subcommand,
                    const nlohmann::ordered_json& config_echo, double wall_time_s) {
  nlohmann::ordered_json m;
  m["tool"] = "floq1d";
  m["version"] = floq::version;
  m["subcommand"] = subcommand;
  m["format"] = o.format;
  m["jobs"] = o.jobs;
  m["kernel"] = floq::kernels::isa_name(floq::kernels::active_isa());
  m["config"] = config_echo;
  m["wall_time_s"] = wall_time_s;
  m["output"] = o.out_path;
  write_file(o.out_path + ".manifest.json", m.dump(2) + "\n");
}

using scenario_fn = floq::csv_table (*)(const floq::run_config&, int);

int run_scenario(scenario_opts& o, const std::string& subcommand, scenario_fn fn) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.out_path.empty()) o.out_path = subcommand + "." + o.format;
  const std::string raw = read_file(o.config_path);
  const floq::run_config cfg = floq::parse_config_text(raw);
  const floq::csv_table table = fn(cfg, o.jobs);
  write_file(o.out_path, o.format == "json" ? table.to_json() : table.to_csv());
  // the raw text already parsed cleanly above, so this echo cannot throw
  const auto echo = nlohmann::ordered_json::parse(raw);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(o, subcommand, echo, wall);
  return 0;
}

int run_verify(scenario_opts& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = floq::run_verification();
  const bool all_pass = floq::report_verification(results, std::cout);
  if (!o.out_path.empty()) {
    const auto table = floq::verification_table(results);
    write_file(o.out_path, o.format == "json" ? table.to_json() : table.to_csv());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(o, "verify", nlohmann::ordered_json::object(), wall);
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer-matrix analysis of 1D periodic dielectrics with a single defect"};
  app.set_version_flag("--version", std::string("floq1d ") + floq::version);
  app.require_subcommand(1);

  struct entry {
    const char* name;
    const char* desc;
    scenario_fn fn;
  };
  const entry entries[] = {
      {"bands", "band map over a (k, alpha) or (k, theta) grid", floq::run_bands_scenario},
      {"modes", "locate defect modes inside the gaps of a k window", floq::run_modes_scenario},
      {"sweep", "reflection/transmission across a k window", floq::run_sweep_scenario},
      {"polezero", "scattering pole/zero pairs vs structure size", floq::run_polezero_scenario},
      {"supercell", "defect band of the period-(2n+1) supercell", floq::run_supercell_scenario},
      {"envelope", "sweep plus the in-band reflectance envelope", floq::run_envelope_scenario},
  };

  scenario_opts opts[6];
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    subs[i] = app.add_subcommand(entries[i].name, entries[i].desc);
    add_common(subs[i], opts[i], true);
  }

  scenario_opts verify_opts;
  auto* verify_sub =
      app.add_subcommand("verify", "run the built-in invariant suite on the golden crystal");
  add_common(verify_sub, verify_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    // resolve (and validate) the kernel selection up front so a bad
    // FLOQ_KERNEL fails the same way for every subcommand
    floq::kernels::active_isa();
    if (verify_sub->parsed()) return run_verify(verify_opts);
    for (int i = 0; i < 6; ++i)
      if (subs[i]->parsed()) return run_scenario(opts[i], entries[i].name, entries[i].fn);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const floq::error& e) {
    std::cerr << "error [" << floq::errc_name(e.code()) << "]: " << e.what() << "\n";
    return floq::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
