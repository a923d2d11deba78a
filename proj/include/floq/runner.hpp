#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "floq/config.hpp"

namespace floq {

std::vector<double> linspace(double lo, double hi, std::size_t count);

// shortest decimal string that round-trips to the same double
std::string fmt_double(double v);

// runs body(i) for i in [0, count) on up to `jobs` threads; results must be
// written to slot i so assembly order never depends on scheduling
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

struct nil_t {};
using cell_value = std::variant<double, std::string, nil_t>;

struct csv_table {
  std::vector<std::string> header;
  std::vector<std::vector<cell_value>> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

// ordinary least squares fit y = a + b x
struct line_fit {
  double intercept, slope, r_squared;
};

line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y);

csv_table run_bands_scenario(const run_config& cfg, int jobs);
csv_table run_modes_scenario(const run_config& cfg, int jobs);
csv_table run_sweep_scenario(const run_config& cfg, int jobs);
csv_table run_polezero_scenario(const run_config& cfg, int jobs);
csv_table run_supercell_scenario(const run_config& cfg, int jobs);
csv_table run_envelope_scenario(const run_config& cfg, int jobs);

}  // namespace floq
