#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floq/medium.hpp"

namespace floq {

struct bands_block {
  double k_min, k_max;
  std::size_t k_count;
  std::optional<double> theta;
  std::optional<double> alpha_min, alpha_max;
  std::optional<std::size_t> alpha_count;
};

struct modes_block {
  double k_min, k_max;
  incidence inc;
  std::size_t scan_points = 2000;
};

struct sweep_block {
  double k_min, k_max;
  std::size_t k_count;
  int n;
  double theta;
};

struct polezero_block {
  std::vector<int> n_values;
  double theta;
  double k_min, k_max;
};

struct supercell_block {
  int n_min, n_max;
  double theta;
  double k_min, k_max;
};

struct tolerance_overrides {
  std::optional<double> edge_tol;
};

struct run_config {
  crystal_spec crystal;
  polarization pol;
  std::size_t slices_per_period = 0;  // 0: use the layers as given
  std::optional<bands_block> bands;
  std::optional<modes_block> modes;
  std::optional<sweep_block> sweep;
  std::optional<polezero_block> polezero;
  std::optional<supercell_block> supercell;
  std::optional<sweep_block> envelope;
  tolerance_overrides tolerances;
};

run_config parse_config_text(const std::string& text);
run_config parse_config_file(const std::string& path);

}  // namespace floq
