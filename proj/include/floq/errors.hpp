#pragma once

#include <stdexcept>
#include <string>

namespace floq {

enum class errc {
  non_unit_period,
  non_positive_thickness,
  zero_permittivity,
  out_of_domain,
  degenerate_layer,
  non_real_trace,
  degenerate_eigenvalues,
  not_in_gap,
  grazing_incidence,
  pole_on_axis,
  singular_system,
  outside_band,
  branch_tracking_lost,
  no_convergence,
  escaped_neighborhood,
  undefined_at_non_mode,
  poor_fit,
  no_band_found,
  config_error,
  io_error,
};

const char* errc_name(errc c) noexcept;

// CLI process exit code: 2 configuration, 3 numerical, 4 io
int exit_code(errc c) noexcept;

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw error(c, what); }

}  // namespace floq
