#include "floq/medium.hpp"

#include <cmath>
#include <string>

namespace floq {

double layer_profile::width() const {
  double w = 0.0;
  for (const auto& l : layers) w += l.thickness;
  return w;
}

incidence incidence::at_alpha(double alpha) {
  return {kind::fixed_alpha, alpha};
}

incidence incidence::at_theta(double theta) {
  return {kind::fixed_theta, theta};
}

double incidence::alpha_at(double k) const {
  return mode == kind::fixed_alpha ? value : k * std::sin(value);
}

const defect_spec& crystal_spec::require_defect() const {
  if (!defect) fail(errc::config_error, "this operation needs a defect in the structure");
  return *defect;
}

namespace {

void check_profile(const layer_profile& p, const char* what) {
  if (p.layers.empty())
    fail(errc::config_error, std::string(what) + " has no layers");
  for (const auto& l : p.layers) {
    if (!(l.thickness > 0.0))
      fail(errc::non_positive_thickness, std::string(what) + " has a layer of thickness " +
                                             std::to_string(l.thickness));
    if (l.eps == 0.0) fail(errc::zero_permittivity, std::string(what) + " has a zero-eps layer");
  }
}

}  // namespace

crystal_spec validate_crystal(const layer_profile& cell, std::optional<defect_spec> defect) {
  check_profile(cell, "unit cell");
  const double w = cell.width();
  if (std::abs(w - 1.0) > 1e-12)
    fail(errc::non_unit_period, "unit cell width is " + std::to_string(w) + ", expected 1");
  if (defect) {
    check_profile(defect->profile, "defect");
    const double dw = defect->profile.width();
    if (std::abs(dw - defect->width) > 1e-12)
      fail(errc::config_error, "defect layers sum to " + std::to_string(dw) +
                                   " but the declared width is " + std::to_string(defect->width));
  }
  return {cell, std::move(defect)};
}

double epsilon_at(const layer_profile& profile, double x) {
  const double w = profile.width();
  if (x < 0.0 || x > w) fail(errc::out_of_domain, "x outside [0, width]");
  double acc = 0.0;
  for (const auto& l : profile.layers) {
    acc += l.thickness;
    if (x < acc) return l.eps;
  }
  return profile.layers.back().eps;
}

}  // namespace floq
