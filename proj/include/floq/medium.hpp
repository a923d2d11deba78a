#pragma once

#include <optional>
#include <vector>

#include "floq/errors.hpp"

namespace floq {

struct layer {
  double thickness{};
  double eps{};
};

struct layer_profile {
  std::vector<layer> layers;
  double width() const;
};

struct defect_spec {
  double width{};
  layer_profile profile;
};

enum class polarization { e_par, h_par };

// q(x) scaling the derivative slot of the state (u, q^{-1} u')
inline double q_of(polarization pol, double eps) {
  return pol == polarization::e_par ? 1.0 : eps;
}

struct incidence {
  enum class kind { fixed_alpha, fixed_theta };
  kind mode{kind::fixed_theta};
  double value{};

  static incidence at_alpha(double alpha);
  static incidence at_theta(double theta);
  double alpha_at(double k) const;
};

struct crystal_spec {
  layer_profile cell;
  std::optional<defect_spec> defect;

  const defect_spec& require_defect() const;
};

crystal_spec validate_crystal(const layer_profile& cell, std::optional<defect_spec> defect);

// right-continuous point evaluation; the right endpoint returns the last layer
double epsilon_at(const layer_profile& profile, double x);

}  // namespace floq
