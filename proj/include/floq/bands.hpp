#pragma once

#include <optional>
#include <string>
#include <vector>

#include "floq/mat2.hpp"
#include "floq/medium.hpp"
#include "floq/transfer.hpp"

namespace floq {

enum class band_class { band, gap, edge, non_real_trace };

const char* band_class_name(band_class c) noexcept;

struct classification {
  band_class cls;
  double discriminant;  // tr^2/4 - 1, sign decides band vs gap
};

classification classify(const mat2& T, double edge_tol = 1e-9);

// Floquet eigenbasis (v, w) with det(v, w) = 1 and the eigenvalue mu of v.
// In a gap mu is the eigenvalue inside the unit disk; in a band Im mu >= 0.
struct eigen_basis {
  vec2 v, w;
  cplx mu;
};

eigen_basis eigenbasis(const mat2& T, const classification& cls);

// same construction for an externally chosen eigenvalue branch (used by the
// complex continuation, where the band/gap dichotomy does not apply)
eigen_basis basis_from_mu(const mat2& T, cplx mu);

struct band_sample {
  double k, alpha, trace;
  band_class cls;
};

struct axis {
  double lo, hi;
  std::size_t count;
};

std::vector<band_sample> band_map(const crystal_spec& spec, polarization pol, const axis& k_axis,
                                  const axis& alpha_axis, int jobs = 1);
std::vector<band_sample> band_map_theta(const crystal_spec& spec, polarization pol,
                                        const axis& k_axis, double theta, int jobs = 1);

struct gap_interval {
  double k_lo, k_hi;  // edges refined by bisection on |tr| - 2
  int index;          // 1-based, counted upward in k
};

std::vector<gap_interval> find_gaps(const crystal_spec& spec, polarization pol,
                                    const incidence& inc, double k_min, double k_max,
                                    std::size_t scan_points = 2000);

}  // namespace floq
