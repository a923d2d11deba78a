#pragma once

#include "floq/defect.hpp"
#include "floq/medium.hpp"

namespace floq {

struct super_trace_result {
  cplx trace;       // tr of T^n T0 T^n, from the eigen identity mu^{2n} a0 + mu^{-2n} d0
  cplx trace_prod;  // same trace from the explicit matrix product (NaN when skipped)
  bool product_ok;  // product evaluated and agreed within the conditioning bound
};

super_trace_result super_trace(const crystal_spec& spec, double k, double alpha, polarization pol,
                               int n);

struct supercell_report {
  int n;
  double trace_at_mode;
  double k_lo, k_hi;     // edges of the defect band of the supercell crystal
  double width;
  bool simple_interval;  // |tr| < 2 strictly between the edges
};

supercell_report defect_band(const crystal_spec& spec, polarization pol, const incidence& inc,
                             double k0, int n);

}  // namespace floq
