#pragma once

#include <cmath>

#include "floq/kernels.hpp"

namespace floq::kernels {

// real-argument layer functions c = cos(d sqrt z), s = sin(d sqrt z)/sqrt z,
// with the same series cutoff as the complex-valued path; every kernel
// variant funnels each lane through this one routine so the transcendental
// results are identical everywhere
inline void cs_real(double z, double d, double& c, double& s) {
  const double w = z * (d * d);
  if (std::fabs(w) < 1e-4) {
    c = 1.0 + w * (-1.0 / 2.0 + w * (1.0 / 24.0 + w * (-1.0 / 720.0)));
    s = d * (1.0 + w * (-1.0 / 6.0 + w * (1.0 / 120.0 + w * (-1.0 / 5040.0))));
  } else if (z > 0.0) {
    const double r = std::sqrt(z);
    c = std::cos(d * r);
    s = std::sin(d * r) / r;
  } else {
    const double r = std::sqrt(-z);
    c = std::cosh(d * r);
    s = std::sinh(d * r) / r;
  }
}

// one monodromy at one real spectral point; the arithmetic below is written
// operation-for-operation the way the vector kernels compute it, so scalar
// and SIMD batches agree bitwise (this also needs -ffp-contract=off)
inline void monodromy_point(const layer_seq& seq, double k, double alpha, double& m11, double& m12,
                            double& m21, double& m22) {
  const double kk = k * k;
  const double aa = alpha * alpha;
  m11 = 1.0;
  m12 = 0.0;
  m21 = 0.0;
  m22 = 1.0;
  for (std::size_t l = 0; l < seq.size(); ++l) {
    const double z = kk * seq.eps[l] - aa;
    double c, s;
    cs_real(z, seq.d[l], c, s);
    const double qs = seq.q[l] * s;
    const double nzs = -(z * s / seq.q[l]);
    const double n11 = c * m11 + qs * m21;
    const double n12 = c * m12 + qs * m22;
    const double n21 = nzs * m11 + c * m21;
    const double n22 = nzs * m12 + c * m22;
    m11 = n11;
    m12 = n12;
    m21 = n21;
    m22 = n22;
  }
}

}  // namespace floq::kernels
