#pragma once

#include <cstddef>
#include <vector>

#include "floq/medium.hpp"

namespace floq::kernels {

// flattened constant-layer sequence with per-layer q for one polarization
struct layer_seq {
  std::vector<double> d, eps, q;
  std::size_t size() const { return d.size(); }
};

layer_seq flatten(const layer_profile& profile, polarization pol);

// monodromy entries over a batch of real spectral points; output arrays hold
// one entry per point, results independent of batch grouping and of the
// selected instruction set (the variants are bit-identical by construction)
void monodromy_batch(const layer_seq& seq, const double* k, const double* alpha,
                     std::size_t count, double* m11, double* m12, double* m21, double* m22);

void monodromy_batch_scalar(const layer_seq& seq, const double* k, const double* alpha,
                            std::size_t count, double* m11, double* m12, double* m21,
                            double* m22);
#if FLOQ_HAVE_AVX2
void monodromy_batch_avx2(const layer_seq& seq, const double* k, const double* alpha,
                          std::size_t count, double* m11, double* m12, double* m21, double* m22);
#endif

enum class isa { scalar, avx2 };
const char* isa_name(isa i) noexcept;

// resolved once from FLOQ_KERNEL (scalar|avx2|auto) and runtime cpu support
isa active_isa();

}  // namespace floq::kernels
