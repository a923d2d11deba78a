#include <cstdlib>
#include <string>

#include "floq/kernels.hpp"

namespace floq::kernels {

const char* isa_name(isa i) noexcept { return i == isa::avx2 ? "avx2" : "scalar"; }

namespace {

bool cpu_has_avx2() {
#if FLOQ_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

isa resolve() {
  const char* env = std::getenv("FLOQ_KERNEL");
  const std::string req = env ? env : "auto";
  if (req == "scalar") return isa::scalar;
  if (req == "avx2") {
    if (!cpu_has_avx2())
      fail(errc::config_error, "FLOQ_KERNEL=avx2 but this build/cpu cannot run it");
    return isa::avx2;
  }
  if (req != "auto") fail(errc::config_error, "FLOQ_KERNEL must be scalar, avx2 or auto");
  return cpu_has_avx2() ? isa::avx2 : isa::scalar;
}

}  // namespace

isa active_isa() {
  static const isa chosen = resolve();
  return chosen;
}

void monodromy_batch(const layer_seq& seq, const double* k, const double* alpha,
                     std::size_t count, double* m11, double* m12, double* m21, double* m22) {
#if FLOQ_HAVE_AVX2
  if (active_isa() == isa::avx2) {
    monodromy_batch_avx2(seq, k, alpha, count, m11, m12, m21, m22);
    return;
  }
#endif
  monodromy_batch_scalar(seq, k, alpha, count, m11, m12, m21, m22);
}

}  // namespace floq::kernels
