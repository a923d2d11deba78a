#include <immintrin.h>

#include "cs_real.hpp"
#include "floq/kernels.hpp"

namespace floq::kernels {

// Mirrors monodromy_point operation for operation: identical multiply/add
// ordering, negation as a sign-bit flip, and the transcendentals evaluated
// lane by lane through cs_real. Compiled with contraction off, the results
// are bitwise equal to the scalar batch.
void monodromy_batch_avx2(const layer_seq& seq, const double* k, const double* alpha,
                          std::size_t count, double* m11, double* m12, double* m21, double* m22) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d vk = _mm256_loadu_pd(k + i);
    const __m256d va = _mm256_loadu_pd(alpha + i);
    const __m256d kk = _mm256_mul_pd(vk, vk);
    const __m256d aa = _mm256_mul_pd(va, va);
    __m256d r11 = _mm256_set1_pd(1.0), r12 = _mm256_setzero_pd();
    __m256d r21 = _mm256_setzero_pd(), r22 = _mm256_set1_pd(1.0);
    for (std::size_t l = 0; l < seq.size(); ++l) {
      const __m256d z = _mm256_sub_pd(_mm256_mul_pd(kk, _mm256_set1_pd(seq.eps[l])), aa);
      alignas(32) double zl[4], cl[4], sl[4];
      _mm256_store_pd(zl, z);
      for (int j = 0; j < 4; ++j) cs_real(zl[j], seq.d[l], cl[j], sl[j]);
      const __m256d c = _mm256_load_pd(cl);
      const __m256d s = _mm256_load_pd(sl);
      const __m256d q = _mm256_set1_pd(seq.q[l]);
      const __m256d qs = _mm256_mul_pd(q, s);
      const __m256d nzs = _mm256_xor_pd(_mm256_div_pd(_mm256_mul_pd(z, s), q), sign);
      const __m256d n11 = _mm256_add_pd(_mm256_mul_pd(c, r11), _mm256_mul_pd(qs, r21));
      const __m256d n12 = _mm256_add_pd(_mm256_mul_pd(c, r12), _mm256_mul_pd(qs, r22));
      const __m256d n21 = _mm256_add_pd(_mm256_mul_pd(nzs, r11), _mm256_mul_pd(c, r21));
      const __m256d n22 = _mm256_add_pd(_mm256_mul_pd(nzs, r12), _mm256_mul_pd(c, r22));
      r11 = n11;
      r12 = n12;
      r21 = n21;
      r22 = n22;
    }
    _mm256_storeu_pd(m11 + i, r11);
    _mm256_storeu_pd(m12 + i, r12);
    _mm256_storeu_pd(m21 + i, r21);
    _mm256_storeu_pd(m22 + i, r22);
  }
  for (; i < count; ++i) monodromy_point(seq, k[i], alpha[i], m11[i], m12[i], m21[i], m22[i]);
}

}  // namespace floq::kernels
