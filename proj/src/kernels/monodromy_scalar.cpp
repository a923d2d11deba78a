#include "cs_real.hpp"
#include "floq/kernels.hpp"

namespace floq::kernels {

layer_seq flatten(const layer_profile& profile, polarization pol) {
  layer_seq seq;
  seq.d.reserve(profile.layers.size());
  seq.eps.reserve(profile.layers.size());
  seq.q.reserve(profile.layers.size());
  for (const auto& l : profile.layers) {
    if (!(l.thickness > 0.0)) fail(errc::degenerate_layer, "layer thickness must be positive");
    seq.d.push_back(l.thickness);
    seq.eps.push_back(l.eps);
    seq.q.push_back(q_of(pol, l.eps));
  }
  return seq;
}

void monodromy_batch_scalar(const layer_seq& seq, const double* k, const double* alpha,
                            std::size_t count, double* m11, double* m12, double* m21,
                            double* m22) {
  for (std::size_t i = 0; i < count; ++i)
    monodromy_point(seq, k[i], alpha[i], m11[i], m12[i], m21[i], m22[i]);
}

}  // namespace floq::kernels
