#include "mirror/amplitude.hpp"

namespace mirror {

LocalAmplitude eigenstate_local(const HarmonicMode& mode, const SpacetimePoint& pt) {
  LocalAmplitude a;
  if (pt.x1 > pt.x2) return a;
  const cplx in = incident_amplitude(mode, pt);
  const cplx ref = reflected_amplitude(mode, pt);
  const cplx i(0.0, 1.0);
  a.chi = in - ref;
  a.dchi_x1 = i * (mode.k * in - mode.k_ref * ref);
  a.dchi_x2 = i * (mode.K * in - mode.K_ref * ref);
  return a;
}

}  // namespace mirror
