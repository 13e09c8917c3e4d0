#include "chiral/model.hpp"

#include <cmath>

namespace chiral {

SystemParams validate(SystemParams params) {
  if (params.n_atoms < 1) throw ValidationError("n_atoms must be >= 1");
  if (!(params.beta > 0.0 && params.beta <= 1.0)) throw ValidationError("beta must be in (0,1]");
  if (!std::isfinite(params.drive_ratio) || params.drive_ratio < 0.0)
    throw ValidationError("drive_ratio must be finite and >= 0");
  if (params.truncation_order < 1 || params.truncation_order > kMaxTruncationOrder)
    throw ValidationError("truncation_order must be in {1,2,3,4}");
  params.gamma = 1.0;
  return params;
}

DerivedScalars derive(const SystemParams& params) {
  DerivedScalars d;
  d.optical_depth = 4.0 * params.beta * params.n_atoms;
  d.saturation_s = 8.0 * params.drive_ratio;
  d.alpha_1 = std::sqrt(params.drive_ratio);
  return d;
}

}  // namespace chiral
