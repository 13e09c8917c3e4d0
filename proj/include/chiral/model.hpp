#pragma once

#include <stdexcept>
#include <string>

namespace chiral {

inline constexpr int kMaxTruncationOrder = 4;

/// Raised for out-of-range user parameters. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rates and powers are in units of Gamma. Powers are photon fluxes.
struct SystemParams {
  int n_atoms = 1;
  double beta = 0.1;
  double drive_ratio = 0.0;  // P_in / P_sat
  int truncation_order = 2;
  double gamma = 1.0;
};

struct DerivedScalars {
  double optical_depth = 0.0;
  double saturation_s = 0.0;
  double alpha_1 = 0.0;
};

SystemParams validate(SystemParams params);
DerivedScalars derive(const SystemParams& params);

inline double saturation_power(const SystemParams& p) { return p.gamma / p.beta; }
inline double input_power(const SystemParams& p) { return p.drive_ratio * saturation_power(p); }

/// s = 8 P_in / P_sat.
inline double drive_ratio_from_s(double s) { return s / 8.0; }

}  // namespace chiral
