#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "chiral/cascade_solver.hpp"
#include "chiral/pauli.hpp"

namespace chiral {

/// Photon fluxes of the transmitted field in units of Gamma.
struct PowerBreakdown {
  double p_in = 0, p_el = 0, p_ie = 0, p_out = 0;
  bool physical = true;  // false when p_ie < 0
};

PowerBreakdown power_breakdown(const SteadyStateSolution& sol);
/// |<b>|^2 with b = a_in - i sqrt(beta) S; equals P_sat alpha_{N+1}^2 when the x means vanish.
double elastic_power(const SteadyStateSolution& sol);
/// beta <<S^dag S>>; at TO1 only the single-atom variances contribute.
double inelastic_power(const SteadyStateSolution& sol);

/// Principal branch of w e^w = x for x >= 0.
double lambert_w(double x);
/// w with w e^w = e^log_x, usable when e^log_x overflows.
double lambert_w_exp(double log_x);
/// Continuum Lambert law for the elastic power after z atoms.
double lambert_power(double z, const SystemParams& params);

/// OD_* ~ ln(24 d) + 8 d + 2 beta - 1/3 for drive ratio d; undefined below
/// d = 1/24 where the logarithm turns negative.
std::optional<double> od_star(double drive_ratio, double beta);

struct CorrelationMap {
  Axis first = Axis::x, second = Axis::x;
  int n_atoms = 0;
  /// matrix[(i-1) * n + (j-1)] = <<s_i^a s_j^b>> for i < j, 0 elsewhere.
  std::vector<double> matrix;
  /// Product formula for <<s_1^x s_j^x>>, j = 1..N (entry 0 unused), with
  /// mean-field <s^z> inputs and beta <<s^z s^z>> dropped.
  std::vector<double> first_row_approx;
  std::optional<double> od_star_predicted;
  std::optional<double> j_star_predicted;
  /// argmax_j |<<s_1^a s_j^b>>| over j >= 2; first index on ties.
  int j_star_numeric = 0;
  double od_star_numeric = 0.0;

  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i - 1) * n_atoms + (j - 1)]; }
};

/// Requires TO >= 2.
CorrelationMap correlation_map(const SteadyStateSolution& sol, Axis first = Axis::x, Axis second = Axis::x);
/// Mean-field approximation of <<s_1^x s_j^x>> for j = 1..N (entry 0 unused).
std::vector<double> first_row_correlation_approx(const SystemParams& params);

struct G2Result {
  double value = 1.0;
  double p_out = 0.0;
  bool physical = true;        // false when g2 < 0
  bool trusted_order = true;   // false at TO2, whose g2 is known to misbehave
};

/// <b^dag b^dag b b> / <b^dag b>^2 with the 3- and 4-body moments above the
/// truncation order closed by zero cumulants.
G2Result g2_zero(const SteadyStateSolution& sol);

/// Normal-ordered collective moment <(S^dag)^p S^q> for p, q <= 2.
std::complex<double> collective_moment(const SteadyStateSolution& sol, int p, int q);

double mandel_q(double p_out, double g2_0, double tau);
/// Width of the single-atom antibunching dip, 1/(Gamma sqrt(1 + s)).
double single_atom_tau(double s);
inline constexpr double kCollectiveTau = 0.41;

/// Output rate, g2 and dip width of a single atom collected with efficiency beta.
struct SourceInputs {
  double p_out = 0, g2 = 0, tau = 0;
};
SourceInputs single_atom_source(double s, double beta);
/// -beta s / (2 (1 + s)^{3/2})
double single_atom_q(double s, double beta);

}  // namespace chiral
