#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <string>
#include <vector>

#include "chiral/cascade_solver.hpp"
#include "chiral/pauli.hpp"

namespace chiral {

/// Fixed operator B(0) on the right of the two-time cumulants. atom == 0 is
/// the collective S^axis = sum_j s_j^axis.
struct RightOperator {
  int atom = 0;
  Axis axis = Axis::x;
};

/// Linear tau-drift of the mixed cumulants <<K(tau); B(0)>> for every key K of
/// order <= l. The unknowns are grouped by highest atom so the drift is block
/// lower triangular by stage.
struct RegressionSystem {
  int n_atoms = 0;
  int truncation_order = 0;
  std::vector<CumulantKey> unknowns;
  std::vector<int> stage_begin;  // size n_atoms + 1
  Eigen::SparseMatrix<double, Eigen::RowMajor> drift;
  RightOperator right;
  Eigen::VectorXcd initial;

  int size() const { return static_cast<int>(unknowns.size()); }
};

/// Drift without the initial vector; shared by every right operator.
RegressionSystem build_regression_drift(const SteadyStateSolution& sol);
/// tau = 0 values <<K; B>> from the steady state, with B to the right.
Eigen::VectorXcd regression_initial(const SteadyStateSolution& sol, const RegressionSystem& drift,
                                    const RightOperator& right);
/// Requires TO >= 2.
RegressionSystem build_regression_system(const SteadyStateSolution& sol, const RightOperator& right);

struct StabilityReport {
  double max_real_part = 0.0;
  bool checked = false;  // false when some stage block was too large
  bool stable = false;
};
/// Eigenvalues of each stage block; stable when no real part exceeds tol.
StabilityReport regression_stability(const RegressionSystem& drift, double tol = 1e-8,
                                     int max_block_dim = 1500);

/// <<X(tau) B(0)>> for the single-operator unknown X on a tau grid.
std::vector<std::complex<double>> regression_correlation(const RegressionSystem& sys, const CumulantKey& key,
                                                         const std::vector<double>& tau);

/// Transforms of the collective correlations of the output field:
/// g_pm = F[<<S^dag(tau) S(0)>>], g_mm = F[<<S(tau) S(0)>>] with
/// F(w) = int_0^inf (e^{iwt} + e^{-iwt}) f(t) dt.
struct SpectralKernel {
  double beta = 0.0;
  std::vector<double> omega;
  std::vector<std::complex<double>> g_pm, g_mm;

  /// :S_theta(w_i):
  double quadrature(double theta, std::size_t i) const;
};

/// TO1 uses N independent single atoms driven at their local alpha_j.
SpectralKernel spectral_kernel(const SteadyStateSolution& sol, const std::vector<double>& omega);

struct SpectrumResult {
  std::vector<double> omega_grid;
  std::vector<double> values;
  double theta = 0.0;
  std::string tag;  // "theta" or "inelastic"
  double min_value = 0.0;
  bool physical = true;
};

SpectrumResult squeezing_spectrum(const SpectralKernel& kernel, double theta);
SpectrumResult squeezing_spectrum(const SteadyStateSolution& sol, double theta, const std::vector<double>& omega);
SpectrumResult inelastic_spectrum(const SpectralKernel& kernel);
SpectrumResult inelastic_spectrum(const SteadyStateSolution& sol, const std::vector<double>& omega);

/// <:dX_theta(tau) dX_theta(0):> on a tau grid.
std::vector<double> quadrature_correlation(const SteadyStateSolution& sol, double theta,
                                           const std::vector<double>& tau);

/// <:dX_theta(0) dX_theta(0):> from the equal-time cumulants.
double integrated_fluctuations(const SteadyStateSolution& sol, double theta);

/// int dw/(2 pi) of a spectrum by the trapezoid rule, plus the c/w^2 tails
/// beyond both grid ends fitted to the end values.
double spectral_integral(const std::vector<double>& omega, const std::vector<double>& values);

/// 801 points on [-8, 8], widened to +-(s + 4) in the Mollow regime.
std::vector<double> default_omega_grid(const SystemParams& params, int points = 801);
std::vector<double> linear_grid(double lo, double hi, int points);

struct PhysicalityReport {
  double min_quadrature = 0.0;   // over both quadratures
  double min_inelastic = 0.0;
  double min_uncertainty = 0.0;  // min of (S_0 + 1/4)(S_pi/2 + 1/4)
  bool lower_bound = true;       // :S_theta: >= -1/4
  bool inelastic_nonnegative = true;
  bool uncertainty = true;       // product >= 1/16
  bool pass() const { return lower_bound && inelastic_nonnegative && uncertainty; }
};

PhysicalityReport check_physicality(const SpectralKernel& kernel, double tol = 1e-9);

}  // namespace chiral
