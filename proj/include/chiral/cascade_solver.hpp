#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chiral/eom.hpp"
#include "chiral/key_index.hpp"
#include "chiral/model.hpp"

namespace chiral {

/// Singular stage matrix, residual above limit, or integration failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int stage) : std::runtime_error(what), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

struct SolverOptions {
  VariableSet mode = VariableSet::reduced;
  double residual_target = 1e-10;
  double residual_limit = 1e-6;
  int max_refinements = 3;
};

struct SteadyStateSolution {
  SystemParams params;
  VariableSet mode = VariableSet::reduced;
  CumulantTable cumulants;
  MomentTable moments;
  std::vector<double> alphas;     // alpha_1 .. alpha_{N+1}
  std::vector<double> residuals;  // relative residual per stage (max |dv/dt| when integrated)
  std::string method = "direct";
  bool stiffness_warning = false;

  int n_atoms() const { return params.n_atoms; }
  double alpha(int j) const { return alphas.at(j - 1); }
  double mean(int atom, Axis a) const { return cumulants.value({{atom, a}}); }
  /// Every <sz_j> lies in [-1, 0].
  bool z_in_range() const;
};

SteadyStateSolution solve_chain(const SystemParams& params, const SolverOptions& options = {});

/// Explicit integration of the truncated equations from the ground state
/// until max |dv/dt| < tol.
SteadyStateSolution integrate_to_steady(const SystemParams& params, double t_max = 1e4, double tol = 1e-10,
                                        VariableSet mode = VariableSet::reduced);

SteadyStateSolution truncate_solution(const SteadyStateSolution& sol, int n);

/// alpha_j for j = 1..N+1 from the TO1 recursion alpha_{j+1} = alpha_j - 2 beta alpha_j/(1+8 alpha_j^2).
std::vector<double> mean_field_alphas(const SystemParams& params);

}  // namespace chiral
