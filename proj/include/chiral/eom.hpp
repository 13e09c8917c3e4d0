#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chiral/generator.hpp"
#include "chiral/key_index.hpp"
#include "chiral/model.hpp"

namespace chiral {

/// FULL keeps every canonical key. REDUCED drops keys with an odd number of x
/// factors, which vanish under resonant drive.
enum class VariableSet { full, reduced };

const char* to_string(VariableSet mode);
VariableSet parse_variable_set(std::string_view text);

/// Keys of order 1..max_order whose highest atom is stage, grouped by order
/// and then in table order.
std::vector<CumulantKey> stage_variables(int stage, int max_order, VariableSet mode);

/// Rows give d/dt of the stage cumulants (cumulant form) or of the stage
/// moments (moment form) as matrix * v + source, where v are the stage
/// cumulants and all lower-stage values are frozen into the coefficients.
enum class StageForm { cumulant, moment };

struct StageSystem {
  int stage_index = 0;
  std::vector<CumulantKey> variables;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd source;

  Eigen::VectorXd drift(const Eigen::VectorXd& v) const { return matrix * v + source; }
};

/// lower must hold the moments of atoms 1..stage-1 up to the truncation order.
StageSystem generate_stage_system(const SystemParams& params, int stage, const MomentTable& lower,
                                  VariableSet mode = VariableSet::reduced, StageForm form = StageForm::cumulant);
StageSystem generate_stage_system(const SystemParams& params, int stage, const CumulantTable& lower,
                                  VariableSet mode = VariableSet::reduced, StageForm form = StageForm::cumulant);

/// {stage, variables[], matrix (dense row-major), source[]}
std::string stage_system_json(const StageSystem& system);

/// Time derivative of every cumulant in state under the truncated dynamics,
/// assembled from moment-form stage systems.
CumulantTable generated_drift(const CumulantTable& state, const SystemParams& params, VariableSet mode);

/// Same derivative computed directly from the Heisenberg equations with
/// closure of the (l+1)-body moments; independent of the stage machinery.
CumulantTable closure_drift(const CumulantTable& state, const SystemParams& params, VariableSet mode);

/// as_printed keeps the published pair equations term by term (with the yz
/// equation reused for zy); corrected adds the direct (i,j) pair terms that
/// the master equation produces in the yy, yz, zy and zz equations.
enum class Transcription { corrected, as_printed };

/// Written-out TO2 equations for the means and the symmetry-reduced pair
/// cumulants (xx, yy, yz, zy, zz). state must have max order >= 2.
/// Same-atom cumulants inside the sums use the reduced Pauli product,
/// e.g. <<s_i^y s_i^y>> = 1 - <s_i^y>^2.
CumulantTable hardcoded_to2_rhs(const CumulantTable& state, const SystemParams& params,
                                Transcription form = Transcription::corrected);

/// Effective drive alpha_j for j = 1..N+1 from the means of state.
std::vector<double> effective_drives(const CumulantTable& state, const SystemParams& params);

struct GeneratorReport {
  int n_atoms = 0;
  VariableSet mode = VariableSet::reduced;
  int samples = 0;
  double max_discrepancy = 0.0;  // against the corrected equations
  std::string worst_key;
  double printed_discrepancy = 0.0;  // against the equations as printed
  bool pass = false;
};

/// Compares generated_drift at TO2 with hardcoded_to2_rhs on random states.
/// In FULL mode the odd-x derivatives must vanish as well.
GeneratorReport verify_generator(const SystemParams& params, VariableSet mode = VariableSet::reduced,
                                 int samples = 4, std::uint64_t seed = 7);

}  // namespace chiral
