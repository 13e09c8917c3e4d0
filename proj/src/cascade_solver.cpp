#include "chiral/cascade_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "chiral/ode.hpp"
#include "chiral/partitions.hpp"
#include "stage_factorization.hpp"

namespace chiral {

namespace {

double relative_residual(const StageSystem& sys, const Eigen::VectorXd& v) {
  const double scale = std::max(sys.source.norm(), 1e-300);
  return (sys.matrix * v + sys.source).norm() / scale;
}

template <class Factor>
Eigen::VectorXd refine(const Factor& lu, const StageSystem& sys, Eigen::VectorXd v, double target, int steps) {
  for (int i = 0; i < steps && relative_residual(sys, v) > target; ++i) {
    const Eigen::VectorXd r = sys.matrix * v + sys.source;
    v -= lu.solve(r);
  }
  return v;
}

Eigen::VectorXd solve_stage(const StageSystem& sys, const SolverOptions& opt, double& residual) {
  Eigen::VectorXd v;
  detail::StageFactorization<double> block;
  if (block.factor(sys.variables, sys.matrix)) {
    v = refine(block, sys, block.solve(-sys.source), opt.residual_target, opt.max_refinements);
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    Eigen::SparseMatrix<double> m = sys.matrix;
    m.makeCompressed();
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw SolverError("singular stage matrix", sys.stage_index);
    v = refine(lu, sys, lu.solve(-sys.source), opt.residual_target, opt.max_refinements);
  }
  residual = relative_residual(sys, v);
  if (!std::isfinite(residual) || residual > opt.residual_limit)
    throw SolverError("stage residual " + std::to_string(residual) + " above limit", sys.stage_index);
  return v;
}

// Fills the moments of every key whose highest atom is n.
void fill_stage_moments(int n, const CumulantTable& cumulants, MomentTable& moments) {
  const KeyLayout& layout = cumulants.layout();
  for (int k = 1; k <= cumulants.max_order() && k <= n; ++k) {
    const std::size_t begin = layout.block_size(k, n - 1), end = layout.block_size(k, n);
    const unsigned others = (1u << (k - 1)) - 1, last = 1u << (k - 1);
    for (std::size_t i = begin; i < end; ++i) {
      const CumulantKey key = layout.key_at(k, i);
      double v = 0.0;
      for (unsigned s = 0; s <= others; ++s) {
        if ((s & others) != s) continue;
        const CumulantKey b = key.subset(s | last);
        const CumulantKey r = key.subset(others & ~s);
        const double kb = cumulants.block(b.order())[layout.index(b)];
        v += r.empty() ? kb : kb * moments.block(r.order())[layout.index(r)];
      }
      moments.block(k)[i] = v;
    }
  }
}

}  // namespace

bool SteadyStateSolution::z_in_range() const {
  for (int j = 1; j <= n_atoms(); ++j) {
    const double z = mean(j, Axis::z);
    if (z < -1.0 - 1e-12 || z > 1e-12) return false;
  }
  return true;
}

SteadyStateSolution solve_chain(const SystemParams& params, const SolverOptions& options) {
  SteadyStateSolution sol;
  sol.params = validate(params);
  sol.mode = options.mode;
  const int n_atoms = sol.params.n_atoms, top = sol.params.truncation_order;
  sol.cumulants = CumulantTable(n_atoms, top);
  sol.moments = MomentTable(n_atoms, top);
  for (int n = 1; n <= n_atoms; ++n) {
    const StageSystem sys = generate_stage_system(sol.params, n, sol.moments, options.mode);
    double residual = 0.0;
    const Eigen::VectorXd v = solve_stage(sys, options, residual);
    for (std::size_t i = 0; i < sys.variables.size(); ++i) sol.cumulants.at(sys.variables[i]) = v(i);
    fill_stage_moments(n, sol.cumulants, sol.moments);
    sol.residuals.push_back(residual);
  }
  sol.alphas = effective_drives(sol.cumulants, sol.params);
  return sol;
}

SteadyStateSolution integrate_to_steady(const SystemParams& params, double t_max, double tol, VariableSet mode) {
  if (!(t_max > 0.0) || !(tol > 0.0)) throw ValidationError("t_max and tol must be positive");
  SteadyStateSolution sol;
  sol.params = validate(params);
  sol.mode = mode;
  sol.method = "integrate";
  const int n_atoms = sol.params.n_atoms, top = sol.params.truncation_order;

  CumulantTable state(n_atoms, top);
  std::vector<CumulantKey> keys;
  state.for_each([&](const CumulantKey& k, double) {
    if (mode == VariableSet::full || is_reduced_key(k)) keys.push_back(k);
  });
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(keys.size()));
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i].order() == 1 && keys[i].axis(0) == Axis::z) y(i) = -1.0;

  auto load = [&](const Eigen::VectorXd& v) {
    for (std::size_t i = 0; i < keys.size(); ++i) state.at(keys[i]) = v(i);
  };
  const OdeRhs rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& d) {
    load(v);
    const CumulantTable dt = closure_drift(state, sol.params, mode);
    for (std::size_t i = 0; i < keys.size(); ++i) d(i) = dt.value(keys[i]);
  };
  double rate = 0.0;
  OdeOptions opt;
  opt.rtol = std::min(1e-8, tol * 10);
  opt.atol = std::min(1e-10, tol);
  OdeStats stats;
  const double t_end = integrate_dopri5(rhs, y, 0.0, t_max, opt,
                                        [&](double, const Eigen::VectorXd&, const Eigen::VectorXd& d) {
                                          rate = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
                                          return rate < tol;
                                        },
                                        &stats);
  if (rate >= tol) throw SolverError("integration did not converge by t_max=" + std::to_string(t_end), 0);
  load(y);
  sol.cumulants = state;
  sol.moments = moments_from_cumulants(state);
  sol.alphas = effective_drives(sol.cumulants, sol.params);
  sol.residuals.assign(n_atoms, rate);
  sol.stiffness_warning = stats.stiffness_warning;
  return sol;
}

SteadyStateSolution truncate_solution(const SteadyStateSolution& sol, int n) {
  if (n < 1 || n > sol.n_atoms()) throw std::out_of_range("truncation size out of range");
  SteadyStateSolution out;
  out.params = sol.params;
  out.params.n_atoms = n;
  out.mode = sol.mode;
  out.method = sol.method;
  out.cumulants = sol.cumulants.truncated(n);
  out.moments = sol.moments.truncated(n);
  out.alphas.assign(sol.alphas.begin(), sol.alphas.begin() + n + 1);
  out.residuals.assign(sol.residuals.begin(), sol.residuals.begin() + std::min<std::size_t>(n, sol.residuals.size()));
  out.stiffness_warning = sol.stiffness_warning;
  return out;
}

std::vector<double> mean_field_alphas(const SystemParams& params) {
  std::vector<double> a(params.n_atoms + 1);
  a[0] = std::sqrt(params.drive_ratio);
  for (int j = 1; j <= params.n_atoms; ++j)
    a[j] = a[j - 1] - 2.0 * params.beta * a[j - 1] / (1.0 + 8.0 * a[j - 1] * a[j - 1]);
  return a;
}

}  // namespace chiral
