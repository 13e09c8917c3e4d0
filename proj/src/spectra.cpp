#include "chiral/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chiral/generator.hpp"
#include "chiral/ode.hpp"
#include "chiral/partitions.hpp"
#include "row_accumulator.hpp"
#include "stage_factorization.hpp"

namespace chiral {

namespace {

using cd = std::complex<double>;
using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Moment of a key of order <= l + 1; the top order comes from the closure.
double closed_moment(const SteadyStateSolution& sol, const CumulantKey& key) {
  if (key.empty()) return 1.0;
  if (key.order() <= sol.moments.max_order()) return sol.moments.value(key);
  return moment_from_cumulants(key, sol.cumulants);
}

// <K sigma_atom^axis> with the Pauli on the right.
cd right_product_moment(const SteadyStateSolution& sol, const CumulantKey& key, int atom, Axis axis) {
  const int p = key.find_atom(atom);
  if (p < 0) return closed_moment(sol, key.with_site({atom, axis}));
  const PauliProduct prod = pauli_multiply(key.axis(p), axis);
  if (prod.result == Pauli::identity) return prod.coefficient * closed_moment(sol, key.erase(p));
  return prod.coefficient * closed_moment(sol, key.with_site({atom, to_axis(prod.result)}));
}

struct StageBlocks {
  std::vector<RowMatrix> diag, lower;
};

StageBlocks split_stages(const RegressionSystem& sys) {
  StageBlocks blocks;
  for (int n = 0; n < sys.n_atoms; ++n) {
    const int b = sys.stage_begin[n], e = sys.stage_begin[n + 1];
    std::vector<Eigen::Triplet<double>> td, tl;
    for (int r = b; r < e; ++r)
      for (RowMatrix::InnerIterator it(sys.drift, r); it; ++it) {
        const int c = static_cast<int>(it.col());
        if (c >= b) td.emplace_back(r - b, c - b, it.value());
        else tl.emplace_back(r - b, c, it.value());
      }
    RowMatrix d(e - b, e - b), l(e - b, std::max(b, 1));
    d.setFromTriplets(td.begin(), td.end());
    l.setFromTriplets(tl.begin(), tl.end());
    blocks.diag.push_back(std::move(d));
    blocks.lower.push_back(std::move(l));
  }
  return blocks;
}

// Solves (-i w - M) X = rhs by forward substitution over the stages.
Eigen::MatrixXcd resolvent(const RegressionSystem& sys, const StageBlocks& blocks, double w,
                           const Eigen::MatrixXcd& rhs) {
  Eigen::MatrixXcd x(rhs.rows(), rhs.cols());
  const cd shift(0.0, -w);
  for (int n = 0; n < sys.n_atoms; ++n) {
    const int b = sys.stage_begin[n], e = sys.stage_begin[n + 1];
    Eigen::MatrixXcd r = rhs.middleRows(b, e - b);
    if (b > 0) r += blocks.lower[n].cast<cd>() * x.topRows(b);
    Eigen::SparseMatrix<cd, Eigen::RowMajor> a = -blocks.diag[n].cast<cd>();
    for (int i = 0; i < e - b; ++i) a.coeffRef(i, i) += shift;
    const std::vector<CumulantKey> vars(sys.unknowns.begin() + b, sys.unknowns.begin() + e);
    detail::StageFactorization<cd> f;
    if (f.factor(vars, a)) {
      x.middleRows(b, e - b) = f.solve_columns(r);
    } else {
      Eigen::SparseMatrix<cd> ac(a);
      ac.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu(ac);
      if (lu.info() != Eigen::Success) throw SolverError("singular resolvent block", n + 1);
      x.middleRows(b, e - b) = lu.solve(r);
    }
  }
  return x;
}

// Sums of the single-operator unknowns per axis.
struct AxisSums {
  std::array<std::vector<int>, 3> rows;
};

AxisSums single_rows(const RegressionSystem& sys) {
  AxisSums s;
  for (int i = 0; i < sys.size(); ++i)
    if (sys.unknowns[i].order() == 1) s.rows[static_cast<int>(sys.unknowns[i].axis(0))].push_back(i);
  return s;
}

// Adds the transforms of one solved chain into g_pm and g_mm.
void accumulate_kernel(const SteadyStateSolution& sol, const std::vector<double>& omega, SpectralKernel& kernel) {
  RegressionSystem sys = build_regression_drift(sol);
  const Eigen::VectorXcd ix = regression_initial(sol, sys, {0, Axis::x});
  const Eigen::VectorXcd iy = regression_initial(sol, sys, {0, Axis::y});
  Eigen::MatrixXcd rhs(sys.size(), 4);
  rhs << ix, iy, ix.conjugate(), iy.conjugate();
  const StageBlocks blocks = split_stages(sys);
  const AxisSums sums = single_rows(sys);
  const cd i(0.0, 1.0);
  // Both transforms are even in w, so each |w| is solved once.
  std::map<double, std::pair<cd, cd>> done;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const auto hit = done.find(std::abs(omega[k]));
    if (hit != done.end()) {
      kernel.g_pm[k] += hit->second.first;
      kernel.g_mm[k] += hit->second.second;
      continue;
    }
    const Eigen::MatrixXcd x = resolvent(sys, blocks, std::abs(omega[k]), rhs);
    // f[mu][nu] = F[sum_a <<s_a^mu(tau); S^nu(0)>>]
    cd f[2][2];
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu) {
        cd acc = 0.0;
        for (int r : sums.rows[mu]) acc += x(r, nu) + std::conj(x(r, nu + 2));
        f[mu][nu] = acc;
      }
    const cd pm = 0.25 * (f[0][0] - i * f[0][1] + i * f[1][0] + f[1][1]);
    const cd mm = 0.25 * (f[0][0] - i * f[0][1] - i * f[1][0] - f[1][1]);
    done.emplace(std::abs(omega[k]), std::make_pair(pm, mm));
    kernel.g_pm[k] += pm;
    kernel.g_mm[k] += mm;
  }
}

SteadyStateSolution single_atom(const SteadyStateSolution& sol, int atom) {
  const double a = sol.alpha(atom);
  return solve_chain({1, sol.params.beta, a * a, 1});
}

SpectrumResult finish(const SpectralKernel& kernel, std::vector<double> values, double theta, std::string tag,
                      double floor) {
  SpectrumResult r;
  r.omega_grid = kernel.omega;
  r.values = std::move(values);
  r.theta = theta;
  r.tag = std::move(tag);
  r.min_value = r.values.empty() ? 0.0 : *std::min_element(r.values.begin(), r.values.end());
  r.physical = r.min_value >= floor;
  return r;
}

}  // namespace

RegressionSystem build_regression_drift(const SteadyStateSolution& sol) {
  const int n_atoms = sol.n_atoms(), top = sol.params.truncation_order;
  RegressionSystem sys;
  sys.n_atoms = n_atoms;
  sys.truncation_order = top;
  const KeyLayout& layout = sol.moments.layout();

  std::array<std::vector<int>, CumulantKey::kCapacity + 1> id;
  for (int k = 1; k <= top; ++k) id[k].assign(layout.block_size(k), -1);
  for (int n = 1; n <= n_atoms; ++n) {
    sys.stage_begin.push_back(sys.size());
    for (const CumulantKey& key : stage_variables(n, top, VariableSet::full)) {
      id[key.order()][layout.index(key)] = sys.size();
      sys.unknowns.push_back(key);
    }
  }
  sys.stage_begin.push_back(sys.size());

  const int dim = sys.size();
  const AdjointGenerator gen(std::sqrt(sol.params.drive_ratio), sol.params.beta);
  auto moment = [&](const CumulantKey& q, unsigned mask) {
    if (!mask) return 1.0;
    int order;
    const std::size_t idx = layout.subset_index(q, mask, order);
    return sol.moments.block(order)[idx];
  };

  // Rows below the top order are kept for the cumulant subtraction.
  std::vector<std::vector<std::pair<int, double>>> kept(dim);
  std::vector<Eigen::Triplet<double>> trips;
  detail::RowAccumulator acc(dim);
  for (int r = 0; r < dim; ++r) {
    const CumulantKey& key = sys.unknowns[r];
    // d/dtau m(K; B) = sum_Q c_Q sum_{R subset Q, R nonempty} k(R; B) m(Q \ R).
    // The R = {} part is <B> dm(K)/dt, which vanishes in the steady state.
    gen.apply(key, [&](const CumulantKey& q, double c) {
      const int qk = q.order();
      const unsigned full = (1u << qk) - 1;
      for (unsigned rm = 1; rm <= full; ++rm) {
        const int ro = __builtin_popcount(rm);
        if (ro > top) continue;
        const double w = c * moment(q, full & ~rm);
        if (w == 0.0) continue;
        int order;
        const std::size_t idx = layout.subset_index(q, rm, order);
        acc.add(id[order][idx], w);
      }
    });
    // k(K; B) = m(K; B) - <B> m(K) - sum_{R proper nonempty} k(R; B) m(K \ R)
    const int k = key.order();
    const unsigned full = (1u << k) - 1;
    for (unsigned rm = 1; rm < full; ++rm) {
      const double w = moment(key, full & ~rm);
      if (w == 0.0) continue;
      int order;
      const std::size_t idx = layout.subset_index(key, rm, order);
      for (const auto& [col, v] : kept[id[order][idx]]) acc.add(col, -w * v);
    }
    auto row = acc.flush();
    for (const auto& [col, v] : row) trips.emplace_back(r, col, v);
    if (k < top) kept[r] = std::move(row);
  }
  sys.drift.resize(dim, dim);
  sys.drift.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Eigen::VectorXcd regression_initial(const SteadyStateSolution& sol, const RegressionSystem& sys,
                                    const RightOperator& right) {
  const int n_atoms = sol.n_atoms(), top = sol.params.truncation_order;
  if (right.atom < 0 || right.atom > n_atoms) throw std::invalid_argument("right operator atom out of range");
  const int first = right.atom == 0 ? 1 : right.atom, last = right.atom == 0 ? n_atoms : right.atom;
  cd mean_b = 0.0;
  for (int j = first; j <= last; ++j) mean_b += sol.mean(j, right.axis);

  const KeyLayout& layout = sol.moments.layout();
  std::array<std::vector<cd>, CumulantKey::kCapacity + 1> kappa;
  for (int k = 1; k <= top; ++k) {
    kappa[k].assign(layout.block_size(k), 0.0);
    for (std::size_t idx = 0; idx < kappa[k].size(); ++idx) {
      const CumulantKey key = layout.key_at(k, idx);
      cd v = 0.0;
      for (int j = first; j <= last; ++j) v += right_product_moment(sol, key, j, right.axis);
      v -= mean_b * sol.moments.block(k)[idx];
      const unsigned full = (1u << k) - 1;
      for (unsigned rm = 1; rm < full; ++rm) {
        int ro, mo;
        const std::size_t ri = layout.subset_index(key, rm, ro);
        const std::size_t mi = layout.subset_index(key, full & ~rm, mo);
        v -= kappa[ro][ri] * sol.moments.block(mo)[mi];
      }
      kappa[k][idx] = v;
    }
  }
  Eigen::VectorXcd init(sys.size());
  for (int r = 0; r < sys.size(); ++r) {
    const CumulantKey& key = sys.unknowns[r];
    init(r) = kappa[key.order()][layout.index(key)];
  }
  return init;
}

RegressionSystem build_regression_system(const SteadyStateSolution& sol, const RightOperator& right) {
  if (sol.params.truncation_order < 2)
    throw std::invalid_argument("regression needs TO >= 2; TO1 spectra use independent atoms");
  RegressionSystem sys = build_regression_drift(sol);
  sys.right = right;
  sys.initial = regression_initial(sol, sys, right);
  return sys;
}

StabilityReport regression_stability(const RegressionSystem& sys, double tol, int max_block_dim) {
  StabilityReport rep;
  rep.checked = true;
  rep.max_real_part = -std::numeric_limits<double>::infinity();
  const StageBlocks blocks = split_stages(sys);
  for (const RowMatrix& d : blocks.diag) {
    if (d.rows() > max_block_dim) {
      rep.checked = false;
      continue;
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(d), false);
    rep.max_real_part = std::max(rep.max_real_part, es.eigenvalues().real().maxCoeff());
  }
  rep.stable = rep.max_real_part <= tol;
  return rep;
}

std::vector<cd> regression_correlation(const RegressionSystem& sys, const CumulantKey& key,
                                       const std::vector<double>& tau) {
  int row = -1;
  for (int i = 0; i < sys.size() && row < 0; ++i)
    if (sys.unknowns[i] == key) row = i;
  if (row < 0) throw std::invalid_argument("unknown regression key " + key.to_string());
  const int dim = sys.size();
  Eigen::VectorXd y(2 * dim);
  y << sys.initial.real(), sys.initial.imag();
  const OdeRhs rhs = [&](double, const Eigen::VectorXd& v, Eigen::VectorXd& d) {
    d.resize(2 * dim);
    d.head(dim) = sys.drift * v.head(dim);
    d.tail(dim) = sys.drift * v.tail(dim);
  };
  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-14;
  std::vector<cd> out;
  double t = 0.0;
  for (double target : tau) {
    if (target < t) throw std::invalid_argument("tau grid must be sorted and >= 0");
    if (target > t) t = integrate_dopri5(rhs, y, t, target, opt, nullptr);
    out.emplace_back(y(row), y(dim + row));
  }
  return out;
}

double SpectralKernel::quadrature(double theta, std::size_t i) const {
  const cd phase = std::exp(cd(0.0, 2.0 * theta));
  return 0.5 * beta * (g_pm[i] - phase * g_mm[i]).real();
}

SpectralKernel spectral_kernel(const SteadyStateSolution& sol, const std::vector<double>& omega) {
  SpectralKernel kernel;
  kernel.beta = sol.params.beta;
  kernel.omega = omega;
  kernel.g_pm.assign(omega.size(), 0.0);
  kernel.g_mm.assign(omega.size(), 0.0);
  if (sol.params.truncation_order == 1) {
    for (int j = 1; j <= sol.n_atoms(); ++j) accumulate_kernel(single_atom(sol, j), omega, kernel);
  } else {
    accumulate_kernel(sol, omega, kernel);
  }
  return kernel;
}

SpectrumResult squeezing_spectrum(const SpectralKernel& kernel, double theta) {
  std::vector<double> v(kernel.omega.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = kernel.quadrature(theta, i);
  return finish(kernel, std::move(v), theta, "theta", -0.25 - 1e-9);
}

SpectrumResult squeezing_spectrum(const SteadyStateSolution& sol, double theta, const std::vector<double>& omega) {
  return squeezing_spectrum(spectral_kernel(sol, omega), theta);
}

SpectrumResult inelastic_spectrum(const SpectralKernel& kernel) {
  std::vector<double> v(kernel.omega.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = kernel.quadrature(0.0, i) + kernel.quadrature(0.5 * std::numbers::pi, i);
  return finish(kernel, std::move(v), 0.0, "inelastic", -1e-9);
}

SpectrumResult inelastic_spectrum(const SteadyStateSolution& sol, const std::vector<double>& omega) {
  return inelastic_spectrum(spectral_kernel(sol, omega));
}

std::vector<double> quadrature_correlation(const SteadyStateSolution& sol, double theta,
                                           const std::vector<double>& tau) {
  std::vector<double> out(tau.size(), 0.0);
  auto add_chain = [&](const SteadyStateSolution& s) {
    RegressionSystem sys = build_regression_drift(s);
    const AxisSums sums = single_rows(sys);
    std::vector<cd> r[2][2];
    for (int nu = 0; nu < 2; ++nu) {
      sys.initial = regression_initial(s, sys, {0, static_cast<Axis>(nu)});
      for (int mu = 0; mu < 2; ++mu) {
        r[mu][nu].assign(tau.size(), 0.0);
        for (int row : sums.rows[mu]) {
          const auto c = regression_correlation(sys, sys.unknowns[row], tau);
          for (std::size_t t = 0; t < tau.size(); ++t) r[mu][nu][t] += c[t];
        }
      }
    }
    const cd i(0.0, 1.0), phase = std::exp(cd(0.0, 2.0 * theta));
    for (std::size_t t = 0; t < tau.size(); ++t) {
      const cd pm = 0.25 * (r[0][0][t] - i * r[0][1][t] + i * r[1][0][t] + r[1][1][t]);
      const cd mm = 0.25 * (r[0][0][t] - i * r[0][1][t] - i * r[1][0][t] - r[1][1][t]);
      out[t] += 0.5 * sol.params.beta * (pm - phase * mm).real();
    }
  };
  if (sol.params.truncation_order == 1) {
    for (int j = 1; j <= sol.n_atoms(); ++j) add_chain(single_atom(sol, j));
  } else {
    add_chain(sol);
  }
  return out;
}

double integrated_fluctuations(const SteadyStateSolution& sol, double theta) {
  // <<S^dag S>> and <<S S>> with S = sum_j (x_j - i y_j)/2
  const int n = sol.n_atoms();
  const bool pairs = sol.params.truncation_order >= 2;
  cd pm = 0.0, mm = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = sol.mean(i, Axis::x), y = sol.mean(i, Axis::y), z = sol.mean(i, Axis::z);
    const cd s(0.5 * x, -0.5 * y);
    pm += 0.5 * (1.0 + z) - std::norm(s);
    mm -= s * s;
    if (!pairs) continue;
    for (int j = i + 1; j <= n; ++j) {
      const double xx = sol.cumulants.value({{i, Axis::x}, {j, Axis::x}});
      const double yy = sol.cumulants.value({{i, Axis::y}, {j, Axis::y}});
      const double xy = sol.cumulants.value({{i, Axis::x}, {j, Axis::y}});
      const double yx = sol.cumulants.value({{i, Axis::y}, {j, Axis::x}});
      pm += 0.5 * (xx + yy);
      mm += cd(0.5 * (xx - yy), -0.5 * (xy + yx));
    }
  }
  return 0.5 * sol.params.beta * (pm - std::exp(cd(0.0, 2.0 * theta)) * mm).real();
}

double spectral_integral(const std::vector<double>& omega, const std::vector<double>& values) {
  if (omega.size() != values.size() || omega.size() < 2) throw std::invalid_argument("bad spectrum grid");
  double sum = 0.0;
  for (std::size_t i = 1; i < omega.size(); ++i)
    sum += 0.5 * (omega[i] - omega[i - 1]) * (values[i] + values[i - 1]);
  // c/w^2 beyond each end integrates to w_end * S(w_end)
  sum += std::abs(omega.front()) * values.front() + std::abs(omega.back()) * values.back();
  return sum / (2.0 * std::numbers::pi);
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw std::invalid_argument("grid needs points >= 2 and max > min");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

std::vector<double> default_omega_grid(const SystemParams& params, int points) {
  const double s = derive(params).saturation_s;
  const double half = std::max(8.0, s + 4.0);
  return linear_grid(-half, half, points);
}

PhysicalityReport check_physicality(const SpectralKernel& kernel, double tol) {
  PhysicalityReport rep;
  rep.min_quadrature = rep.min_inelastic = rep.min_uncertainty = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kernel.omega.size(); ++i) {
    const double s0 = kernel.quadrature(0.0, i), s1 = kernel.quadrature(0.5 * std::numbers::pi, i);
    rep.min_quadrature = std::min({rep.min_quadrature, s0, s1});
    rep.min_inelastic = std::min(rep.min_inelastic, s0 + s1);
    rep.min_uncertainty = std::min(rep.min_uncertainty, (s0 + 0.25) * (s1 + 0.25));
  }
  rep.lower_bound = rep.min_quadrature >= -0.25 - tol;
  rep.inelastic_nonnegative = rep.min_inelastic >= -tol;
  rep.uncertainty = rep.min_uncertainty >= 1.0 / 16.0 - tol;
  return rep;
}

}  // namespace chiral
