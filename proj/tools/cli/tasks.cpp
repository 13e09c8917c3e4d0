#include "cli/tasks.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "chiral/cascade_solver.hpp"
#include "chiral/observables.hpp"
#include "chiral/oracle.hpp"
#include "chiral/partitions.hpp"
#include "chiral/spectra.hpp"
#include "cli/output.hpp"

namespace chiral::cli {

namespace {

using nlohmann::json;

// g2 sums over pairs of pairs; beyond this the cost dominates a steady run.
constexpr int kSteadyG2MaxAtoms = 40;

int worker_count(const RunConfig& c) {
  if (c.workers > 0) return c.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
void parallel_for(int count, int workers, F&& body) {
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  const int n = std::min(count, workers);
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

SteadyStateSolution solve(const SystemParams& params, const RunConfig& c) {
  if (c.solver == "integrate") return integrate_to_steady(params, 1e4, 1e-10, c.mode);
  SolverOptions opt;
  opt.mode = c.mode;
  return solve_chain(params, opt);
}

std::string theta_label(double theta) {
  const double half_pi = 0.5 * std::numbers::pi;
  if (theta == 0.0) return "0";
  if (std::abs(theta - half_pi) < 1e-15) return "pi/2";
  if (std::abs(theta - std::numbers::pi) < 1e-15) return "pi";
  return format_double(theta);
}

json residual_summary(const SteadyStateSolution& sol) {
  const double max = sol.residuals.empty() ? 0.0 : *std::max_element(sol.residuals.begin(), sol.residuals.end());
  return {{"method", sol.method}, {"max", max}, {"per_stage", sol.residuals}};
}

json powers_json(const PowerBreakdown& p) {
  return {{"p_in", p.p_in}, {"p_el", p.p_el}, {"p_ie", p.p_ie}, {"p_out", p.p_out}};
}

void flag_solution(const SteadyStateSolution& sol, ResultDocument& doc) {
  if (!sol.z_in_range()) doc.unphysical.push_back("sz outside [-1, 0]");
  if (power_breakdown(sol).p_ie < 0.0) doc.unphysical.push_back("negative inelastic power");
  doc.stiffness_warning = doc.stiffness_warning || sol.stiffness_warning;
}

int finish(const RunConfig& c, ResultDocument& doc) {
  const std::string path = output_path(c, ".json");
  doc.files.push_back(path);
  write_json(path, doc.to_json(c));
  for (const auto& f : doc.unphysical) spdlog::warn("{}: unphysical: {}", c.prefix(), f);
  return doc.unphysical.empty() ? kExitOk : kExitPhysicality;
}

void write_table(const RunConfig& c, ResultDocument& doc, const CsvTable& t, const std::string& suffix) {
  const std::string path = output_path(c, suffix);
  t.write(path);
  doc.files.push_back(path);
}

int task_steady(const RunConfig& c) {
  const SteadyStateSolution sol = solve(c.params, c);
  ResultDocument doc;
  CsvTable cum({"key", "order", "value"});
  sol.cumulants.for_each([&](const CumulantKey& k, double v) {
    if (c.mode == VariableSet::reduced && !is_reduced_key(k)) return;
    cum.add_row({k.to_string()}, {static_cast<double>(k.order()), v});
  });
  write_table(c, doc, cum, "_cumulants.csv");
  CsvTable atoms({"atom", "alpha", "x", "y", "z"});
  for (int j = 1; j <= sol.n_atoms(); ++j)
    atoms.add_row({static_cast<double>(j), sol.alpha(j), sol.mean(j, Axis::x), sol.mean(j, Axis::y),
                   sol.mean(j, Axis::z)});
  write_table(c, doc, atoms, "_atoms.csv");

  const DerivedScalars d = derive(sol.params);
  doc.results["optical_depth"] = d.optical_depth;
  doc.results["s"] = d.saturation_s;
  doc.results["alpha_out"] = sol.alpha(sol.n_atoms() + 1);
  doc.results["powers"] = powers_json(power_breakdown(sol));
  if (sol.n_atoms() <= kSteadyG2MaxAtoms) {
    const G2Result g = g2_zero(sol);
    doc.results["g2"] = {{"value", g.value}, {"trusted_order", g.trusted_order}};
    if (!g.physical) doc.unphysical.push_back("negative g2");
  }
  doc.residuals = residual_summary(sol);
  flag_solution(sol, doc);
  return finish(c, doc);
}

int task_spectrum(const RunConfig& c) {
  const SteadyStateSolution sol = solve(c.params, c);
  const std::vector<double> omega = omega_grid(c);
  const SpectralKernel k = spectral_kernel(sol, omega);
  ResultDocument doc;
  std::vector<std::string> header{"omega", "S_ie"};
  for (double t : c.thetas) header.push_back("S_theta=" + theta_label(t));
  CsvTable table(header);
  const SpectrumResult inel = inelastic_spectrum(k);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    std::vector<double> row{omega[i], inel.values[i]};
    for (double t : c.thetas) row.push_back(k.quadrature(t, i));
    table.add_row(row);
  }
  write_table(c, doc, table, ".csv");

  const PhysicalityReport rep = check_physicality(k);
  doc.results["physicality"] = {{"min_quadrature", rep.min_quadrature},
                                {"min_inelastic", rep.min_inelastic},
                                {"min_uncertainty_product", rep.min_uncertainty},
                                {"lower_bound", rep.lower_bound},
                                {"inelastic_nonnegative", rep.inelastic_nonnegative},
                                {"uncertainty", rep.uncertainty}};
  if (!rep.lower_bound) doc.unphysical.push_back("quadrature spectrum below -1/4");
  if (!rep.inelastic_nonnegative) doc.unphysical.push_back("negative inelastic spectrum");
  json identity = json::array();
  for (double t : c.thetas) {
    const double area = spectral_integral(omega, squeezing_spectrum(k, t).values);
    const double direct = integrated_fluctuations(sol, t);
    identity.push_back({{"theta", t}, {"spectral_integral", area}, {"equal_time", direct}});
  }
  doc.results["integral_identity"] = identity;
  doc.results["powers"] = powers_json(power_breakdown(sol));
  doc.residuals = residual_summary(sol);
  flag_solution(sol, doc);
  return finish(c, doc);
}

int task_g2(const RunConfig& c) {
  const SteadyStateSolution sol = solve(c.params, c);
  const G2Result g = g2_zero(sol);
  ResultDocument doc;
  CsvTable t({"n_atoms", "p_out", "g2", "q_collective"});
  t.add_row({static_cast<double>(sol.n_atoms()), g.p_out, g.value, mandel_q(g.p_out, g.value, kCollectiveTau)});
  write_table(c, doc, t, ".csv");
  doc.results = {{"g2", g.value}, {"p_out", g.p_out}, {"trusted_order", g.trusted_order}, {"tau", kCollectiveTau}};
  if (!g.physical) doc.unphysical.push_back("negative g2");
  doc.residuals = residual_summary(sol);
  flag_solution(sol, doc);
  return finish(c, doc);
}

std::vector<std::string> sweep_header(const RunConfig& c) {
  std::vector<std::string> h{"order", "n_atoms", "od",         "beta",       "drive_ratio",       "s",
                             "p_in",  "p_el",    "p_ie",       "p_out",      "p_el_over_p_in",   "lambert",
                             "beer_lambert"};
  for (double t : c.thetas) h.push_back("X_theta=" + theta_label(t));
  if (c.sweep.g2) h.push_back("g2");
  return h;
}

std::vector<double> sweep_row(const RunConfig& c, const SteadyStateSolution& sol) {
  const SystemParams& p = sol.params;
  const PowerBreakdown pw = power_breakdown(sol);
  const double p_in = pw.p_in;
  std::vector<double> row{static_cast<double>(p.truncation_order),
                          static_cast<double>(p.n_atoms),
                          4.0 * p.beta * p.n_atoms,
                          p.beta,
                          p.drive_ratio,
                          8.0 * p.drive_ratio,
                          p_in,
                          pw.p_el,
                          pw.p_ie,
                          pw.p_out,
                          p_in > 0 ? pw.p_el / p_in : 1.0,
                          p_in > 0 ? lambert_power(p.n_atoms, p) / p_in : 1.0,
                          std::exp(-4.0 * p.beta * p.n_atoms)};
  for (double t : c.thetas) row.push_back(integrated_fluctuations(sol, t));
  if (c.sweep.g2) row.push_back(g2_zero(sol).value);
  return row;
}

int task_sweep(const RunConfig& c) {
  const auto& s = c.sweep;
  std::vector<std::vector<std::vector<double>>> rows(s.orders.size());
  std::vector<json> residuals(s.orders.size());
  std::atomic<bool> unphysical{false}, stiff{false};
  const int workers = worker_count(c);
  if (s.axis == "atoms") {
    // one solve per order; smaller chains are prefixes of the longest
    parallel_for(static_cast<int>(s.orders.size()), workers, [&](int oi) {
      SystemParams p = c.params;
      p.truncation_order = s.orders[oi];
      p.n_atoms = static_cast<int>(s.values.back());
      spdlog::info("sweep: TO{} N={}", p.truncation_order, p.n_atoms);
      const SteadyStateSolution full = solve(p, c);
      residuals[oi] = residual_summary(full);
      if (full.stiffness_warning) stiff = true;
      for (double n : s.values) {
        const SteadyStateSolution sol = truncate_solution(full, static_cast<int>(n));
        if (!sol.z_in_range() || power_breakdown(sol).p_ie < 0.0) unphysical = true;
        rows[oi].push_back(sweep_row(c, sol));
      }
    });
  } else {
    const int nv = static_cast<int>(s.values.size());
    for (auto& r : rows) r.resize(nv);
    std::vector<json> point_residuals(s.orders.size() * nv);
    parallel_for(static_cast<int>(s.orders.size()) * nv, workers, [&](int idx) {
      const int oi = idx / nv, vi = idx % nv;
      SystemParams p = c.params;
      p.truncation_order = s.orders[oi];
      const double v = s.values[vi];
      if (s.axis == "beta") p.beta = v;
      if (s.axis == "drive_ratio") p.drive_ratio = v;
      if (s.axis == "s") p.drive_ratio = drive_ratio_from_s(v);
      const SteadyStateSolution sol = solve(validate(p), c);
      if (!sol.z_in_range() || power_breakdown(sol).p_ie < 0.0) unphysical = true;
      if (sol.stiffness_warning) stiff = true;
      rows[oi][vi] = sweep_row(c, sol);
      point_residuals[idx] = residual_summary(sol)["max"];
    });
    for (std::size_t oi = 0; oi < s.orders.size(); ++oi)
      residuals[oi] = {{"max_per_point", json(std::vector<json>(point_residuals.begin() + oi * nv,
                                                               point_residuals.begin() + (oi + 1) * nv))}};
  }
  ResultDocument doc;
  CsvTable t(sweep_header(c));
  for (const auto& order_rows : rows)
    for (const auto& r : order_rows) t.add_row(r);
  write_table(c, doc, t, ".csv");
  json res = json::object();
  for (std::size_t oi = 0; oi < s.orders.size(); ++oi) res["TO" + std::to_string(s.orders[oi])] = residuals[oi];
  doc.residuals = res;
  doc.results["rows"] = t.rows();
  doc.stiffness_warning = stiff;
  if (unphysical) doc.unphysical.push_back("some sweep points have sz outside [-1, 0] or negative inelastic power");
  return finish(c, doc);
}

int task_corrmap(const RunConfig& c) {
  const SteadyStateSolution sol = solve(c.params, c);
  const CorrelationMap m = correlation_map(sol);
  ResultDocument doc;
  CsvTable map({"i", "j", "value"});
  for (int i = 1; i <= m.n_atoms; ++i)
    for (int j = i + 1; j <= m.n_atoms; ++j) map.add_row({static_cast<double>(i), static_cast<double>(j), m.at(i, j)});
  write_table(c, doc, map, ".csv");
  CsvTable row({"j", "od", "numeric", "approx"});
  for (int j = 2; j <= m.n_atoms; ++j)
    row.add_row({static_cast<double>(j), 4.0 * sol.params.beta * j, m.at(1, j), m.first_row_approx[j]});
  write_table(c, doc, row, "_first_row.csv");
  doc.results["j_star_numeric"] = m.j_star_numeric;
  doc.results["od_star_numeric"] = m.od_star_numeric;
  doc.results["j_star_predicted"] = m.j_star_predicted ? json(*m.j_star_predicted) : json(nullptr);
  doc.results["od_star_predicted"] = m.od_star_predicted ? json(*m.od_star_predicted) : json(nullptr);
  if (m.j_star_predicted && *m.j_star_predicted > m.n_atoms)
    doc.results["note"] = "predicted j_star lies beyond the chain";
  doc.residuals = residual_summary(sol);
  flag_solution(sol, doc);
  return finish(c, doc);
}

int task_compare_oracle(const RunConfig& c) {
  const SteadyStateSolution sol = solve(c.params, c);
  const Liouvillian l = build_liouvillian(c.params);
  const DensityMatrix rho = steady_state(l);
  const bool exact_regime = c.params.n_atoms <= c.params.truncation_order;
  ResultDocument doc;
  CsvTable t({"quantity", "cascade", "exact", "abs_diff"});
  double moment_dev = 0.0, worst = 0.0;
  auto add = [&](const std::string& name, double a, double b) {
    t.add_row({name}, {a, b, std::abs(a - b)});
    worst = std::max(worst, std::abs(a - b));
  };
  const MomentTable exact = exact_moment_table(rho, c.params.truncation_order);
  exact.for_each([&](const CumulantKey& k, double v) {
    const double m = sol.moments.value(k);
    moment_dev = std::max(moment_dev, std::abs(m - v));
    add("m(" + k.to_string() + ")", m, v);
  });
  const ExactPowers e = exact_powers(rho, c.params);
  const PowerBreakdown p = power_breakdown(sol);
  add("p_el", p.p_el, e.p_el);
  add("p_ie", p.p_ie, e.p_ie);
  add("g2", g2_zero(sol).value, exact_g2(rho, c.params));
  const std::vector<double> omega = omega_grid(c);
  const SpectralKernel k = spectral_kernel(sol, omega);
  for (double theta : c.thetas) {
    const auto ex = exact_squeezing_spectrum(rho, l, theta, omega);
    for (std::size_t i = 0; i < omega.size(); ++i)
      add("S_theta=" + theta_label(theta) + "(" + format_double(omega[i]) + ")", k.quadrature(theta, i), ex[i]);
  }
  write_table(c, doc, t, ".csv");
  doc.results = {{"max_moment_deviation", moment_dev}, {"max_deviation", worst}, {"exact_regime", exact_regime}};
  doc.residuals = residual_summary(sol);
  flag_solution(sol, doc);
  if (exact_regime && worst >= 1e-8) doc.unphysical.push_back("deviation from the exact chain above 1e-8");
  return finish(c, doc);
}

int task_qfactor(const RunConfig& c) {
  const int n = static_cast<int>(c.s_values.size());
  std::vector<G2Result> g(n);
  parallel_for(n, worker_count(c), [&](int i) {
    SystemParams p = c.params;
    p.drive_ratio = drive_ratio_from_s(c.s_values[i]);
    g[i] = g2_zero(solve(validate(p), c));
  });
  ResultDocument doc;
  CsvTable t({"s", "drive_ratio", "p_out", "g2", "q_collective", "q_single_beta", "q_single_unit"});
  double qmin = 0.0, smin = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = c.s_values[i];
    const double q = g[i].p_out > 0 ? mandel_q(g[i].p_out, g[i].value, kCollectiveTau) : 0.0;
    if (q < qmin) {
      qmin = q;
      smin = s;
    }
    t.add_row({s, drive_ratio_from_s(s), g[i].p_out, g[i].value, q, single_atom_q(s, c.params.beta),
               single_atom_q(s, 1.0)});
    if (!g[i].physical) doc.unphysical.push_back("negative g2 at s=" + format_double(s));
  }
  write_table(c, doc, t, ".csv");
  doc.results = {{"tau", kCollectiveTau}, {"q_min", qmin}, {"s_at_q_min", smin},
                 {"single_atom_q_min_over_beta", single_atom_q(2.0, 1.0)}};
  return finish(c, doc);
}

int execute(const RunConfig& raw) {
  const RunConfig c = finalize(raw);
  spdlog::info("{}: task {} N={} beta={} P_in/P_sat={} TO{}", c.prefix(), task_name(c.task), c.params.n_atoms,
               c.params.beta, c.params.drive_ratio, c.params.truncation_order);
  switch (c.task) {
    case Task::steady: return task_steady(c);
    case Task::spectrum: return task_spectrum(c);
    case Task::g2: return task_g2(c);
    case Task::sweep: return task_sweep(c);
    case Task::corrmap: return task_corrmap(c);
    case Task::compare_oracle: return task_compare_oracle(c);
    case Task::qfactor: return task_qfactor(c);
  }
  return kExitValidation;
}

std::string short_number(double v) { return format_double(v); }

RunConfig figure_config(const RunConfig& base, const std::string& tag, Task task, int n, double beta, double ratio,
                        int order) {
  RunConfig c;
  c.task = task;
  c.params.n_atoms = n;
  c.params.beta = beta;
  c.params.drive_ratio = ratio;
  c.params.truncation_order = order;
  c.out_dir = base.out_dir;
  c.workers = base.workers;
  c.solver = base.solver;
  c.tag = tag;
  return c;
}

RunConfig atom_sweep(const RunConfig& base, const std::string& tag, int n_max, double beta, double ratio,
                     std::vector<int> orders, bool g2 = false) {
  RunConfig c = figure_config(base, tag, Task::sweep, n_max, beta, ratio, orders.front());
  c.sweep.axis = "atoms";
  for (int n = 1; n <= n_max; ++n) c.sweep.values.push_back(n);
  c.sweep.orders = std::move(orders);
  c.sweep.g2 = g2;
  return c;
}

std::string label(double beta, double ratio) { return "_b" + short_number(beta) + "_d" + short_number(ratio); }

std::vector<RunConfig> figure_plan(const std::string& tag, const RunConfig& base) {
  std::vector<RunConfig> plan;
  if (tag == "fig2") {
    for (double beta : {0.01, 0.1})
      for (double ratio : {0.1, 0.3}) {
        const int n_max = beta < 0.05 ? 200 : 40;
        plan.push_back(atom_sweep(base, "fig2" + label(beta, ratio), n_max, beta, ratio, {1, 2}));
        plan.push_back(atom_sweep(base, "fig2" + label(beta, ratio) + "_to3", std::min(n_max, 50), beta, ratio, {3}));
      }
  } else if (tag == "fig3") {
    for (int order : {1, 2})
      for (int n = 5; n <= 60; n += 5) {
        RunConfig c = figure_config(base, "fig3_to" + std::to_string(order) + "_n" + std::to_string(n), Task::spectrum,
                                    n, 0.01, 0.1, order);
        c.omega_points = 401;
        plan.push_back(c);
      }
  } else if (tag == "fig4") {
    for (double ratio : {0.01, 0.1, 0.6, 1.0})
      plan.push_back(figure_config(base, "fig4_d" + short_number(ratio), Task::corrmap, 300, 0.01, ratio, 2));
  } else if (tag == "fig5" || tag == "fig6") {
    for (const auto& [beta, ratio, n_max] : {std::tuple{0.01, 0.1, 200}, std::tuple{0.1, 0.3, 40}}) {
      const std::string name = tag + label(beta, ratio);
      plan.push_back(atom_sweep(base, name, n_max, beta, ratio, {1, 2}));
      plan.push_back(atom_sweep(base, name + "_to3", std::min(n_max, 50), beta, ratio, {3}));
      plan.push_back(atom_sweep(base, name + "_to4", 14, beta, ratio, {4}));
    }
  } else if (tag == "fig8") {
    for (double ratio : {0.001, 0.01, 0.1}) {
      plan.push_back(atom_sweep(base, "fig8_to1_d" + short_number(ratio), 40, 0.05, ratio, {1}, true));
      plan.push_back(atom_sweep(base, "fig8_to4_d" + short_number(ratio), 20, 0.05, ratio, {4}, true));
    }
  } else if (tag == "fig9") {
    RunConfig a = figure_config(base, "fig9_b0.1_n7", Task::qfactor, 7, 0.1, 0.0, 4);
    plan.push_back(a);
    RunConfig b = figure_config(base, "fig9_b0.05_n19", Task::qfactor, 19, 0.05, 0.0, 4);
    for (int i = 1; i <= 20; ++i) b.s_values.push_back(0.1 * i);
    plan.push_back(b);
  } else if (tag == "fig10") {
    for (double ratio : {0.03, 0.06, 0.1, 0.3, 1.0})
      for (int n = 2; n <= 12; n += 2) {
        RunConfig c = figure_config(base, "fig10_d" + short_number(ratio) + "_n" + std::to_string(n), Task::spectrum,
                                    n, 0.01, ratio, 3);
        c.omega_points = 401;
        plan.push_back(c);
      }
  } else {
    throw ValidationError("unknown figure tag '" + tag + "'");
  }
  return plan;
}

double estimate_plan_seconds(const std::vector<RunConfig>& plan) {
  double total = 0.0;
  for (const RunConfig& c : plan) {
    if (c.task == Task::qfactor) {
      const std::size_t points = c.s_values.empty() ? 60 : c.s_values.size();
      total += points * estimate_solve_seconds(c.params);
    } else if (c.task == Task::sweep) {
      for (int o : c.sweep.orders) {
        SystemParams p = c.params;
        p.truncation_order = o;
        total += estimate_solve_seconds(p);
      }
    } else {
      total += estimate_solve_seconds(c.params);
    }
  }
  return total;
}

}  // namespace

double estimate_solve_seconds(const SystemParams& p) {
  const double n = p.n_atoms;
  switch (p.truncation_order) {
    case 1: return 1e-6 * n;
    case 2: return 0.9 * std::pow(n / 100.0, 2.8);
    case 3: return 5.8 * std::pow(n / 40.0, 4.8);
    default: return 13.0 * std::pow(n / 15.0, 8.5);
  }
}

int run(const RunConfig& config) {
  try {
    return execute(config);
  } catch (const ValidationError& e) {
    spdlog::error("validation: {}", e.what());
    return kExitValidation;
  } catch (const SolverError& e) {
    spdlog::error("solver failed at stage {}: {}", e.stage(), e.what());
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    spdlog::error("invalid input: {}", e.what());
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    spdlog::error("invalid input: {}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    spdlog::error("solver failure: {}", e.what());
    return kExitSolver;
  }
}

const std::vector<FigureInfo>& figures() {
  static const std::vector<FigureInfo> list{
      {"fig2", "P_el/P_in vs N, beta in {0.01, 0.1}, P_in/P_sat in {0.1, 0.3}, TO1-3", false},
      {"fig3", "S_ie and S_theta spectra vs OD, beta=0.01, P_in/P_sat=0.1, TO1 and TO2 (N <= 60)", false},
      {"fig4", "(x,x) correlation maps, beta=0.01, P_in/P_sat in {0.01, 0.1, 0.6, 1}, N=300", false},
      {"fig5", "P_ie and integrated quadrature fluctuations vs N, TO1-4", false},
      {"fig6", "P_out vs N, TO1-4", false},
      {"fig8", "g2(0) vs N, beta=0.05, TO1 and TO4", true},
      {"fig9", "P_out, g2 and Q vs s at N=7 (beta=0.1) and N=19 (beta=0.05), TO4", true},
      {"fig10", "spectra at TO3, beta=0.01, P_in/P_sat in {0.03, 0.06, 0.1, 0.3, 1} (N <= 12)", false},
  };
  return list;
}

int reproduce(const std::string& tag, const RunConfig& base) {
  std::vector<RunConfig> plan;
  try {
    plan = figure_plan(tag, base);
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return kExitValidation;
  }
  const auto it = std::find_if(figures().begin(), figures().end(), [&](const FigureInfo& f) { return f.tag == tag; });
  const double est = estimate_plan_seconds(plan);
  if (it != figures().end() && it->long_running && !base.ack_long) {
    spdlog::error("{} is long-running: about {:.0f} min single-threaded; re-run with --ack-long", tag, est / 60.0);
    return kExitValidation;
  }
  spdlog::info("{}: {} runs, estimated {:.0f} s", tag, plan.size(), est);
  int code = kExitOk;
  for (const RunConfig& c : plan) code = std::max(code, run(c));
  return code;
}

}  // namespace chiral::cli
