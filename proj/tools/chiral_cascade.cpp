#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "chiral/version.hpp"
#include "cli/config.hpp"
#include "cli/tasks.hpp"

using namespace chiral;
using namespace chiral::cli;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("chiral");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CHIRAL_CASCADE_LOG")) spdlog::cfg::helpers::load_levels(env);
}

struct Flags {
  std::string config, out, mode, solver, sweep_axis, sweep_values, orders, s_values, tag;
  int to = 0, atoms = 0, omega_points = 0, workers = 0;
  double beta = 0, drive_ratio = 0, omega_min = 0, omega_max = 0;
  std::vector<double> thetas;
  bool ack_long = false, g2 = false;
};

void add_common(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON run configuration");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--tag", f.tag, "output file prefix");
  app.add_option("--to", f.to, "truncation order 1..4");
  app.add_option("--atoms", f.atoms, "number of atoms");
  app.add_option("--beta", f.beta, "waveguide coupling fraction");
  app.add_option("--drive-ratio", f.drive_ratio, "P_in / P_sat");
  app.add_option("--theta", f.thetas, "quadrature angle (repeatable)");
  app.add_option("--omega-min", f.omega_min);
  app.add_option("--omega-max", f.omega_max);
  app.add_option("--omega-points", f.omega_points);
  app.add_option("--mode", f.mode, "full or reduced variable set");
  app.add_option("--solver", f.solver, "direct or integrate");
  app.add_option("--workers", f.workers, "worker threads (0: all cores)");
  app.add_option("--sweep-axis", f.sweep_axis, "atoms, beta, drive_ratio or s");
  app.add_option("--sweep-values", f.sweep_values, "comma-separated sorted values");
  app.add_option("--orders", f.orders, "comma-separated truncation orders for sweeps");
  app.add_option("--s-values", f.s_values, "comma-separated saturation parameters for qfactor");
  app.add_flag("--g2", f.g2, "add g2(0) to sweep rows");
  app.add_flag("--ack-long", f.ack_long, "allow long-running figure tags");
}

RunConfig resolve(const CLI::App& app, const Flags& f, Task task) {
  RunConfig c;
  c.task = task;
  if (!f.config.empty()) c = load_config(f.config, c);
  c.task = task;
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--out")) c.out_dir = f.out;
  if (given("--tag")) c.tag = f.tag;
  if (given("--to")) c.params.truncation_order = f.to;
  if (given("--atoms")) c.params.n_atoms = f.atoms;
  if (given("--beta")) c.params.beta = f.beta;
  if (given("--drive-ratio")) c.params.drive_ratio = f.drive_ratio;
  if (given("--theta")) c.thetas = f.thetas;
  if (given("--omega-min")) c.omega_min = f.omega_min;
  if (given("--omega-max")) c.omega_max = f.omega_max;
  if (given("--omega-points")) c.omega_points = f.omega_points;
  if (given("--mode")) {
    try {
      c.mode = parse_variable_set(f.mode);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  if (given("--solver")) c.solver = f.solver;
  if (given("--workers")) c.workers = f.workers;
  if (given("--sweep-axis")) c.sweep.axis = f.sweep_axis;
  if (given("--sweep-values")) c.sweep.values = parse_list(f.sweep_values);
  if (given("--orders")) {
    c.sweep.orders.clear();
    for (double o : parse_list(f.orders)) c.sweep.orders.push_back(static_cast<int>(o));
  }
  if (given("--s-values")) c.s_values = parse_list(f.s_values);
  if (given("--g2")) c.sweep.g2 = true;
  c.ack_long = f.ack_long;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Steady states, spectra and photon statistics of chiral atom chains"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Flags flags;

  const std::pair<const char*, Task> tasks[] = {
      {"steady", Task::steady},     {"spectrum", Task::spectrum},
      {"g2", Task::g2},             {"sweep", Task::sweep},
      {"corrmap", Task::corrmap},   {"compare-oracle", Task::compare_oracle},
      {"qfactor", Task::qfactor},
  };
  std::vector<std::pair<CLI::App*, Task>> subs;
  for (const auto& [name, task] : tasks) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
    add_common(*sub, flags);
    subs.emplace_back(sub, task);
  }
  CLI::App* repro = app.add_subcommand("reproduce", "write the data behind a figure");
  std::string tag;
  std::string figure_list;
  for (const auto& f : figures()) figure_list += "\n  " + f.tag + (f.long_running ? " (long)" : "") + ": " + f.description;
  repro->add_option("figure", tag, "figure tag" + figure_list)->required();
  add_common(*repro, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (repro->parsed()) {
      RunConfig base = resolve(*repro, flags, Task::steady);
      return reproduce(tag, base);
    }
    for (const auto& [sub, task] : subs)
      if (sub->parsed()) return run(resolve(*sub, flags, task));
  } catch (const ValidationError& e) {
    spdlog::error("validation: {}", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
