#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "chiral/spectra.hpp"

namespace chiral::cli {

namespace {

constexpr std::pair<Task, const char*> kTasks[] = {
    {Task::steady, "steady"},   {Task::spectrum, "spectrum"},     {Task::g2, "g2"},
    {Task::sweep, "sweep"},     {Task::corrmap, "corrmap"},       {Task::compare_oracle, "compare-oracle"},
    {Task::qfactor, "qfactor"},
};

template <class T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config field '") + key + "': " + e.what());
  }
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

const char* task_name(Task t) {
  for (const auto& [task, name] : kTasks)
    if (task == t) return name;
  return "?";
}

Task parse_task(std::string_view name) {
  for (const auto& [task, n] : kTasks)
    if (name == n) return task;
  throw ValidationError("unknown task '" + std::string(name) + "'");
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw ValidationError("bad number '" + std::string(item) + "' in list");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  if (j.contains("task")) c.task = parse_task(get<std::string>(j, "task"));
  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (p.contains("n_atoms")) c.params.n_atoms = get<int>(p, "n_atoms");
    if (p.contains("beta")) c.params.beta = get<double>(p, "beta");
    if (p.contains("drive_ratio")) c.params.drive_ratio = get<double>(p, "drive_ratio");
    if (p.contains("s")) c.params.drive_ratio = drive_ratio_from_s(get<double>(p, "s"));
    if (p.contains("truncation_order")) c.params.truncation_order = get<int>(p, "truncation_order");
  }
  if (j.contains("thetas")) c.thetas = get<std::vector<double>>(j, "thetas");
  if (j.contains("omega")) {
    const auto& w = j.at("omega");
    if (w.contains("min")) c.omega_min = get<double>(w, "min");
    if (w.contains("max")) c.omega_max = get<double>(w, "max");
    if (w.contains("points")) c.omega_points = get<int>(w, "points");
  }
  if (j.contains("mode")) {
    try {
      c.mode = parse_variable_set(get<std::string>(j, "mode"));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  if (j.contains("solver")) c.solver = get<std::string>(j, "solver");
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (s.contains("axis")) c.sweep.axis = get<std::string>(s, "axis");
    if (s.contains("values")) c.sweep.values = get<std::vector<double>>(s, "values");
    if (s.contains("orders")) c.sweep.orders = get<std::vector<int>>(s, "orders");
    if (s.contains("g2")) c.sweep.g2 = get<bool>(s, "g2");
  }
  if (j.contains("s_values")) c.s_values = get<std::vector<double>>(j, "s_values");
  if (j.contains("out")) c.out_dir = get<std::string>(j, "out");
  if (j.contains("tag")) c.tag = get<std::string>(j, "tag");
  if (j.contains("workers")) c.workers = get<int>(j, "workers");
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["task"] = task_name(c.task);
  j["params"] = {{"n_atoms", c.params.n_atoms},
                 {"beta", c.params.beta},
                 {"drive_ratio", c.params.drive_ratio},
                 {"truncation_order", c.params.truncation_order}};
  j["thetas"] = c.thetas;
  nlohmann::json w = {{"points", c.omega_points}};
  if (c.omega_min) w["min"] = *c.omega_min;
  if (c.omega_max) w["max"] = *c.omega_max;
  j["omega"] = w;
  j["mode"] = to_string(c.mode);
  j["solver"] = c.solver;
  j["sweep"] = {{"axis", c.sweep.axis}, {"values", c.sweep.values}, {"orders", c.sweep.orders}, {"g2", c.sweep.g2}};
  j["s_values"] = c.s_values;
  j["tag"] = c.tag;
  return j;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

RunConfig finalize(RunConfig c) {
  c.params = validate(c.params);
  if (c.thetas.empty()) c.thetas = {0.0, 0.5 * std::numbers::pi};
  if (!finite_all(c.thetas)) throw ValidationError("theta values must be finite");
  if (c.omega_points < 2) throw ValidationError("omega points must be >= 2");
  if (c.omega_min && c.omega_max && !(*c.omega_max > *c.omega_min))
    throw ValidationError("omega max must exceed omega min");
  if (c.solver != "direct" && c.solver != "integrate") throw ValidationError("solver must be direct or integrate");
  if (c.workers < 0) throw ValidationError("workers must be >= 0");

  if (c.task == Task::sweep) {
    auto& s = c.sweep;
    if (s.axis != "atoms" && s.axis != "beta" && s.axis != "drive_ratio" && s.axis != "s")
      throw ValidationError("sweep axis must be atoms, beta, drive_ratio or s");
    if (s.values.empty()) {
      if (s.axis != "atoms") throw ValidationError("sweep needs values");
      for (int n = 1; n <= c.params.n_atoms; ++n) s.values.push_back(n);
    }
    if (!finite_all(s.values)) throw ValidationError("sweep values must be finite");
    if (!std::is_sorted(s.values.begin(), s.values.end())) throw ValidationError("sweep values must be sorted");
    if (s.axis == "atoms")
      for (double v : s.values)
        if (v < 1 || v != std::floor(v)) throw ValidationError("atom counts must be positive integers");
    if (s.orders.empty()) s.orders = {c.params.truncation_order};
    for (int o : s.orders)
      if (o < 1 || o > kMaxTruncationOrder) throw ValidationError("sweep orders must lie in 1..4");
  }
  if (c.task == Task::qfactor) {
    if (c.s_values.empty())
      for (int i = 1; i <= 60; ++i) c.s_values.push_back(0.05 * i);
    if (!finite_all(c.s_values) || !std::is_sorted(c.s_values.begin(), c.s_values.end()) || c.s_values.front() < 0)
      throw ValidationError("s values must be finite, sorted and >= 0");
  }
  if ((c.task == Task::corrmap) && c.params.truncation_order < 2)
    throw ValidationError("corrmap needs truncation order >= 2");
  if (c.task == Task::compare_oracle && c.params.n_atoms > 6) throw ValidationError("oracle comparison needs N <= 6");
  return c;
}

std::vector<double> omega_grid(const RunConfig& c) {
  const std::vector<double> def = default_omega_grid(c.params, c.omega_points);
  const double lo = c.omega_min.value_or(def.front());
  const double hi = c.omega_max.value_or(def.back());
  if (!(hi > lo)) throw ValidationError("omega max must exceed omega min");
  return linear_grid(lo, hi, c.omega_points);
}

}  // namespace chiral::cli
