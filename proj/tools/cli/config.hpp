#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chiral/eom.hpp"
#include "chiral/model.hpp"
#include "json.hpp"

namespace chiral::cli {

enum class Task { steady, spectrum, g2, sweep, corrmap, compare_oracle, qfactor };

const char* task_name(Task t);
Task parse_task(std::string_view name);

/// axis is one of atoms, beta, drive_ratio, s. Orders default to the
/// configured truncation order.
struct SweepSpec {
  std::string axis = "atoms";
  std::vector<double> values;
  std::vector<int> orders;
  bool g2 = false;
};

struct RunConfig {
  Task task = Task::steady;
  SystemParams params;
  std::vector<double> thetas;  // empty: {0, pi/2}
  std::optional<double> omega_min, omega_max;
  int omega_points = 801;
  VariableSet mode = VariableSet::reduced;
  std::string solver = "direct";
  SweepSpec sweep;
  std::vector<double> s_values;  // qfactor
  std::string out_dir = ".";
  std::string tag;  // output file prefix; defaults to the task name
  int workers = 0;  // 0: hardware concurrency
  bool ack_long = false;

  std::string prefix() const { return tag.empty() ? task_name(task) : tag; }
};

/// Overlays the fields present in j onto base. Throws ValidationError.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Checks the task options and fills defaults. Throws ValidationError.
RunConfig finalize(RunConfig c);

std::vector<double> omega_grid(const RunConfig& c);
std::vector<double> parse_list(std::string_view text);

}  // namespace chiral::cli
