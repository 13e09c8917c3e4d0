#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"
#include "json.hpp"

namespace chiral::cli {

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values);
  /// Leading text cells followed by numbers.
  void add_row(const std::vector<std::string>& text, const std::vector<double>& values);

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

/// Results document: config echo, version, residuals, flags, results.
struct ResultDocument {
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json residuals = nlohmann::json::object();
  std::vector<std::string> unphysical;
  std::vector<std::string> files;
  bool stiffness_warning = false;

  nlohmann::json to_json(const RunConfig& config) const;
};

/// Writes into config.out_dir, creating it; returns the path.
std::string output_path(const RunConfig& config, const std::string& suffix);
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace chiral::cli
