#include "cli/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "chiral/version.hpp"

namespace chiral::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void CsvTable::add_row(const std::vector<double>& values) { add_row({}, values); }

void CsvTable::add_row(const std::vector<std::string>& text, const std::vector<double>& values) {
  if (text.size() + values.size() != header_.size()) throw std::logic_error("csv row width mismatch");
  std::string line;
  for (const auto& t : text) {
    if (!line.empty()) line += ',';
    line += t;
  }
  for (double v : values) {
    if (!line.empty()) line += ',';
    line += format_double(v);
  }
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += '\n';
  for (const auto& r : rows_) out += r + '\n';
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << str();
}

nlohmann::json ResultDocument::to_json(const RunConfig& config) const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = config_to_json(config);
  j["results"] = results;
  j["residuals"] = residuals;
  j["flags"] = {{"unphysical", unphysical}, {"stiffness_warning", stiffness_warning}};
  j["files"] = files;
  return j;
}

std::string output_path(const RunConfig& config, const std::string& suffix) {
  std::filesystem::create_directories(config.out_dir);
  return (std::filesystem::path(config.out_dir) / (config.prefix() + suffix)).string();
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
}

}  // namespace chiral::cli
