#pragma once
#include <json.hpp>
#include <string>
#include <vector>

namespace magbm::cli {

struct Table {
  std::string command;
  nlohmann::json config;            // resolved run config
  nlohmann::json extra;             // command specific metadata (fits, residuals)
  std::string sweep_name;           // first column
  std::vector<std::string> columns; // remaining columns
  std::vector<std::vector<double>> rows;  // sweep value first
};

std::string format_double(double x);
std::string to_csv(const Table& t);
std::string to_json(const Table& t);

// Writes to path.tmp then renames; throws IoError.
void write_atomic(const std::string& path, const std::string& content);

} // namespace magbm::cli
