#include "magbm_cli/output.hpp"
#include "magbm_cli/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#ifndef MAGBM_VERSION
#define MAGBM_VERSION "unknown"
#endif

namespace magbm::cli {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string s;
  s += "# magbm " MAGBM_VERSION "\n";
  s += "# command: " + t.command + "\n";
  s += "# config: " + t.config.dump() + "\n";
  if (!t.extra.empty()) s += "# meta: " + t.extra.dump() + "\n";
  s += t.sweep_name;
  for (const auto& c : t.columns) s += "," + c;
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      s += format_double(row[i]);
    }
    s += "\n";
  }
  return s;
}

std::string to_json(const Table& t) {
  nlohmann::json j;
  j["meta"] = {{"version", MAGBM_VERSION}, {"command", t.command}, {"config", t.config}, {"sweep_name", t.sweep_name},
               {"columns", t.columns}};
  if (!t.extra.empty()) j["meta"]["extra"] = t.extra;
  nlohmann::json sweep = nlohmann::json::array(), values = nlohmann::json::array();
  for (const auto& row : t.rows) {
    sweep.push_back(row.front());
    values.push_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  j["sweep"] = sweep;
  j["values"] = values;
  return j.dump(1) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path);
  }
}

} // namespace magbm::cli
