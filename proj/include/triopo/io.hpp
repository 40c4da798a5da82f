#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "triopo/errors.hpp"

namespace triopo {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(ErrorCode::BadConfig, "unknown output format '" + s + "'");
}

/// Column-oriented numeric result set.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Full double precision so downstream residual checks stay meaningful.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// CSV with the resolved configuration embedded as a comment header.
inline void write_csv(std::ostream& os, const nlohmann::json& config, const Table& table) {
  os << "# config: " << config.dump() << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << (c ? "," : "") << table.columns[c];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << "\n";
  }
}

inline void write_json(std::ostream& os, const nlohmann::json& config, const Table& table) {
  nlohmann::json doc;
  doc["config"] = config;
  doc["columns"] = table.columns;
  doc["rows"] = table.rows;
  os << doc.dump(2) << "\n";
}

inline void write_table(std::ostream& os, OutputFormat format, const nlohmann::json& config,
                        const Table& table) {
  if (format == OutputFormat::Csv)
    write_csv(os, config, table);
  else
    write_json(os, config, table);
}

/// Writes to the path, or to the fallback stream when the path is empty.
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadConfig, "cannot open output file '" + path + "'");
  fn(out);
}

}  // namespace triopo
