#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "carlo/errors.hpp"

namespace carlo {

enum class CsvSchema { challenger, pima, swiss, xy_generic };

inline const char* schema_name(CsvSchema s) {
  switch (s) {
    case CsvSchema::challenger: return "challenger";
    case CsvSchema::pima: return "pima";
    case CsvSchema::swiss: return "swiss";
    case CsvSchema::xy_generic: return "xy_generic";
  }
  return "?";
}

inline std::vector<std::string> schema_columns(CsvSchema s) {
  switch (s) {
    case CsvSchema::challenger: return {"failure", "temp"};
    case CsvSchema::pima: return {"ped", "type"};
    case CsvSchema::swiss:
      return {"fertility", "agriculture", "examination", "education", "catholic",
              "infant_mortality"};
    case CsvSchema::xy_generic: return {"x", "y"};
  }
  return {};
}

struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

/// Typed CSV ingestion: the header must match the schema, every cell must
/// parse as a number (no missing values), errors carry the line number.
inline Dataset ingest_csv(const std::string& path, CsvSchema schema) {
  std::ifstream in(path);
  if (!in) throw ingestion_error("cannot open " + path);
  Dataset ds;
  ds.columns = schema_columns(schema);
  std::string line;
  if (!std::getline(in, line))
    throw ingestion_error(path + ": empty file");
  const auto header = split_csv_line(line);
  if (header != ds.columns) {
    std::string expect;
    for (const auto& c : ds.columns) expect += (expect.empty() ? "" : ",") + c;
    throw ingestion_error(path + ": header does not match schema '" +
                          schema_name(schema) + "' (expected " + expect + ")");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != ds.columns.size())
      throw ingestion_error(path + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(ds.columns.size()) + " columns, got " +
                            std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const char* s = cells[j].c_str();
      char* end = nullptr;
      row[j] = std::strtod(s, &end);
      if (end == s || *end != '\0')
        throw ingestion_error(path + ": line " + std::to_string(line_no) +
                              ": cell '" + cells[j] + "' is not numeric");
    }
    ds.rows.push_back(std::move(row));
  }
  if (ds.rows.empty()) throw ingestion_error(path + ": no data rows");
  return ds;
}

}  // namespace carlo
