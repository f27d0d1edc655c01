#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "carlo/errors.hpp"
#include "carlo/integrate.hpp"
#include "carlo/mcmc.hpp"

namespace carlo {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// trace.csv with header iter,chain,<param names>; 17 significant digits so
/// diagnostics replay exactly.
inline void write_trace_csv(const std::string& path, const std::vector<Trace>& chains) {
  if (chains.empty()) throw configuration_error("write_trace_csv: no chains");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ingestion_error("cannot write " + path);
  out << "iter,chain";
  for (const auto& p : chains.front().param_names) out << "," << p;
  out << "\n";
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const Trace& tr = chains[c];
    for (std::size_t t = 0; t < tr.size(); ++t) {
      out << (t + 1) << "," << (c + 1);
      for (double v : tr.states[t]) out << "," << format_full(v);
      out << "\n";
    }
  }
}

/// Columns of a single scalar series as a one-parameter pseudo-trace, for
/// experiments that are estimators rather than chains.
inline Trace series_as_trace(const std::vector<double>& values, const std::string& name) {
  Trace tr;
  tr.kernel_name = "series";
  tr.param_names = {name};
  tr.states.reserve(values.size());
  for (double v : values) tr.states.push_back({v});
  tr.accept_flags.assign(values.size(), true);
  tr.log_target.assign(values.size(), 0.0);
  return tr;
}

struct LoadedTraces {
  std::vector<std::string> param_names;
  // chains x params x iterations
  std::vector<std::vector<std::vector<double>>> chains;
};

inline LoadedTraces read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ingestion_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ingestion_error(path + ": empty trace file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  std::vector<std::string> header;
  {
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 3 || header[0] != "iter" || header[1] != "chain")
    throw ingestion_error(path + ": not a trace file (header must be iter,chain,...)");
  LoadedTraces out;
  out.param_names.assign(header.begin() + 2, header.end());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != header.size())
      throw ingestion_error(path + ": line " + std::to_string(line_no) + ": bad column count");
    const auto chain = static_cast<std::size_t>(row[1]);
    if (chain == 0) throw ingestion_error(path + ": chain ids start at 1");
    while (out.chains.size() < chain)
      out.chains.emplace_back(out.param_names.size());
    for (std::size_t j = 0; j < out.param_names.size(); ++j)
      out.chains[chain - 1][j].push_back(row[2 + j]);
  }
  if (out.chains.empty()) throw ingestion_error(path + ": no rows");
  return out;
}

/// plotdata/<name>.tsv holding iter, mean and the +-2 SE band.
inline void write_running_band_tsv(const std::string& path, const RunningEstimate& run,
                                   std::size_t max_points = 1000) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ingestion_error("cannot write " + path);
  out << "iter\tmean\tlo\thi\n";
  const std::size_t n = run.size();
  const std::size_t stride = std::max<std::size_t>(1, n / max_points);
  for (std::size_t t = 0; t < n; t += stride) {
    out << (t + 1) << "\t" << format_full(run.means[t]) << "\t"
        << format_full(run.means[t] - 2.0 * run.ses[t]) << "\t"
        << format_full(run.means[t] + 2.0 * run.ses[t]) << "\n";
  }
}

/// plotdata histogram as bin,count pairs (bin = left edge).
inline void write_histogram_tsv(const std::string& path, const std::vector<double>& values,
                                std::size_t n_bins = 50) {
  if (values.empty()) throw configuration_error("write_histogram_tsv: no values");
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(n_bins);
  std::vector<std::size_t> counts(n_bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(b, n_bins - 1)]++;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ingestion_error("cannot write " + path);
  out << "bin\tcount\n";
  for (std::size_t b = 0; b < n_bins; ++b)
    out << format_full(lo + static_cast<double>(b) * width) << "\t" << counts[b] << "\n";
}

}  // namespace carlo
