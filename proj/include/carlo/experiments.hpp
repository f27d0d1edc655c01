#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "carlo/csv.hpp"
#include "carlo/errors.hpp"
#include "carlo/integrate.hpp"
#include "carlo/mcmc.hpp"
#include "carlo/rng.hpp"
#include "carlo/trace_io.hpp"

namespace carlo {

inline constexpr std::uint64_t kDefaultSeed = 20109;

/// What the CLI resolved from the command line: experiment id, overrides and
/// output location. Unknown parameter keys are rejected against the registry.
struct ExperimentSpec {
  std::string id;
  std::map<std::string, std::string> params;
  std::uint64_t seed = kDefaultSeed;
  std::size_t n = 0;             // 0 = registry default
  std::size_t replications = 0;  // 0 = registry default
  std::string out_dir = ".";
  std::string data_dir;  // dataset lookup root (CARLO_DATA_DIR)
  std::size_t threads = 0;
};

/// Mutable state an experiment body fills in; the runner turns it into
/// trace.csv, summary.json and plotdata/*.tsv.
class RunContext {
 public:
  ExperimentSpec spec;
  std::vector<Trace> chains;
  nlohmann::json estimates = nlohmann::json::object();
  nlohmann::json ses = nlohmann::json::object();
  nlohmann::json acceptance = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  std::vector<std::string> notes;
  std::vector<std::string> datasets_used;
  std::vector<std::pair<std::string, RunningEstimate>> bands;
  std::vector<std::pair<std::string, std::vector<double>>> histograms;

  RngStream stream(std::uint64_t id = 0) const { return RngStream(spec.seed, id); }

  double param_or(const std::string& key, double fallback) const {
    const auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : std::stod(it->second);
  }

  void estimate(const std::string& name, double v) { estimates[name] = v; }
  void se(const std::string& name, double v) { ses[name] = v; }
  void accept_rate(const std::string& name, double v) { acceptance[name] = v; }
  void note(const std::string& text) { notes.push_back(text); }
  void band(const std::string& name, RunningEstimate run) {
    bands.emplace_back(name, std::move(run));
  }
  void histogram(const std::string& name, std::vector<double> values) {
    histograms.emplace_back(name, std::move(values));
  }

  /// Locate and ingest <data_dir>/<schema>.csv.
  Dataset load_dataset(CsvSchema schema) {
    namespace fs = std::filesystem;
    std::string dir = spec.data_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("CARLO_DATA_DIR")) dir = env;
    }
    const std::string fname = std::string(schema_name(schema)) + ".csv";
    const fs::path path = dir.empty() ? fs::path(fname) : fs::path(dir) / fname;
    if (!fs::exists(path))
      throw ingestion_error("dataset '" + fname + "' not found (looked in '" +
                            (dir.empty() ? "." : dir) + "'; set CARLO_DATA_DIR)");
    datasets_used.push_back(path.string());
    return ingest_csv(path.string(), schema);
  }
};

struct ExperimentDef {
  std::string id;
  std::string chapter;
  std::string description;
  std::string dataset;  // "" none, "embedded", or an external schema name
  std::size_t default_n = 10000;
  std::size_t default_reps = 1;
  std::vector<std::string> allowed_params;
  std::function<void(RunContext&)> body;
};

const std::vector<ExperimentDef>& experiment_registry();  // defined in registry.hpp

inline const ExperimentDef* find_experiment(const std::string& id) {
  for (const auto& def : experiment_registry())
    if (def.id == id) return &def;
  return nullptr;
}

/// Runner: resolves defaults, executes, writes the three outputs.
/// Exit codes: 0 ok, 2 missing dataset, 3 unknown id, 1 other failure.
inline int run_experiment(const ExperimentSpec& spec_in, std::string* error_out = nullptr) {
  namespace fs = std::filesystem;
  const ExperimentDef* def = find_experiment(spec_in.id);
  auto fail = [&](const std::string& msg, int code) {
    if (error_out) *error_out = msg;
    return code;
  };
  if (def == nullptr) return fail("unknown experiment id '" + spec_in.id + "'", 3);
  for (const auto& [k, v] : spec_in.params) {
    if (std::find(def->allowed_params.begin(), def->allowed_params.end(), k) ==
        def->allowed_params.end())
      return fail("unknown parameter '" + k + "' for " + def->id, 1);
  }

  RunContext ctx;
  ctx.spec = spec_in;
  if (ctx.spec.n == 0) ctx.spec.n = def->default_n;
  if (ctx.spec.replications == 0) ctx.spec.replications = def->default_reps;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    def->body(ctx);
  } catch (const ingestion_error& e) {
    return fail(std::string("ingestion: ") + e.what(), 2);
  } catch (const std::exception& e) {
    return fail(e.what(), 1);
  }
  const auto t1 = std::chrono::steady_clock::now();

  try {
    const fs::path out = ctx.spec.out_dir;
    fs::create_directories(out / "plotdata");
    if (ctx.chains.empty())
      throw configuration_error("experiment produced no trace");
    write_trace_csv((out / "trace.csv").string(), ctx.chains);
    for (const auto& [name, run] : ctx.bands)
      write_running_band_tsv((out / "plotdata" / (name + ".tsv")).string(), run);
    for (const auto& [name, values] : ctx.histograms)
      write_histogram_tsv((out / "plotdata" / (name + ".tsv")).string(), values);

    nlohmann::json summary;
    summary["id"] = def->id;
    summary["chapter"] = def->chapter;
    summary["description"] = def->description;
    summary["seed"] = ctx.spec.seed;
    summary["n"] = ctx.spec.n;
    summary["replications"] = ctx.spec.replications;
    summary["params"] = ctx.spec.params;
    summary["estimates"] = ctx.estimates;
    summary["ses"] = ctx.ses;
    summary["acceptance"] = ctx.acceptance;
    summary["diagnostics"] = ctx.diagnostics;
    summary["notes"] = ctx.notes;
    summary["datasets"] = ctx.datasets_used;
    summary["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    std::ofstream js(out / "summary.json", std::ios::binary);
    js << summary.dump(2) << "\n";
  } catch (const std::exception& e) {
    return fail(std::string("output: ") + e.what(), 1);
  }
  return 0;
}

inline std::string list_experiments_table() {
  std::string out = "id\tchapter\tdatasets\tdescription\n";
  for (const auto& def : experiment_registry()) {
    out += def.id + "\t" + def.chapter + "\t" +
           (def.dataset.empty() ? "-" : def.dataset) + "\t" + def.description + "\n";
  }
  return out;
}

}  // namespace carlo
