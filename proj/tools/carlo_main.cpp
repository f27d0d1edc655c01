#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "carlo/csv.hpp"
#include "carlo/diagnostics.hpp"
#include "carlo/experiments.hpp"
#include "carlo/trace_io.hpp"
#include "registry.hpp"

namespace {

int cmd_list() {
  std::cout << carlo::list_experiments_table();
  return 0;
}

int cmd_run(const carlo::ExperimentSpec& spec) {
  std::string err;
  const int code = carlo::run_experiment(spec, &err);
  if (code != 0) {
    std::cerr << "carlo run: " << err << "\n";
    return code;
  }
  std::cout << "wrote " << spec.out_dir << "/trace.csv, summary.json, plotdata/\n";
  return 0;
}

int cmd_diag(const std::vector<std::string>& paths, bool want_ess, bool want_geweke,
             bool want_gelman, bool want_ks, const std::string& out_path) {
  using carlo::configuration_error;
  if (!want_ess && !want_geweke && !want_gelman && !want_ks)
    want_ess = want_geweke = want_ks = true;

  // every chain of every file contributes; gelman needs >= 2 chains total
  std::vector<std::vector<double>> chains;
  std::string param_name = "x";
  for (const auto& p : paths) {
    const auto loaded = carlo::read_trace_csv(p);
    param_name = loaded.param_names.front();
    for (const auto& chain : loaded.chains) chains.push_back(chain.front());
  }
  if (want_gelman && chains.size() < 2) {
    std::cerr << "carlo diag: --gelman needs at least two chains\n";
    return 4;
  }

  nlohmann::json out;
  out["param"] = param_name;
  out["chains"] = chains.size();
  std::printf("%-12s %12s\n", "diagnostic", "value");
  if (want_ess) {
    double total = 0.0;
    for (const auto& c : chains) total += carlo::ess_autocorr(c);
    out["ess"] = total;
    std::printf("%-12s %12.3f\n", "ess", total);
  }
  if (want_geweke) {
    const double z = carlo::geweke_z(chains.front());
    out["geweke_z"] = z;
    std::printf("%-12s %12.3f\n", "geweke_z", z);
  }
  if (want_gelman) {
    const double r = carlo::gelman_rubin_psrf(chains);
    out["psrf"] = r;
    std::printf("%-12s %12.3f\n", "psrf", r);
  }
  if (want_ks) {
    const auto traj = carlo::ks_half_trajectory(chains.front());
    nlohmann::json kst = nlohmann::json::array();
    double min_p = 1.0;
    for (const auto& [t, p] : traj) {
      kst.push_back({t, p});
      min_p = std::min(min_p, p);
    }
    out["ks_trajectory"] = kst;
    out["ks_min_p"] = min_p;
    std::printf("%-12s %12.4f\n", "ks_min_p", min_p);
  }
  std::ofstream js(out_path, std::ios::binary);
  js << out.dump(2) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_ingest(const std::string& file, const std::string& schema) {
  carlo::CsvSchema s;
  if (schema == "challenger") {
    s = carlo::CsvSchema::challenger;
  } else if (schema == "pima") {
    s = carlo::CsvSchema::pima;
  } else if (schema == "swiss") {
    s = carlo::CsvSchema::swiss;
  } else if (schema == "xy_generic") {
    s = carlo::CsvSchema::xy_generic;
  } else {
    std::cerr << "carlo ingest: unknown schema '" << schema << "'\n";
    return 2;
  }
  try {
    const auto ds = carlo::ingest_csv(file, s);
    std::cout << file << ": " << ds.n_rows() << " rows, " << ds.columns.size()
              << " columns (" << schema << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "carlo ingest: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carlo: deterministic Monte Carlo and MCMC experiment runner"};
  app.require_subcommand(1);

  app.add_subcommand("list", "list the experiment registry");

  auto* run = app.add_subcommand("run", "run one experiment");
  carlo::ExperimentSpec spec;
  std::vector<std::string> kv;
  run->add_option("id", spec.id, "experiment id (see `carlo list`)")->required();
  run->add_option("--seed", spec.seed, "rng seed");
  run->add_option("--n", spec.n, "sample size / chain length (0 = default)");
  run->add_option("--reps", spec.replications, "replications (0 = default)");
  run->add_option("--param", kv, "extra parameter k=v (repeatable)");
  run->add_option("--out", spec.out_dir, "output directory");
  run->add_option("--data-dir", spec.data_dir, "dataset directory (or CARLO_DATA_DIR)");
  run->add_option("--threads", spec.threads, "worker threads (0 = hardware)");

  auto* diag = app.add_subcommand("diag", "diagnostics over trace.csv files");
  std::vector<std::string> traces;
  bool f_ess = false, f_geweke = false, f_gelman = false, f_ks = false;
  std::string diag_out = "diagnostics.json";
  diag->add_option("traces", traces, "trace.csv files")->required();
  diag->add_flag("--ess", f_ess, "chain effective sample size");
  diag->add_flag("--geweke", f_geweke, "Geweke drift z-score");
  diag->add_flag("--gelman", f_gelman, "Gelman-Rubin shrink factor (needs >= 2 chains)");
  diag->add_flag("--ks", f_ks, "thinned half-chain KS trajectory");
  diag->add_option("--out", diag_out, "output json path");

  auto* ingest = app.add_subcommand("ingest", "validate a dataset csv against a schema");
  std::string in_file, in_schema;
  ingest->add_option("file", in_file, "csv path")->required();
  ingest->add_option("--schema", in_schema, "challenger|pima|swiss|xy_generic")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("run")) {
      for (const auto& pair : kv) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
          std::cerr << "carlo run: --param expects k=v, got '" << pair << "'\n";
          return 1;
        }
        spec.params[pair.substr(0, eq)] = pair.substr(eq + 1);
      }
      return cmd_run(spec);
    }
    if (app.got_subcommand("diag"))
      return cmd_diag(traces, f_ess, f_geweke, f_gelman, f_ks, diag_out);
    if (app.got_subcommand("ingest")) return cmd_ingest(in_file, in_schema);
  } catch (const std::exception& e) {
    std::cerr << "carlo: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
