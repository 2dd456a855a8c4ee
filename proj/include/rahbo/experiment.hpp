#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rahbo/config.hpp"
#include "rahbo/metrics.hpp"
#include "rahbo/run_types.hpp"

namespace rahbo {

// Configuration warnings that do not block a run (printed by the CLI).
std::vector<std::string> config_warnings(const ExperimentConfig& config);

struct ExperimentArtifacts {
    std::vector<RunResult> results;  // one per seed, in config order
    std::filesystem::path out_dir;
    std::string hash;
    double wall_time_seconds = 0.0;
};

// Runs every seed (in parallel when threads > 1) and writes, under
// config.output_dir:
//   trace_seed<seed>.csv   one per seed
//   aggregate.csv          per-round cross-seed summary
//   meta.json              config echo, config hash, version, wall time
// Outputs are byte-identical regardless of thread count.
ExperimentArtifacts run_experiment(const ExperimentConfig& config, int threads = 1);

void write_trace_csv(std::ostream& out, const RunResult& result, int dim);

// Side-by-side comparison of previously written run directories sharing
// benchmark, alpha and T. Writes comparison.csv and rho_hist.csv under
// out_dir and prints a text table. metric is "cumulative" or "simple".
void compare_runs(const std::vector<std::filesystem::path>& run_dirs,
                  const std::string& metric, const std::filesystem::path& out_dir,
                  std::ostream& table_out);

}  // namespace rahbo
