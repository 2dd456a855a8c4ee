#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rahbo/algorithms.hpp"

namespace rahbo {

// Experiment-level configuration: one benchmark/algorithm combination run
// over a list of seeds. Loaded from a JSON file; see the README for the
// schema and the per-benchmark defaults.
struct ExperimentConfig {
    std::string benchmark = "sine";
    Algorithm algorithm = Algorithm::Rahbo;
    double alpha = 1.0;
    int k = 10;
    int T = 60;
    int n_init = 10;
    int n_us = 10;
    BetaSchedule beta;
    BetaSchedule beta_var;
    std::optional<KernelSpec> kernel_f;    // nullopt == "fit"
    std::optional<KernelSpec> kernel_var;  // nullopt == "fit"
    KernelFamily fit_family = KernelFamily::Matern52;
    int hyperfit_budget = 60;
    int refit_every = 0;
    int candidate_grid = 0;   // 0 -> 1000 * d
    double var_lo = -1.0;     // < 0 -> benchmark default
    double var_hi = -1.0;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    ReportRule report_rule = ReportRule::LcbMv;
    std::string output_dir = "runs/out";
};

// Structural + range validation; returns every violation at once (empty ==
// valid). Field paths are included in the messages.
std::vector<std::string> validate_config(const nlohmann::json& j);

// Parses and validates; throws InputError carrying all violations joined by
// newlines.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Normalized echo of the configuration (defaults filled in).
nlohmann::json config_to_json(const ExperimentConfig& config);

// Hash over the semantic fields (everything except output_dir): changes iff
// a field that affects results changes.
std::string config_hash(const ExperimentConfig& config);

RunSpec to_run_spec(const ExperimentConfig& config);

}  // namespace rahbo
