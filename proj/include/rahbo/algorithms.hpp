#pragma once

#include <cstdint>
#include <optional>

#include "rahbo/acquisition.hpp"
#include "rahbo/benchmarks.hpp"
#include "rahbo/run_types.hpp"

namespace rahbo {

// Algorithm-level parameters shared by all optimization loops. Kernel specs
// left unset are fitted on the initial design by seeded random search over
// the marginal likelihood and then frozen (refit_every > 0 refits the
// objective kernel on that cadence).
struct RunSpec {
    Algorithm algorithm = Algorithm::Rahbo;
    double alpha = 1.0;
    int k = 10;       // repetitions per query
    int T = 60;       // acquisition rounds
    int n_init = 10;  // Sobol initial-design size
    int n_us = 10;    // stage-1 budget (RahboUs only)
    BetaSchedule beta;
    BetaSchedule beta_var;
    std::optional<KernelSpec> kernel_f;    // unset -> fit
    std::optional<KernelSpec> kernel_var;  // unset -> fit
    KernelFamily fit_family = KernelFamily::Matern52;
    int hyperfit_budget = 60;
    int refit_every = 0;
    int candidate_grid = 0;  // 0 -> 1000 * d
    double lambda = 1.0;
    double var_lo = -1.0;  // < 0 -> benchmark default
    double var_hi = -1.0;
    ReportRule report_rule = ReportRule::LcbMv;
};

// Throws InputError on violated constraints (alpha >= 0, k >= 2, T >= 1,
// n_init >= 1, ...).
void validate_run_spec(const RunSpec& spec, const Benchmark& bench);

// Full optimization loops. Deterministic for a fixed (spec, benchmark, seed):
// repeated calls produce bitwise-identical traces.
RunResult run_rahbo(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed);
RunResult run_gp_ucb(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed);
RunResult run_rahbo_known(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed);
RunResult run_rahbo_us(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed);

// Dispatch on spec.algorithm.
RunResult run_algorithm(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed);

// Applies a reporting rule to the visited acquisition points using the
// final-time models stored in the result (ties -> earliest round). For
// known-variance runs the true noise oracle replaces the variance-GP bound.
Eigen::Index report_index(const RunResult& result, const Benchmark& bench,
                          double alpha, ReportRule rule);
Eigen::VectorXd report_point(const RunResult& result, const Benchmark& bench,
                             double alpha, ReportRule rule);

}  // namespace rahbo
