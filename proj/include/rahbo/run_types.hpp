#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rahbo/gp.hpp"
#include "rahbo/variance_model.hpp"

namespace rahbo {

enum class Algorithm { Rahbo, GpUcb, RahboKnown, RahboUs };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

// How the single solution is picked after T rounds. LcbMv applies the
// final-time models to every visited point; LcbMvPerRound takes the argmax of
// the selection-time lower bounds recorded during the run.
enum class ReportRule : int {
    LcbMv = 0,
    LcbMvPerRound = 1,
    BestObserved = 2,
    MaxEmpiricalMv = 3,
};

inline constexpr int kNumReportRules = 4;

std::string to_string(ReportRule rule);
ReportRule report_rule_from_string(const std::string& name);

// One acquisition round. Regret fields are cumulative where named so;
// info gains are cumulative mutual-information diagnostics over the selected
// sequence (initial design excluded).
struct TraceRow {
    int round = 0;
    Eigen::VectorXd x;  // domain coordinates
    double sample_mean = 0.0;
    double sample_var = 0.0;
    double mv_true = 0.0;
    double r_inst = 0.0;
    double r_cum = 0.0;
    double r_cum_per_sample = 0.0;
    double info_gain_f = 0.0;
    double info_gain_var = 0.0;
    double beta_used = 0.0;
    double beta_var_used = 0.0;

    // Not serialized to the trace CSV; used by tests, reporting and the
    // aggregate tables.
    Eigen::Index candidate_index = -1;
    double f_true = 0.0;
    double rho_true = 0.0;
    double lcb_mv_at_selection = 0.0;
    std::array<double, kNumReportRules> simple_regret_by_rule{};
};

struct RunResult {
    Algorithm algorithm = Algorithm::Rahbo;
    std::vector<TraceRow> trace;
    Eigen::VectorXd reported_point;  // under reported_rule, final models
    ReportRule reported_rule = ReportRule::LcbMv;
    std::array<Eigen::VectorXd, kNumReportRules> reported_by_rule;
    std::uint64_t seed = 0;
    std::string config_hash;
    double mv_reference = 0.0;  // MV(x*) used for the regret columns
    int k = 0;
    int sampler_calls = 0;  // total objective-sampler draws

    // Final-time models, exposed for reporting-rule checks and diagnostics.
    // final_var_model is prior-only for known-variance runs. The objective GP
    // is trained on standardized targets; y_shift/y_scale map its posterior
    // back to objective units.
    HeteroGPState final_gp;
    VarianceModelState final_var_model;
    double final_beta = 0.0;
    double final_beta_var = 0.0;
    double y_shift = 0.0;
    double y_scale = 1.0;
};

}  // namespace rahbo
