#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rahbo/benchmarks.hpp"
#include "rahbo/kernel.hpp"
#include "rahbo/run_types.hpp"

namespace rahbo {

// f(x) - alpha * rho^2(x). Throws InputError outside the domain.
double mv_value(const Benchmark& bench, double alpha, const Eigen::VectorXd& x);

// MV(x*) - MV(x) against a precomputed reference; tiny negatives
// (>= -1e-9) from grid resolution are clamped to zero.
double instantaneous_regret(double mv_reference, const Benchmark& bench,
                            double alpha, const Eigen::VectorXd& x);

// Overload computing the reference via mv_optimum (grid + analytic optima).
double instantaneous_regret(const Benchmark& bench, double alpha,
                            const Eigen::VectorXd& x);

double simple_regret(const Benchmark& bench, double alpha,
                     const Eigen::VectorXd& reported);
double simple_regret(double mv_reference, const Benchmark& bench, double alpha,
                     const Eigen::VectorXd& reported);

// One mutual-information increment: 0.5 * ln(1 + sigma_prev_sq / noise_var).
double info_gain_step(double sigma_prev_sq, double noise_var);

// Cumulative mutual information of a query sequence under the given per-point
// noise model: sum_t info_gain_step(sigma_{t-1}^2(x_t), noise(x_t)), where
// sigma_{t-1} is the GP posterior given the first t-1 points. If per_round is
// non-null it receives the running partial sums.
double sequence_info_gain(const KernelSpec& kernel, double lambda,
                          const Eigen::MatrixXd& X_seq,
                          const std::function<double(const Eigen::VectorXd&)>& noise_of,
                          std::vector<double>* per_round = nullptr);

// Same quantity via the determinant identity
//   0.5 * (ln det(K + lambda*Sigma) - ln det(lambda*Sigma)),
// kept as an independent route for cross-checks.
double logdet_info_gain(const KernelSpec& kernel, double lambda,
                        const Eigen::MatrixXd& X_seq,
                        const std::function<double(const Eigen::VectorXd&)>& noise_of);

// Cross-seed aggregation: per-round mean, standard error and mean +/- 2 SE
// bands for cumulative regret and for the as-of-round simple regret of each
// reporting rule. Requires >= 2 runs with identical T.
struct AggregateSummary {
    int T = 0;
    int runs = 0;
    Eigen::VectorXd r_cum_mean, r_cum_se;
    // Indexed by ReportRule; each entry is a length-T series.
    std::array<Eigen::VectorXd, kNumReportRules> simple_mean, simple_se;
};

AggregateSummary aggregate(const std::vector<RunResult>& results);

}  // namespace rahbo
