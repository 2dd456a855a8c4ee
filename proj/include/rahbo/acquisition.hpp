#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "rahbo/benchmarks.hpp"
#include "rahbo/gp.hpp"
#include "rahbo/variance_model.hpp"

namespace rahbo {

// Fixed candidate grid the acquisition functions are maximized over. Kept in
// both domain and unit-cube coordinates (GPs see the latter).
struct CandidateSet {
    Eigen::MatrixXd domain_points;  // m x d
    Eigen::MatrixXd unit_points;    // m x d

    int size() const { return static_cast<int>(domain_points.rows()); }
};

// Sobol grid over the domain box; size == 0 picks the default 1000 * d.
// seed == 0 (the default used by the runners) gives the unscrambled base
// grid, identical across algorithms and run seeds.
CandidateSet make_candidates(const Benchmark& bench, int size,
                             std::uint64_t seed = 0);

double ucb_f(const HeteroGPState& gp, double beta, const Eigen::VectorXd& x);
double lcb_f(const HeteroGPState& gp, double beta, const Eigen::VectorXd& x);

// Known-variance acquisition: ucb_f(x) - alpha * rho_sq(x).
double mv_ucb_known(const HeteroGPState& gp, double beta, double alpha,
                    const std::function<double(const Eigen::VectorXd&)>& rho_sq,
                    const Eigen::VectorXd& x);

// ucb_f(x) - alpha * lcb_var(x)
double mv_ucb(const HeteroGPState& gp, const VarianceModelState& var_model,
              double beta, double beta_var, double alpha,
              const Eigen::VectorXd& x);

// lcb_f(x) - alpha * ucb_var(x)
double mv_lcb(const HeteroGPState& gp, const VarianceModelState& var_model,
              double beta, double beta_var, double alpha,
              const Eigen::VectorXd& x);

// Posterior standard deviation of the variance GP.
double uncertainty_sampling_score(const VarianceModelState& var_model,
                                  const Eigen::VectorXd& x);

struct ArgmaxResult {
    Eigen::VectorXd point;  // domain coordinates
    Eigen::Index index = 0;
};

// First index attaining the maximum (ties broken by lowest index). The score
// is evaluated on domain points. Throws InputError on an empty set.
ArgmaxResult argmax_candidates(
    const std::function<double(const Eigen::VectorXd&)>& score,
    const CandidateSet& cands);

// Lowest-index argmax of a precomputed score vector.
Eigen::Index argmax_index(const Eigen::VectorXd& scores);

}  // namespace rahbo
