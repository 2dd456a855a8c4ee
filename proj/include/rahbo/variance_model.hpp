#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rahbo/gp.hpp"

namespace rahbo {

// One repeated-experiment evaluation: k >= 2 draws at x with their unbiased
// sample statistics.
struct RepeatedObservation {
    Eigen::VectorXd x;
    std::vector<double> samples;
    double sample_mean = 0.0;
    double sample_var = 0.0;
};

// mean = (1/k) sum y_i, var = (1/(k-1)) sum (y_i - mean)^2. Throws InputError
// for fewer than two samples.
std::pair<double, double> sample_stats(std::span<const double> samples);

RepeatedObservation make_repeated_observation(const Eigen::VectorXd& x,
                                              std::vector<double> samples);

// Conservative variance-proxy of the sample variance under strictly
// sub-Gaussian noise: 2*var_hi^2/(k-1).
double eta_variance_proxy(double var_hi, int k);

// GP over the noise-variance function, trained on (x, sample variance) pairs
// with homoscedastic noise eta_proxy. var_lo/var_hi are the assumed bounds on
// the true noise variance; they truncate the upper confidence bound when the
// noise matrix for the objective GP is assembled.
struct VarianceModelState {
    HeteroGPState gp;
    double var_lo = 0.0;
    double var_hi = 1.0;
    int k = 2;
    double eta_proxy = 1.0;
};

// Empty (prior-only) model.
VarianceModelState make_variance_model(const KernelSpec& kernel, double lambda,
                                       double var_lo, double var_hi, int k);

// Refits including the new (x, sample_var) pair; the previous state is left
// untouched. Throws InputError on negative sample_var.
VarianceModelState update_variance_gp(const VarianceModelState& state,
                                      const Eigen::VectorXd& x, double sample_var);

// (mu - beta*sigma, mu + beta*sigma); beta_var must be >= 0.
std::pair<double, double> var_confidence_bounds(const VarianceModelState& state,
                                                const Eigen::VectorXd& x,
                                                double beta_var);

// Batched confidence bounds over the rows of Q: (lcb, ucb).
std::pair<Eigen::VectorXd, Eigen::VectorXd> var_bounds_batch(
    const VarianceModelState& state, const Eigen::MatrixXd& Q, double beta_var);

// Per-point noise for the objective GP over sample means:
//   max(max(var_lo, 1e-6), min(ucb_var(x_i), var_hi)) / k.
// The upper truncation follows the conservative-estimate rule; the positive
// floor keeps the factorization valid when the ucb dips below zero early on.
Eigen::VectorXd build_hat_sigma(const VarianceModelState& state,
                                const Eigen::MatrixXd& visited, double beta_var);

}  // namespace rahbo
