#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "rahbo/kernel.hpp"

namespace rahbo {

// Fitted heteroscedastic GP. The posterior is
//   mean(x) = k_t(x)^T (K + lambda*diag(noise))^{-1} y
//   var(x)  = (kappa(x,x) - k_t(x)^T (K + lambda*diag(noise))^{-1} k_t(x)) / lambda
// with a cached lower-triangular factor of K + lambda*diag(noise).
// Immutable after fit; reads are safe in parallel.
struct HeteroGPState {
    KernelSpec kernel;
    Eigen::MatrixXd X;           // n x d training inputs
    Eigen::VectorXd y;           // n targets
    Eigen::VectorXd noise_diag;  // n per-point noise variances, > 0
    double lambda = 1.0;
    Eigen::MatrixXd chol;        // lower factor of K + lambda*diag(noise_diag)
    Eigen::VectorXd alpha;       // (K + lambda*diag(noise_diag))^{-1} y
    double jitter = 0.0;         // diagonal jitter actually added, 0 in the usual case

    int n() const { return static_cast<int>(X.rows()); }
};

// Confidence-width multiplier. Fixed mode is the practical default (beta = 2);
// Theoretical mode evaluates
//   sqrt(ln det(K + lambda*Sigma) - ln det(lambda*Sigma) + 2 ln(1/delta))
//     + sqrt(lambda) * rkhs_bound
// from the cached factorization.
struct BetaSchedule {
    enum class Mode { Fixed, Theoretical };
    Mode mode = Mode::Fixed;
    double fixed_value = 2.0;
    double delta = 0.05;      // confidence level, in (0,1)
    double rkhs_bound = 1.0;  // bound on the RKHS norm of the modeled function
    double lambda = 1.0;
};

// n = 0 yields a valid prior-only state (mean 0, var kappa(x,x)/lambda).
// Throws InputError on non-positive noise/lambda or size mismatches and
// NumericalError if the factorization fails after the jitter ladder
// (1e-10 escalating tenfold to 1e-4).
HeteroGPState fit(const KernelSpec& kernel, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const Eigen::VectorXd& noise_diag,
                  double lambda);

double posterior_mean(const HeteroGPState& state, const Eigen::VectorXd& x);

// Nonnegative; tiny negative values from rounding are clamped to 0.
double posterior_var(const HeteroGPState& state, const Eigen::VectorXd& x);

// Batched posterior over the rows of Q: (means, variances).
std::pair<Eigen::VectorXd, Eigen::VectorXd> posterior_batch(
    const HeteroGPState& state, const Eigen::MatrixXd& Q);

// Fixed mode returns fixed_value unconditionally; Theoretical mode uses the
// state's cached factor and its lambda.
double beta_multiplier(const HeteroGPState& state, const BetaSchedule& schedule);

// Log evidence of y under the modelling assumptions y ~ N(0, K/lambda + Sigma),
// i.e. N(0, (K + lambda*Sigma)/lambda). Requires n >= 1.
double log_marginal_likelihood(const HeteroGPState& state);

// Seeded multi-start random search maximizing log_marginal_likelihood:
// lengthscales log-uniform in [1e-2, 1e1] per dimension, output scale
// log-uniform in [1e-1, 1e1]. Deterministic for a fixed seed; ties keep the
// earliest candidate. Requires n >= 2 and budget >= 1.
KernelSpec fit_hyperparameters(KernelFamily family, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& noise_diag, int budget,
                               std::uint64_t seed, double lambda = 1.0);

}  // namespace rahbo
