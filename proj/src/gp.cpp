#include "rahbo/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rahbo/errors.hpp"
#include "rahbo/rng.hpp"

namespace rahbo {
namespace {

void check_query_dim(const HeteroGPState& state, const Eigen::VectorXd& x,
                     const char* where) {
    if (x.size() != state.kernel.lengthscales.size()) {
        throw InputError(std::string(where) + ": query dimension mismatch");
    }
}

}  // namespace

HeteroGPState fit(const KernelSpec& kernel, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const Eigen::VectorXd& noise_diag,
                  double lambda) {
    validate_kernel_spec(kernel);
    const Eigen::Index n = X.rows();
    if (y.size() != n || noise_diag.size() != n) {
        throw InputError("fit: X, y and noise_diag must have matching lengths");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InputError("fit: lambda must be strictly positive");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(noise_diag(i) > 0.0) || !std::isfinite(noise_diag(i))) {
            throw InputError("fit: noise_diag entries must be strictly positive");
        }
    }
    if (n > 0 && X.cols() != kernel.lengthscales.size()) {
        throw InputError("fit: training point dimension mismatch");
    }

    HeteroGPState state;
    state.kernel = kernel;
    state.X = X;
    state.y = y;
    state.noise_diag = noise_diag;
    state.lambda = lambda;
    if (n == 0) {
        state.chol.resize(0, 0);
        state.alpha.resize(0);
        return state;
    }

    Eigen::MatrixXd A = kernel_matrix(kernel, X);
    A.diagonal() += lambda * noise_diag;

    double jitter = 0.0;
    for (double candidate = 1e-10; candidate <= 1.000001e-4; candidate *= 10.0) {
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() == Eigen::Success) {
            state.chol = llt.matrixL();
            state.alpha = llt.solve(y);
            state.jitter = jitter;
            return state;
        }
        A.diagonal().array() += candidate - jitter;
        jitter = candidate;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) {
        state.chol = llt.matrixL();
        state.alpha = llt.solve(y);
        state.jitter = jitter;
        return state;
    }
    throw NumericalError("fit: Cholesky factorization failed after max jitter 1e-4");
}

double posterior_mean(const HeteroGPState& state, const Eigen::VectorXd& x) {
    check_query_dim(state, x, "posterior_mean");
    if (state.n() == 0) {
        return 0.0;
    }
    return kernel_vector(state.kernel, state.X, x).dot(state.alpha);
}

double posterior_var(const HeteroGPState& state, const Eigen::VectorXd& x) {
    check_query_dim(state, x, "posterior_var");
    const double prior = kernel_diag(state.kernel, x);
    if (state.n() == 0) {
        return prior / state.lambda;
    }
    const Eigen::VectorXd k = kernel_vector(state.kernel, state.X, x);
    const Eigen::VectorXd v = state.chol.triangularView<Eigen::Lower>().solve(k);
    return std::max(0.0, (prior - v.squaredNorm()) / state.lambda);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> posterior_batch(
    const HeteroGPState& state, const Eigen::MatrixXd& Q) {
    const Eigen::Index m = Q.rows();
    Eigen::VectorXd prior(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        prior(i) = kernel_diag(state.kernel, Q.row(i));
    }
    if (state.n() == 0) {
        return {Eigen::VectorXd::Zero(m), prior / state.lambda};
    }
    const Eigen::MatrixXd Kq = kernel_cross(state.kernel, state.X, Q);  // n x m
    Eigen::VectorXd means = Kq.transpose() * state.alpha;
    Eigen::MatrixXd V = state.chol.triangularView<Eigen::Lower>().solve(Kq);
    Eigen::VectorXd vars =
        ((prior - V.colwise().squaredNorm().transpose()) / state.lambda).cwiseMax(0.0);
    return {std::move(means), std::move(vars)};
}

double beta_multiplier(const HeteroGPState& state, const BetaSchedule& schedule) {
    if (schedule.mode == BetaSchedule::Mode::Fixed) {
        return schedule.fixed_value;
    }
    if (!(schedule.delta > 0.0 && schedule.delta < 1.0)) {
        throw InputError("beta_multiplier: delta must lie in (0,1)");
    }
    if (!(schedule.rkhs_bound > 0.0)) {
        throw InputError("beta_multiplier: rkhs_bound must be positive");
    }
    double logdet_ratio = 0.0;
    if (state.n() > 0) {
        double logdet_A = 0.0;
        for (Eigen::Index i = 0; i < state.chol.rows(); ++i) {
            logdet_A += std::log(state.chol(i, i));
        }
        logdet_A *= 2.0;
        const double logdet_noise =
            (state.lambda * state.noise_diag.array()).log().sum();
        logdet_ratio = std::max(0.0, logdet_A - logdet_noise);
    }
    return std::sqrt(logdet_ratio + 2.0 * std::log(1.0 / schedule.delta)) +
           std::sqrt(state.lambda) * schedule.rkhs_bound;
}

double log_marginal_likelihood(const HeteroGPState& state) {
    const int n = state.n();
    if (n < 1) {
        throw InputError("log_marginal_likelihood: requires at least one observation");
    }
    double logdet_A = 0.0;
    for (Eigen::Index i = 0; i < state.chol.rows(); ++i) {
        logdet_A += std::log(state.chol(i, i));
    }
    logdet_A *= 2.0;
    // y ~ N(0, A/lambda) with A = K + lambda*Sigma.
    const double quad = state.lambda * state.y.dot(state.alpha);
    const double logdet_cov = logdet_A - n * std::log(state.lambda);
    return -0.5 * (quad + logdet_cov + n * std::log(2.0 * std::numbers::pi));
}

KernelSpec fit_hyperparameters(KernelFamily family, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& noise_diag, int budget,
                               std::uint64_t seed, double lambda) {
    if (X.rows() < 2) {
        throw InputError("fit_hyperparameters: requires at least two observations");
    }
    if (budget < 1) {
        throw InputError("fit_hyperparameters: budget must be >= 1");
    }
    const int d = static_cast<int>(X.cols());
    auto rng = make_stream({seed});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double log_ls_lo = std::log(1e-2), log_ls_hi = std::log(1e1);
    const double log_os_lo = std::log(1e-1), log_os_hi = std::log(1e1);

    KernelSpec best;
    double best_lml = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < budget; ++trial) {
        KernelSpec candidate;
        candidate.family = family;
        candidate.lengthscales.resize(d);
        for (int j = 0; j < d; ++j) {
            candidate.lengthscales(j) =
                std::exp(log_ls_lo + (log_ls_hi - log_ls_lo) * unif(rng));
        }
        candidate.output_scale =
            std::exp(log_os_lo + (log_os_hi - log_os_lo) * unif(rng));
        const double lml =
            log_marginal_likelihood(fit(candidate, X, y, noise_diag, lambda));
        if (lml > best_lml) {
            best_lml = lml;
            best = candidate;
        }
    }
    return best;
}

}  // namespace rahbo
