#include "rahbo/variance_model.hpp"

#include <cmath>

#include "rahbo/errors.hpp"

namespace rahbo {

std::pair<double, double> sample_stats(std::span<const double> samples) {
    const std::size_t k = samples.size();
    if (k < 2) {
        throw InputError("sample_stats: needs k >= 2 samples");
    }
    double mean = 0.0;
    for (double v : samples) {
        mean += v;
    }
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, ss / static_cast<double>(k - 1)};
}

RepeatedObservation make_repeated_observation(const Eigen::VectorXd& x,
                                              std::vector<double> samples) {
    RepeatedObservation obs;
    obs.x = x;
    const auto [mean, var] = sample_stats(samples);
    obs.samples = std::move(samples);
    obs.sample_mean = mean;
    obs.sample_var = var;
    return obs;
}

double eta_variance_proxy(double var_hi, int k) {
    if (k < 2) {
        throw InputError("eta_variance_proxy: needs k >= 2");
    }
    if (!(var_hi > 0.0)) {
        throw InputError("eta_variance_proxy: var_hi must be positive");
    }
    return 2.0 * var_hi * var_hi / static_cast<double>(k - 1);
}

VarianceModelState make_variance_model(const KernelSpec& kernel, double lambda,
                                       double var_lo, double var_hi, int k) {
    if (!(var_lo >= 0.0) || !(var_hi > var_lo)) {
        throw InputError("variance model: requires 0 <= var_lo < var_hi");
    }
    VarianceModelState state;
    state.gp = fit(kernel, Eigen::MatrixXd(0, kernel.dim()), Eigen::VectorXd(0),
                   Eigen::VectorXd(0), lambda);
    state.var_lo = var_lo;
    state.var_hi = var_hi;
    state.k = k;
    state.eta_proxy = eta_variance_proxy(var_hi, k);
    return state;
}

VarianceModelState update_variance_gp(const VarianceModelState& state,
                                      const Eigen::VectorXd& x, double sample_var) {
    if (sample_var < 0.0) {
        throw InputError("update_variance_gp: sample variance must be nonnegative");
    }
    const Eigen::Index n = state.gp.X.rows();
    Eigen::MatrixXd X(n + 1, state.gp.kernel.dim());
    X.topRows(n) = state.gp.X;
    X.row(n) = x.transpose();
    Eigen::VectorXd y(n + 1);
    y.head(n) = state.gp.y;
    y(n) = sample_var;
    Eigen::VectorXd noise = Eigen::VectorXd::Constant(n + 1, state.eta_proxy);

    VarianceModelState next = state;
    next.gp = fit(state.gp.kernel, X, y, noise, state.gp.lambda);
    return next;
}

std::pair<double, double> var_confidence_bounds(const VarianceModelState& state,
                                                const Eigen::VectorXd& x,
                                                double beta_var) {
    if (beta_var < 0.0) {
        throw InputError("var_confidence_bounds: beta_var must be >= 0");
    }
    const double mu = posterior_mean(state.gp, x);
    const double sigma = std::sqrt(posterior_var(state.gp, x));
    return {mu - beta_var * sigma, mu + beta_var * sigma};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> var_bounds_batch(
    const VarianceModelState& state, const Eigen::MatrixXd& Q, double beta_var) {
    if (beta_var < 0.0) {
        throw InputError("var_bounds_batch: beta_var must be >= 0");
    }
    auto [means, vars] = posterior_batch(state.gp, Q);
    Eigen::VectorXd sigma = vars.cwiseSqrt();
    return {means - beta_var * sigma, means + beta_var * sigma};
}

Eigen::VectorXd build_hat_sigma(const VarianceModelState& state,
                                const Eigen::MatrixXd& visited, double beta_var) {
    const double floor = std::max(state.var_lo, 1e-6);
    auto [lcb, ucb] = var_bounds_batch(state, visited, beta_var);
    Eigen::VectorXd out(visited.rows());
    for (Eigen::Index i = 0; i < visited.rows(); ++i) {
        out(i) = std::max(floor, std::min(ucb(i), state.var_hi)) /
                 static_cast<double>(state.k);
    }
    return out;
}

}  // namespace rahbo
