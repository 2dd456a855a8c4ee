#include "rahbo/metrics.hpp"

#include <cmath>

#include "rahbo/errors.hpp"
#include "rahbo/gp.hpp"

namespace rahbo {

double mv_value(const Benchmark& bench, double alpha, const Eigen::VectorXd& x) {
    if (alpha < 0.0) {
        throw InputError("mv_value: alpha must be >= 0");
    }
    if (!bench.contains(x)) {
        throw InputError("mv_value: point outside the benchmark domain");
    }
    return bench.objective(x) - alpha * bench.noise_var(x);
}

double instantaneous_regret(double mv_reference, const Benchmark& bench,
                            double alpha, const Eigen::VectorXd& x) {
    const double r = mv_reference - mv_value(bench, alpha, x);
    if (r < -1e-9) {
        throw NumericalError("instantaneous_regret: reference is not an upper bound");
    }
    return std::max(0.0, r);
}

double instantaneous_regret(const Benchmark& bench, double alpha,
                            const Eigen::VectorXd& x) {
    return instantaneous_regret(mv_optimum(bench, alpha), bench, alpha, x);
}

double simple_regret(double mv_reference, const Benchmark& bench, double alpha,
                     const Eigen::VectorXd& reported) {
    return instantaneous_regret(mv_reference, bench, alpha, reported);
}

double simple_regret(const Benchmark& bench, double alpha,
                     const Eigen::VectorXd& reported) {
    return instantaneous_regret(bench, alpha, reported);
}

double info_gain_step(double sigma_prev_sq, double noise_var) {
    if (!(noise_var > 0.0)) {
        throw InputError("info_gain_step: noise_var must be positive");
    }
    if (sigma_prev_sq < 0.0) {
        throw InputError("info_gain_step: sigma_prev_sq must be nonnegative");
    }
    return 0.5 * std::log1p(sigma_prev_sq / noise_var);
}

double sequence_info_gain(const KernelSpec& kernel, double lambda,
                          const Eigen::MatrixXd& X_seq,
                          const std::function<double(const Eigen::VectorXd&)>& noise_of,
                          std::vector<double>* per_round) {
    const Eigen::Index T = X_seq.rows();
    if (per_round != nullptr) {
        per_round->clear();
        per_round->reserve(static_cast<std::size_t>(T));
    }
    double total = 0.0;
    Eigen::VectorXd noise(T);
    for (Eigen::Index t = 0; t < T; ++t) {
        const Eigen::VectorXd x = X_seq.row(t);
        noise(t) = noise_of(x);
        const HeteroGPState prev =
            fit(kernel, X_seq.topRows(t), Eigen::VectorXd::Zero(t),
                noise.head(t), lambda);
        total += info_gain_step(posterior_var(prev, x), noise(t));
        if (per_round != nullptr) {
            per_round->push_back(total);
        }
    }
    return total;
}

double logdet_info_gain(const KernelSpec& kernel, double lambda,
                        const Eigen::MatrixXd& X_seq,
                        const std::function<double(const Eigen::VectorXd&)>& noise_of) {
    const Eigen::Index T = X_seq.rows();
    if (T == 0) {
        return 0.0;
    }
    Eigen::VectorXd noise(T);
    for (Eigen::Index t = 0; t < T; ++t) {
        noise(t) = noise_of(X_seq.row(t));
        if (!(noise(t) > 0.0)) {
            throw InputError("logdet_info_gain: noise must be positive");
        }
    }
    const HeteroGPState state = fit(kernel, X_seq, Eigen::VectorXd::Zero(T), noise, lambda);
    double logdet_A = 0.0;
    for (Eigen::Index i = 0; i < T; ++i) {
        logdet_A += std::log(state.chol(i, i));
    }
    logdet_A *= 2.0;
    const double logdet_noise = (lambda * noise.array()).log().sum();
    return 0.5 * (logdet_A - logdet_noise);
}

AggregateSummary aggregate(const std::vector<RunResult>& results) {
    if (results.size() < 2) {
        throw InputError("aggregate: needs at least two runs");
    }
    const int T = static_cast<int>(results.front().trace.size());
    for (const auto& r : results) {
        if (static_cast<int>(r.trace.size()) != T) {
            throw InputError("aggregate: runs have mismatched horizon T");
        }
    }
    const int n = static_cast<int>(results.size());
    AggregateSummary summary;
    summary.T = T;
    summary.runs = n;
    summary.r_cum_mean.resize(T);
    summary.r_cum_se.resize(T);
    for (auto& v : summary.simple_mean) {
        v.resize(T);
    }
    for (auto& v : summary.simple_se) {
        v.resize(T);
    }

    auto mean_se = [n](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double v : xs) {
            mean += v;
        }
        mean /= n;
        double ss = 0.0;
        for (double v : xs) {
            ss += (v - mean) * (v - mean);
        }
        const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
        return std::pair<double, double>(mean, sd / std::sqrt(static_cast<double>(n)));
    };

    std::vector<double> buffer(static_cast<std::size_t>(n));
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < n; ++i) {
            buffer[static_cast<std::size_t>(i)] = results[static_cast<std::size_t>(i)].trace[static_cast<std::size_t>(t)].r_cum;
        }
        auto [m, se] = mean_se(buffer);
        summary.r_cum_mean(t) = m;
        summary.r_cum_se(t) = se;
        for (int rule = 0; rule < kNumReportRules; ++rule) {
            for (int i = 0; i < n; ++i) {
                buffer[static_cast<std::size_t>(i)] =
                    results[static_cast<std::size_t>(i)].trace[static_cast<std::size_t>(t)]
                        .simple_regret_by_rule[static_cast<std::size_t>(rule)];
            }
            auto [ms, ses] = mean_se(buffer);
            summary.simple_mean[static_cast<std::size_t>(rule)](t) = ms;
            summary.simple_se[static_cast<std::size_t>(rule)](t) = ses;
        }
    }
    return summary;
}

}  // namespace rahbo
