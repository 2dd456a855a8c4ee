#include "rahbo/acquisition.hpp"

#include <cmath>

#include "rahbo/errors.hpp"
#include "rahbo/sobol.hpp"

namespace rahbo {

CandidateSet make_candidates(const Benchmark& bench, int size, std::uint64_t seed) {
    const int d = bench.dim();
    const int m = size > 0 ? size : 1000 * d;
    CandidateSet cands;
    cands.unit_points = sobol_unit(m, d, seed);
    cands.domain_points = cands.unit_points;
    for (int j = 0; j < d; ++j) {
        cands.domain_points.col(j) =
            (bench.lo(j) + cands.domain_points.col(j).array() * (bench.hi(j) - bench.lo(j)))
                .matrix();
    }
    return cands;
}

double ucb_f(const HeteroGPState& gp, double beta, const Eigen::VectorXd& x) {
    return posterior_mean(gp, x) + beta * std::sqrt(posterior_var(gp, x));
}

double lcb_f(const HeteroGPState& gp, double beta, const Eigen::VectorXd& x) {
    return posterior_mean(gp, x) - beta * std::sqrt(posterior_var(gp, x));
}

double mv_ucb_known(const HeteroGPState& gp, double beta, double alpha,
                    const std::function<double(const Eigen::VectorXd&)>& rho_sq,
                    const Eigen::VectorXd& x) {
    return ucb_f(gp, beta, x) - alpha * rho_sq(x);
}

double mv_ucb(const HeteroGPState& gp, const VarianceModelState& var_model,
              double beta, double beta_var, double alpha,
              const Eigen::VectorXd& x) {
    const auto [lcb_var, ucb_var] = var_confidence_bounds(var_model, x, beta_var);
    (void)ucb_var;
    return ucb_f(gp, beta, x) - alpha * lcb_var;
}

double mv_lcb(const HeteroGPState& gp, const VarianceModelState& var_model,
              double beta, double beta_var, double alpha,
              const Eigen::VectorXd& x) {
    const auto [lcb_var, ucb_var] = var_confidence_bounds(var_model, x, beta_var);
    (void)lcb_var;
    return lcb_f(gp, beta, x) - alpha * ucb_var;
}

double uncertainty_sampling_score(const VarianceModelState& var_model,
                                  const Eigen::VectorXd& x) {
    return std::sqrt(posterior_var(var_model.gp, x));
}

ArgmaxResult argmax_candidates(
    const std::function<double(const Eigen::VectorXd&)>& score,
    const CandidateSet& cands) {
    if (cands.size() == 0) {
        throw InputError("argmax_candidates: empty candidate set");
    }
    Eigen::VectorXd scores(cands.size());
    for (int i = 0; i < cands.size(); ++i) {
        scores(i) = score(cands.domain_points.row(i));
    }
    ArgmaxResult result;
    result.index = argmax_index(scores);
    result.point = cands.domain_points.row(result.index);
    return result;
}

Eigen::Index argmax_index(const Eigen::VectorXd& scores) {
    if (scores.size() == 0) {
        throw InputError("argmax_index: empty score vector");
    }
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i) {
        if (scores(i) > scores(best)) {
            best = i;
        }
    }
    return best;
}

}  // namespace rahbo
