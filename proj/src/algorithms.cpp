#include "rahbo/algorithms.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rahbo/errors.hpp"
#include "rahbo/metrics.hpp"
#include "rahbo/rng.hpp"
#include "rahbo/sobol.hpp"

namespace rahbo {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Rahbo: return "rahbo";
        case Algorithm::GpUcb: return "gp_ucb";
        case Algorithm::RahboKnown: return "rahbo_known";
        case Algorithm::RahboUs: return "rahbo_us";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "rahbo") return Algorithm::Rahbo;
    if (name == "gp_ucb") return Algorithm::GpUcb;
    if (name == "rahbo_known") return Algorithm::RahboKnown;
    if (name == "rahbo_us") return Algorithm::RahboUs;
    throw InputError("unknown algorithm: '" + name + "'");
}

std::string to_string(ReportRule rule) {
    switch (rule) {
        case ReportRule::LcbMv: return "lcb_mv";
        case ReportRule::LcbMvPerRound: return "lcb_mv_per_round";
        case ReportRule::BestObserved: return "best_observed";
        case ReportRule::MaxEmpiricalMv: return "max_empirical_mv";
    }
    return "unknown";
}

ReportRule report_rule_from_string(const std::string& name) {
    if (name == "lcb_mv") return ReportRule::LcbMv;
    if (name == "lcb_mv_per_round") return ReportRule::LcbMvPerRound;
    if (name == "best_observed") return ReportRule::BestObserved;
    if (name == "max_empirical_mv") return ReportRule::MaxEmpiricalMv;
    throw InputError("unknown report rule: '" + name + "'");
}

namespace {

Eigen::MatrixXd append_row(const Eigen::MatrixXd& M, const Eigen::VectorXd& r) {
    Eigen::MatrixXd out(M.rows() + 1, r.size());
    if (M.rows() > 0) {
        out.topRows(M.rows()) = M;
    }
    out.row(M.rows()) = r.transpose();
    return out;
}

Eigen::VectorXd append_value(const Eigen::VectorXd& v, double x) {
    Eigen::VectorXd out(v.size() + 1);
    if (v.size() > 0) {
        out.head(v.size()) = v;
    }
    out(v.size()) = x;
    return out;
}

// The objective GP is fit on standardized targets (the hyperparameter search
// ranges assume roughly unit-scale data); predictions are mapped back to
// objective units. Recomputed from all visited sample means at every refit.
struct Standardizer {
    double shift = 0.0;
    double scale = 1.0;
};

Standardizer make_standardizer(const Eigen::VectorXd& y) {
    Standardizer s;
    const Eigen::Index n = y.size();
    if (n == 0) {
        return s;
    }
    s.shift = y.mean();
    if (n > 1) {
        const double sd = std::sqrt((y.array() - s.shift).square().sum() /
                                    static_cast<double>(n - 1));
        s.scale = sd > 1e-12 ? sd : 1.0;
    }
    return s;
}

void validate_schedule(const BetaSchedule& s, const char* which) {
    if (!(s.fixed_value > 0.0)) {
        throw InputError(std::string(which) + ": fixed_value must be > 0");
    }
    if (!(s.delta > 0.0 && s.delta < 1.0)) {
        throw InputError(std::string(which) + ": delta must lie in (0,1)");
    }
    if (!(s.rkhs_bound > 0.0)) {
        throw InputError(std::string(which) + ": rkhs_bound must be > 0");
    }
    if (!(s.lambda > 0.0)) {
        throw InputError(std::string(which) + ": lambda must be > 0");
    }
}

RunResult run_engine(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed) {
    validate_run_spec(spec, bench);
    const int d = bench.dim();
    const double alpha = spec.alpha;
    const double lambda = spec.lambda;
    const double var_lo = spec.var_lo >= 0.0 ? spec.var_lo : bench.var_lo;
    const double var_hi = spec.var_hi >= 0.0 ? spec.var_hi : bench.var_hi;
    const double eta = eta_variance_proxy(var_hi, spec.k);
    const bool known = spec.algorithm == Algorithm::RahboKnown;
    const bool us = spec.algorithm == Algorithm::RahboUs;
    const int n_us = us ? spec.n_us : 0;

    const CandidateSet cands = make_candidates(bench, spec.candidate_grid, 0);
    const int m = cands.size();
    Eigen::VectorXd cand_f(m), cand_rho(m);
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd x = cands.domain_points.row(i);
        cand_f(i) = bench.objective(x);
        cand_rho(i) = bench.noise_var(x);
    }
    // Regret reference: dense grid plus analytic optima plus the candidate
    // grid itself, so selections can never beat the reference.
    double mv_ref = mv_optimum(bench, alpha);
    mv_ref = std::max(mv_ref, (cand_f - alpha * cand_rho).maxCoeff());

    RunResult result;
    result.algorithm = spec.algorithm;
    result.seed = seed;
    result.k = spec.k;
    result.mv_reference = mv_ref;
    result.reported_rule = spec.report_rule;

    // Visited data (initial design + stage-1 + acquisitions), GP space.
    Eigen::MatrixXd X_unit(0, d);
    Eigen::VectorXd means(0), svars(0), rho_truth(0);
    int sampler_calls = 0;

    auto observe = [&](const Eigen::VectorXd& x_dom, std::mt19937_64 rng)
        -> std::pair<double, double> {
        const std::vector<double> samples =
            sample_observation(bench, x_dom, spec.k, rng);
        sampler_calls += spec.k;
        return sample_stats(samples);
    };

    const Eigen::MatrixXd init_dom = sobol_design(bench, spec.n_init, seed);
    for (int i = 0; i < spec.n_init; ++i) {
        const Eigen::VectorXd x_dom = init_dom.row(i);
        const auto [mh, s2] = observe(
            x_dom, make_stream({seed, stream_tag::kInitDesign,
                                static_cast<std::uint64_t>(i)}));
        X_unit = append_row(X_unit, to_unit(bench, x_dom));
        means = append_value(means, mh);
        svars = append_value(svars, s2);
        rho_truth = append_value(rho_truth, bench.noise_var(x_dom));
    }

    // Kernels are fitted once on the initial design and frozen unless a
    // refit cadence is configured.
    KernelSpec kern_var;
    if (spec.kernel_var) {
        kern_var = *spec.kernel_var;
    } else {
        kern_var = fit_hyperparameters(
            spec.fit_family, X_unit, svars,
            Eigen::VectorXd::Constant(spec.n_init, eta), spec.hyperfit_budget,
            derive_seed(seed, stream_tag::kHyperfitVariance), lambda);
    }
    VarianceModelState var_model =
        make_variance_model(kern_var, lambda, var_lo, var_hi, spec.k);
    if (!known) {
        var_model.gp = fit(kern_var, X_unit, svars,
                           Eigen::VectorXd::Constant(X_unit.rows(), eta), lambda);
    }

    auto noise_for_objective = [&](double beta_var_now) -> Eigen::VectorXd {
        if (known) {
            return rho_truth / static_cast<double>(spec.k);
        }
        return build_hat_sigma(var_model, X_unit, beta_var_now);
    };

    KernelSpec kern_f;
    if (spec.kernel_f) {
        kern_f = *spec.kernel_f;
    } else {
        const double beta_var0 =
            known ? 0.0 : beta_multiplier(var_model.gp, spec.beta_var);
        const Standardizer st = make_standardizer(means);
        kern_f = fit_hyperparameters(
            spec.fit_family, X_unit,
            ((means.array() - st.shift) / st.scale).matrix(),
            noise_for_objective(beta_var0) / (st.scale * st.scale),
            spec.hyperfit_budget,
            derive_seed(seed, stream_tag::kHyperfitObjective), lambda);
    }

    // Stage 1 (RahboUs): spend n_us queries purely on learning the variance
    // function by uncertainty sampling. The sample means still enter the
    // objective GP data.
    for (int j = 0; j < n_us; ++j) {
        auto [vm, vv] = posterior_batch(var_model.gp, cands.unit_points);
        const Eigen::Index idx = argmax_index(vv);
        const Eigen::VectorXd x_dom = cands.domain_points.row(idx);
        const Eigen::VectorXd x_u = cands.unit_points.row(idx);
        const auto [mh, s2] = observe(
            x_dom, make_stream({seed, stream_tag::kUncertaintySampling,
                                static_cast<std::uint64_t>(j)}));
        var_model = update_variance_gp(var_model, x_u, s2);
        X_unit = append_row(X_unit, x_u);
        means = append_value(means, mh);
        svars = append_value(svars, s2);
        rho_truth = append_value(rho_truth, bench.noise_var(x_dom));
    }

    double beta_var_post =
        known ? 0.0 : beta_multiplier(var_model.gp, spec.beta_var);
    Standardizer st;
    HeteroGPState gp;
    auto refit_objective = [&]() {
        st = make_standardizer(means);
        gp = fit(kern_f, X_unit, ((means.array() - st.shift) / st.scale).matrix(),
                 noise_for_objective(beta_var_post) / (st.scale * st.scale), lambda);
    };
    refit_objective();

    // Mutual-information diagnostics over the selected sequence, under the
    // theory noise models (var_hi^2/k for the objective, eta for the
    // variance GP).
    Eigen::MatrixXd acq_unit(0, d);
    const double gain_noise_f = var_hi / static_cast<double>(spec.k);
    double ig_f = 0.0, ig_var = 0.0;

    const int offset = spec.n_init + n_us;  // start of acquisition data
    double r_cum = 0.0;
    std::array<Eigen::Index, kNumReportRules> rule_idx{};
    result.trace.reserve(static_cast<std::size_t>(spec.T));

    for (int t = 1; t <= spec.T; ++t) {
        const double beta_t = beta_multiplier(gp, spec.beta);
        const double beta_var_t = beta_var_post;

        auto [f_mean_std, f_var_std] = posterior_batch(gp, cands.unit_points);
        Eigen::VectorXd f_mean =
            (st.shift + st.scale * f_mean_std.array()).matrix();
        Eigen::VectorXd f_sigma = st.scale * f_var_std.cwiseSqrt();
        Eigen::VectorXd ucb = f_mean + beta_t * f_sigma;

        Eigen::VectorXd v_mean, v_sigma;
        if (!known) {
            auto [vm, vv] = posterior_batch(var_model.gp, cands.unit_points);
            v_mean = std::move(vm);
            v_sigma = vv.cwiseSqrt();
        }

        Eigen::VectorXd score;
        switch (spec.algorithm) {
            case Algorithm::Rahbo:
                score = ucb - alpha * (v_mean - beta_var_t * v_sigma);
                break;
            case Algorithm::GpUcb:
                score = ucb;
                break;
            case Algorithm::RahboKnown:
                score = ucb - alpha * cand_rho;
                break;
            case Algorithm::RahboUs:
                score = ucb - alpha * v_mean;
                break;
        }

        const Eigen::Index idx = argmax_index(score);
        const Eigen::VectorXd x_dom = cands.domain_points.row(idx);
        const Eigen::VectorXd x_u = cands.unit_points.row(idx);

        const double ucb_var_sel =
            known ? cand_rho(idx) : (v_mean(idx) + beta_var_t * v_sigma(idx));
        const double lcb_mv_sel =
            (f_mean(idx) - beta_t * f_sigma(idx)) - alpha * ucb_var_sel;

        {
            const Eigen::Index na = acq_unit.rows();
            const HeteroGPState gain_f =
                fit(kern_f, acq_unit, Eigen::VectorXd::Zero(na),
                    Eigen::VectorXd::Constant(na, gain_noise_f), lambda);
            ig_f += info_gain_step(posterior_var(gain_f, x_u), gain_noise_f);
            if (!known) {
                const HeteroGPState gain_var =
                    fit(kern_var, acq_unit, Eigen::VectorXd::Zero(na),
                        Eigen::VectorXd::Constant(na, eta), lambda);
                ig_var += info_gain_step(posterior_var(gain_var, x_u), eta);
            }
        }

        const auto [mh, s2] = observe(
            x_dom, make_stream({seed, stream_tag::kAcquisition,
                                static_cast<std::uint64_t>(t)}));

        if (!known) {
            var_model = update_variance_gp(var_model, x_u, s2);
        }
        X_unit = append_row(X_unit, x_u);
        means = append_value(means, mh);
        svars = append_value(svars, s2);
        rho_truth = append_value(rho_truth, bench.noise_var(x_dom));
        acq_unit = append_row(acq_unit, x_u);

        beta_var_post = known ? 0.0 : beta_multiplier(var_model.gp, spec.beta_var);
        if (!spec.kernel_f && spec.refit_every > 0 && t % spec.refit_every == 0) {
            const Standardizer sr = make_standardizer(means);
            kern_f = fit_hyperparameters(
                spec.fit_family, X_unit,
                ((means.array() - sr.shift) / sr.scale).matrix(),
                noise_for_objective(beta_var_post) / (sr.scale * sr.scale),
                spec.hyperfit_budget,
                derive_seed(derive_seed(seed, stream_tag::kHyperfitObjective),
                            static_cast<std::uint64_t>(t)),
                lambda);
        }
        refit_objective();

        TraceRow row;
        row.round = t;
        row.x = x_dom;
        row.sample_mean = mh;
        row.sample_var = s2;
        row.f_true = bench.objective(x_dom);
        row.rho_true = bench.noise_var(x_dom);
        row.mv_true = row.f_true - alpha * row.rho_true;
        row.r_inst = std::max(0.0, mv_ref - row.mv_true);
        r_cum += row.r_inst;
        row.r_cum = r_cum;
        row.r_cum_per_sample = static_cast<double>(spec.k) * r_cum;
        row.info_gain_f = ig_f;
        row.info_gain_var = ig_var;
        row.beta_used = beta_t;
        row.beta_var_used = beta_var_t;
        row.candidate_index = idx;
        row.lcb_mv_at_selection = lcb_mv_sel;
        result.trace.push_back(row);

        // As-of-round reporting under every rule, using the just-updated
        // (time-t) models over the t acquisition points so far.
        {
            const double beta_rep = beta_multiplier(gp, spec.beta);
            auto [am, av] = posterior_batch(gp, acq_unit);
            Eigen::VectorXd lcbf =
                (st.shift + st.scale * am.array()).matrix() -
                beta_rep * st.scale * av.cwiseSqrt();
            Eigen::VectorXd ucbv(t);
            if (known) {
                ucbv = rho_truth.segment(offset, t);
            } else {
                auto [vl, vu] = var_bounds_batch(var_model, acq_unit, beta_var_post);
                ucbv = vu;
            }
            Eigen::VectorXd lcb_mv_final = lcbf - alpha * ucbv;

            Eigen::VectorXd per_round_sel(t), observed(t), empirical_mv(t);
            for (int j = 0; j < t; ++j) {
                const TraceRow& rj = result.trace[static_cast<std::size_t>(j)];
                per_round_sel(j) = rj.lcb_mv_at_selection;
                observed(j) = rj.sample_mean;
                empirical_mv(j) = rj.sample_mean - alpha * rj.sample_var;
            }
            rule_idx[static_cast<std::size_t>(ReportRule::LcbMv)] =
                argmax_index(lcb_mv_final);
            rule_idx[static_cast<std::size_t>(ReportRule::LcbMvPerRound)] =
                argmax_index(per_round_sel);
            rule_idx[static_cast<std::size_t>(ReportRule::BestObserved)] =
                argmax_index(observed);
            rule_idx[static_cast<std::size_t>(ReportRule::MaxEmpiricalMv)] =
                argmax_index(empirical_mv);
            for (int rr = 0; rr < kNumReportRules; ++rr) {
                const double mv_rep =
                    result.trace[static_cast<std::size_t>(rule_idx[static_cast<std::size_t>(rr)])]
                        .mv_true;
                result.trace.back().simple_regret_by_rule[static_cast<std::size_t>(rr)] =
                    std::max(0.0, mv_ref - mv_rep);
            }
        }
    }

    result.final_gp = gp;
    result.final_var_model = var_model;
    result.final_beta = beta_multiplier(gp, spec.beta);
    result.final_beta_var = beta_var_post;
    result.y_shift = st.shift;
    result.y_scale = st.scale;
    result.sampler_calls = sampler_calls;
    for (int rr = 0; rr < kNumReportRules; ++rr) {
        result.reported_by_rule[static_cast<std::size_t>(rr)] =
            result.trace[static_cast<std::size_t>(rule_idx[static_cast<std::size_t>(rr)])].x;
    }
    result.reported_point =
        result.reported_by_rule[static_cast<std::size_t>(spec.report_rule)];
    return result;
}

}  // namespace

void validate_run_spec(const RunSpec& spec, const Benchmark& bench) {
    if (!(spec.alpha >= 0.0)) {
        throw InputError("run spec: alpha must be >= 0");
    }
    if (spec.k < 2) {
        throw InputError("run spec: k must be >= 2 (sample variance needs two draws)");
    }
    if (spec.T < 1) {
        throw InputError("run spec: T must be >= 1");
    }
    if (spec.n_init < 1) {
        throw InputError("run spec: n_init must be >= 1");
    }
    if (spec.n_us < 0) {
        throw InputError("run spec: n_us must be >= 0");
    }
    if (!(spec.lambda > 0.0)) {
        throw InputError("run spec: lambda must be > 0");
    }
    if (spec.hyperfit_budget < 1) {
        throw InputError("run spec: hyperfit_budget must be >= 1");
    }
    if (spec.candidate_grid < 0) {
        throw InputError("run spec: candidate_grid must be >= 0");
    }
    if (spec.refit_every < 0) {
        throw InputError("run spec: refit_every must be >= 0");
    }
    validate_schedule(spec.beta, "beta schedule");
    validate_schedule(spec.beta_var, "beta_var schedule");
    const double var_lo = spec.var_lo >= 0.0 ? spec.var_lo : bench.var_lo;
    const double var_hi = spec.var_hi >= 0.0 ? spec.var_hi : bench.var_hi;
    if (!(var_lo >= 0.0) || !(var_hi > var_lo)) {
        throw InputError("run spec: requires 0 <= var_lo < var_hi");
    }
    if (bench.dim() > sobol_max_dimension()) {
        throw InputError("run spec: benchmark dimension exceeds the Sobol table");
    }
    for (const auto& [kern, name] :
         {std::pair{&spec.kernel_f, "kernel_f"}, std::pair{&spec.kernel_var, "kernel_var"}}) {
        if (kern->has_value()) {
            validate_kernel_spec(kern->value());
            if (kern->value().dim() != bench.dim()) {
                throw InputError(std::string("run spec: ") + name +
                                 " dimension does not match the benchmark");
            }
        } else if (spec.n_init < 2) {
            throw InputError(std::string("run spec: fitting ") + name +
                             " requires n_init >= 2");
        }
    }
}

RunResult run_rahbo(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed) {
    RunSpec s = spec;
    s.algorithm = Algorithm::Rahbo;
    return run_engine(s, bench, seed);
}

RunResult run_gp_ucb(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed) {
    RunSpec s = spec;
    s.algorithm = Algorithm::GpUcb;
    return run_engine(s, bench, seed);
}

RunResult run_rahbo_known(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed) {
    RunSpec s = spec;
    s.algorithm = Algorithm::RahboKnown;
    return run_engine(s, bench, seed);
}

RunResult run_rahbo_us(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed) {
    RunSpec s = spec;
    s.algorithm = Algorithm::RahboUs;
    return run_engine(s, bench, seed);
}

RunResult run_algorithm(const RunSpec& spec, const Benchmark& bench, std::uint64_t seed) {
    return run_engine(spec, bench, seed);
}

Eigen::Index report_index(const RunResult& result, const Benchmark& bench,
                          double alpha, ReportRule rule) {
    const int T = static_cast<int>(result.trace.size());
    if (T == 0) {
        throw InputError("report_index: empty visited set");
    }
    Eigen::VectorXd scores(T);
    switch (rule) {
        case ReportRule::BestObserved:
            for (int j = 0; j < T; ++j) {
                scores(j) = result.trace[static_cast<std::size_t>(j)].sample_mean;
            }
            break;
        case ReportRule::MaxEmpiricalMv:
            for (int j = 0; j < T; ++j) {
                const TraceRow& r = result.trace[static_cast<std::size_t>(j)];
                scores(j) = r.sample_mean - alpha * r.sample_var;
            }
            break;
        case ReportRule::LcbMvPerRound:
            for (int j = 0; j < T; ++j) {
                scores(j) = result.trace[static_cast<std::size_t>(j)].lcb_mv_at_selection;
            }
            break;
        case ReportRule::LcbMv: {
            Eigen::MatrixXd acq_unit(T, bench.dim());
            for (int j = 0; j < T; ++j) {
                acq_unit.row(j) =
                    to_unit(bench, result.trace[static_cast<std::size_t>(j)].x).transpose();
            }
            auto [am, av] = posterior_batch(result.final_gp, acq_unit);
            Eigen::VectorXd lcbf =
                (result.y_shift + result.y_scale * am.array()).matrix() -
                result.final_beta * result.y_scale * av.cwiseSqrt();
            Eigen::VectorXd ucbv(T);
            if (result.algorithm == Algorithm::RahboKnown) {
                for (int j = 0; j < T; ++j) {
                    ucbv(j) = bench.noise_var(result.trace[static_cast<std::size_t>(j)].x);
                }
            } else {
                auto [vl, vu] =
                    var_bounds_batch(result.final_var_model, acq_unit, result.final_beta_var);
                ucbv = vu;
            }
            scores = lcbf - alpha * ucbv;
            break;
        }
    }
    return argmax_index(scores);
}

Eigen::VectorXd report_point(const RunResult& result, const Benchmark& bench,
                             double alpha, ReportRule rule) {
    return result.trace[static_cast<std::size_t>(report_index(result, bench, alpha, rule))].x;
}

}  // namespace rahbo
