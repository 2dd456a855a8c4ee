#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "rahbo/algorithms.hpp"
#include "rahbo/benchmarks.hpp"
#include "rahbo/config.hpp"
#include "rahbo/errors.hpp"
#include "rahbo/experiment.hpp"
#include "rahbo/metrics.hpp"
#include "rahbo/rng.hpp"
#include "rahbo/sobol.hpp"

namespace py = pybind11;
using namespace rahbo;

namespace {

KernelSpec make_kernel_spec(const std::string& family,
                            const Eigen::VectorXd& lengthscales,
                            double output_scale) {
    KernelSpec spec;
    spec.family = kernel_family_from_string(family);
    spec.lengthscales = lengthscales;
    spec.output_scale = output_scale;
    validate_kernel_spec(spec);
    return spec;
}

BetaSchedule make_schedule(const std::string& mode, double fixed_value,
                           double delta, double rkhs_bound, double lambda) {
    BetaSchedule s;
    if (mode == "fixed") {
        s.mode = BetaSchedule::Mode::Fixed;
    } else if (mode == "theoretical") {
        s.mode = BetaSchedule::Mode::Theoretical;
    } else {
        throw InputError("mode must be 'fixed' or 'theoretical'");
    }
    s.fixed_value = fixed_value;
    s.delta = delta;
    s.rkhs_bound = rkhs_bound;
    s.lambda = lambda;
    return s;
}

RunSpec run_spec_from_kwargs(const std::string& algorithm, double alpha, int k,
                             int T, int n_init, int n_us,
                             const BetaSchedule& beta, const BetaSchedule& beta_var,
                             std::optional<KernelSpec> kernel_f,
                             std::optional<KernelSpec> kernel_var,
                             int candidate_grid, double lambda, double var_lo,
                             double var_hi, int hyperfit_budget,
                             const std::string& report_rule) {
    RunSpec spec;
    spec.algorithm = algorithm_from_string(algorithm);
    spec.alpha = alpha;
    spec.k = k;
    spec.T = T;
    spec.n_init = n_init;
    spec.n_us = n_us;
    spec.beta = beta;
    spec.beta_var = beta_var;
    spec.kernel_f = std::move(kernel_f);
    spec.kernel_var = std::move(kernel_var);
    spec.candidate_grid = candidate_grid;
    spec.lambda = lambda;
    spec.var_lo = var_lo;
    spec.var_hi = var_hi;
    spec.hyperfit_budget = hyperfit_budget;
    spec.report_rule = report_rule_from_string(report_rule);
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Risk-averse heteroscedastic Bayesian optimization core";
    m.attr("__version__") = RAHBO_VERSION;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def(py::init(&make_kernel_spec), py::arg("family"),
             py::arg("lengthscales"), py::arg("output_scale") = 1.0)
        .def_property_readonly("family",
                               [](const KernelSpec& s) { return to_string(s.family); })
        .def_readonly("lengthscales", &KernelSpec::lengthscales)
        .def_readonly("output_scale", &KernelSpec::output_scale)
        .def("__repr__", [](const KernelSpec& s) {
            return "KernelSpec(" + to_string(s.family) + ", dim=" +
                   std::to_string(s.dim()) + ")";
        });

    m.def("eval_kernel", &eval_kernel, py::arg("spec"), py::arg("x"), py::arg("y"));
    m.def("kernel_matrix", &kernel_matrix, py::arg("spec"), py::arg("X"));
    m.def("kernel_vector", &kernel_vector, py::arg("spec"), py::arg("X"), py::arg("x"));

    py::class_<BetaSchedule>(m, "BetaSchedule")
        .def(py::init(&make_schedule), py::arg("mode") = "fixed",
             py::arg("fixed_value") = 2.0, py::arg("delta") = 0.05,
             py::arg("rkhs_bound") = 1.0, py::arg("lambda_") = 1.0);

    py::class_<HeteroGPState>(m, "HeteroGP")
        .def(py::init([](const KernelSpec& spec, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& noise,
                         double lambda) { return fit(spec, X, y, noise, lambda); }),
             py::arg("kernel"), py::arg("X"), py::arg("y"), py::arg("noise_diag"),
             py::arg("lambda_") = 1.0)
        .def("posterior_mean", &posterior_mean, py::arg("x"))
        .def("posterior_var", &posterior_var, py::arg("x"))
        .def("posterior_batch", &posterior_batch, py::arg("X"))
        .def("log_marginal_likelihood",
             [](const HeteroGPState& s) { return log_marginal_likelihood(s); })
        .def("beta", &beta_multiplier, py::arg("schedule"))
        .def_property_readonly("n", &HeteroGPState::n);

    m.def("fit_hyperparameters",
          [](const std::string& family, const Eigen::MatrixXd& X,
             const Eigen::VectorXd& y, const Eigen::VectorXd& noise, int budget,
             std::uint64_t seed, double lambda) {
              return fit_hyperparameters(kernel_family_from_string(family), X, y,
                                         noise, budget, seed, lambda);
          },
          py::arg("family"), py::arg("X"), py::arg("y"), py::arg("noise_diag"),
          py::arg("budget"), py::arg("seed"), py::arg("lambda_") = 1.0);

    m.def("sample_stats",
          [](const std::vector<double>& samples) { return sample_stats(samples); },
          py::arg("samples"));
    m.def("eta_variance_proxy", &eta_variance_proxy, py::arg("var_hi"), py::arg("k"));

    py::class_<Benchmark>(m, "Benchmark")
        .def(py::init(&make_benchmark), py::arg("name"))
        .def_readonly("name", &Benchmark::name)
        .def_readonly("lo", &Benchmark::lo)
        .def_readonly("hi", &Benchmark::hi)
        .def_readonly("var_lo", &Benchmark::var_lo)
        .def_readonly("var_hi", &Benchmark::var_hi)
        .def_readonly("analytic_optima", &Benchmark::analytic_optima)
        .def_property_readonly("dim", &Benchmark::dim)
        .def("objective", [](const Benchmark& b, const Eigen::VectorXd& x) {
            return b.objective(x);
        })
        .def("noise_var", [](const Benchmark& b, const Eigen::VectorXd& x) {
            return b.noise_var(x);
        })
        .def("contains", &Benchmark::contains)
        .def("mv_optimum", [](const Benchmark& b, double alpha) {
            return mv_optimum(b, alpha);
        })
        .def("sample",
             [](const Benchmark& b, const Eigen::VectorXd& x, int k,
                std::uint64_t seed) {
                 auto rng = make_stream({seed});
                 return sample_observation(b, x, k, rng);
             },
             py::arg("x"), py::arg("k"), py::arg("seed"));

    m.def("benchmark_names", [] { return benchmark_names(); });
    m.def("sobol_design",
          [](const Benchmark& b, int n, std::uint64_t seed) {
              return sobol_design(b, n, seed);
          },
          py::arg("benchmark"), py::arg("n"), py::arg("seed") = 0);
    m.def("sobol_unit", &sobol_unit, py::arg("n"), py::arg("d"), py::arg("seed") = 0);

    m.def("mv_value", &mv_value, py::arg("benchmark"), py::arg("alpha"), py::arg("x"));
    m.def("simple_regret",
          py::overload_cast<const Benchmark&, double, const Eigen::VectorXd&>(
              &simple_regret),
          py::arg("benchmark"), py::arg("alpha"), py::arg("x"));
    m.def("info_gain_step", &info_gain_step, py::arg("sigma_prev_sq"),
          py::arg("noise_var"));

    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("round", &TraceRow::round)
        .def_readonly("x", &TraceRow::x)
        .def_readonly("sample_mean", &TraceRow::sample_mean)
        .def_readonly("sample_var", &TraceRow::sample_var)
        .def_readonly("mv_true", &TraceRow::mv_true)
        .def_readonly("r_inst", &TraceRow::r_inst)
        .def_readonly("r_cum", &TraceRow::r_cum)
        .def_readonly("r_cum_per_sample", &TraceRow::r_cum_per_sample)
        .def_readonly("info_gain_f", &TraceRow::info_gain_f)
        .def_readonly("info_gain_var", &TraceRow::info_gain_var)
        .def_readonly("beta_used", &TraceRow::beta_used)
        .def_readonly("beta_var_used", &TraceRow::beta_var_used)
        .def_readonly("candidate_index", &TraceRow::candidate_index)
        .def_readonly("f_true", &TraceRow::f_true)
        .def_readonly("rho_true", &TraceRow::rho_true);

    py::class_<RunResult>(m, "RunResult")
        .def_property_readonly("algorithm",
                               [](const RunResult& r) { return to_string(r.algorithm); })
        .def_readonly("trace", &RunResult::trace)
        .def_readonly("reported_point", &RunResult::reported_point)
        .def_readonly("seed", &RunResult::seed)
        .def_readonly("mv_reference", &RunResult::mv_reference)
        .def_readonly("sampler_calls", &RunResult::sampler_calls)
        .def("reported_by_rule", [](const RunResult& r, const std::string& rule) {
            return r.reported_by_rule[static_cast<std::size_t>(
                report_rule_from_string(rule))];
        });

    m.def("run",
          [](const std::string& benchmark, const std::string& algorithm,
             std::uint64_t seed, double alpha, int k, int T, int n_init, int n_us,
             const BetaSchedule& beta, const BetaSchedule& beta_var,
             std::optional<KernelSpec> kernel_f, std::optional<KernelSpec> kernel_var,
             int candidate_grid, double lambda, double var_lo, double var_hi,
             int hyperfit_budget, const std::string& report_rule) {
              const Benchmark bench = make_benchmark(benchmark);
              const RunSpec spec = run_spec_from_kwargs(
                  algorithm, alpha, k, T, n_init, n_us, beta, beta_var,
                  std::move(kernel_f), std::move(kernel_var), candidate_grid,
                  lambda, var_lo, var_hi, hyperfit_budget, report_rule);
              return run_algorithm(spec, bench, seed);
          },
          py::arg("benchmark"), py::arg("algorithm"), py::arg("seed"),
          py::arg("alpha") = 1.0, py::arg("k") = 10, py::arg("T") = 60,
          py::arg("n_init") = 10, py::arg("n_us") = 10,
          py::arg("beta") = BetaSchedule{}, py::arg("beta_var") = BetaSchedule{},
          py::arg("kernel_f") = std::nullopt, py::arg("kernel_var") = std::nullopt,
          py::arg("candidate_grid") = 0, py::arg("lambda_") = 1.0,
          py::arg("var_lo") = -1.0, py::arg("var_hi") = -1.0,
          py::arg("hyperfit_budget") = 60, py::arg("report_rule") = "lcb_mv",
          "Run one seeded optimization loop and return its trace.");

    m.def("report_point",
          [](const RunResult& result, const std::string& benchmark, double alpha,
             const std::string& rule) {
              return report_point(result, make_benchmark(benchmark), alpha,
                                  report_rule_from_string(rule));
          },
          py::arg("result"), py::arg("benchmark"), py::arg("alpha"),
          py::arg("rule") = "lcb_mv");

    m.def("validate_config",
          [](const std::string& text) {
              return validate_config(nlohmann::json::parse(text));
          },
          py::arg("json_text"),
          "Validate a JSON config; returns the list of violations (empty == valid).");

    m.def("run_experiment",
          [](const std::string& text, int threads) {
              const ExperimentConfig config =
                  config_from_json(nlohmann::json::parse(text));
              const auto artifacts = run_experiment(config, threads);
              return py::make_tuple(artifacts.out_dir.string(), artifacts.hash);
          },
          py::arg("json_text"), py::arg("threads") = 1,
          "Run a full experiment config; returns (output_dir, config_hash).");
}
