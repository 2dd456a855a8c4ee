#include "rahbo/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rahbo/errors.hpp"
#include "rahbo/sobol.hpp"

namespace rahbo {
namespace {

constexpr double kPi = std::numbers::pi;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

bool Benchmark::contains(const Eigen::VectorXd& x) const {
    if (x.size() != lo.size()) {
        return false;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) < lo(i) || x(i) > hi(i)) {
            return false;
        }
    }
    return true;
}

Benchmark sine_benchmark() {
    Benchmark bench;
    bench.name = "sine";
    bench.lo = Eigen::VectorXd::Constant(1, 0.0);
    bench.hi = Eigen::VectorXd::Constant(1, 2.0);
    bench.objective = [](const Eigen::VectorXd& x) {
        return std::sin(2.0 * kPi * x(0));
    };
    bench.noise_var = [](const Eigen::VectorXd& x) {
        return 0.02 + 0.78 * sigmoid(20.0 * (x(0) - 1.0));
    };
    bench.analytic_optima = {Eigen::VectorXd::Constant(1, 0.25),
                             Eigen::VectorXd::Constant(1, 1.25)};
    bench.var_lo = 0.02;
    bench.var_hi = 0.8;
    return bench;
}

Benchmark branin_benchmark() {
    Benchmark bench;
    bench.name = "branin";
    bench.lo = vec2(-5.0, 0.0);
    bench.hi = vec2(10.0, 15.0);
    bench.objective = [](const Eigen::VectorXd& x) {
        const double a = 1.0;
        const double b = 5.1 / (4.0 * kPi * kPi);
        const double c = 5.0 / kPi;
        const double r = 6.0;
        const double s = 10.0;
        const double t = 1.0 / (8.0 * kPi);
        const double u = x(1) - b * x(0) * x(0) + c * x(0) - r;
        return -(a * u * u + s * (1.0 - t) * std::cos(x(0)) + s);
    };
    bench.noise_var = [](const Eigen::VectorXd& x) {
        return 0.05 + 1.5 * sigmoid(-1.5 * (x(0) - 2.5));
    };
    bench.analytic_optima = {vec2(-kPi, 12.275), vec2(kPi, 2.275),
                             vec2(9.42478, 2.475)};
    bench.var_lo = 0.05;
    bench.var_hi = 1.55;
    return bench;
}

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = {"sine", "branin"};
    return names;
}

Benchmark make_benchmark(const std::string& name) {
    if (name == "sine") {
        return sine_benchmark();
    }
    if (name == "branin") {
        return branin_benchmark();
    }
    throw InputError("unknown benchmark: '" + name + "'");
}

std::vector<double> sample_observation(const Benchmark& bench,
                                       const Eigen::VectorXd& x, int k,
                                       std::mt19937_64& rng) {
    if (k < 1) {
        throw InputError("sample_observation: k must be >= 1");
    }
    if (!bench.contains(x)) {
        throw InputError("sample_observation: point outside the benchmark domain");
    }
    const double mean = bench.objective(x);
    const double sd = std::sqrt(std::max(0.0, bench.noise_var(x)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> samples(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        samples[static_cast<std::size_t>(i)] = mean + sd * normal(rng);
    }
    return samples;
}

Eigen::MatrixXd sobol_design(const Benchmark& bench, int n, std::uint64_t seed) {
    return sobol_box(bench.lo, bench.hi, n, seed);
}

Eigen::MatrixXd dense_grid(const Benchmark& bench) {
    const int d = bench.dim();
    const double target = 1e4 * d;
    const int per_dim = std::max(2, static_cast<int>(
        std::ceil(std::pow(target, 1.0 / static_cast<double>(d)))));
    Eigen::Index total = 1;
    for (int j = 0; j < d; ++j) {
        total *= per_dim;
    }
    Eigen::MatrixXd grid(total, d);
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rem = idx;
        for (int j = 0; j < d; ++j) {
            const Eigen::Index cell = rem % per_dim;
            rem /= per_dim;
            grid(idx, j) = bench.lo(j) + (bench.hi(j) - bench.lo(j)) *
                           static_cast<double>(cell) / static_cast<double>(per_dim - 1);
        }
    }
    return grid;
}

double mv_optimum(const Benchmark& bench, double alpha) {
    if (alpha < 0.0) {
        throw InputError("mv_optimum: alpha must be >= 0");
    }
    double best = -std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd grid = dense_grid(bench);
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        const Eigen::VectorXd x = grid.row(i);
        best = std::max(best, bench.objective(x) - alpha * bench.noise_var(x));
    }
    for (const auto& x : bench.analytic_optima) {
        best = std::max(best, bench.objective(x) - alpha * bench.noise_var(x));
    }
    return best;
}

Eigen::VectorXd to_unit(const Benchmark& bench, const Eigen::VectorXd& x) {
    return ((x - bench.lo).array() / (bench.hi - bench.lo).array()).matrix();
}

Eigen::MatrixXd to_unit(const Benchmark& bench, const Eigen::MatrixXd& X) {
    Eigen::MatrixXd U = X;
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        U.col(j) = ((U.col(j).array() - bench.lo(j)) / (bench.hi(j) - bench.lo(j))).matrix();
    }
    return U;
}

Eigen::VectorXd from_unit(const Benchmark& bench, const Eigen::VectorXd& u) {
    return (bench.lo.array() + u.array() * (bench.hi - bench.lo).array()).matrix();
}

}  // namespace rahbo
