#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rahbo {

// Synthetic objective with a heteroscedastic Gaussian noise oracle.
// Immutable; samplers take an explicit RNG stream.
struct Benchmark {
    std::string name;
    Eigen::VectorXd lo, hi;  // domain box
    std::function<double(const Eigen::VectorXd&)> objective;  // true mean f
    std::function<double(const Eigen::VectorXd&)> noise_var;  // true rho^2
    std::vector<Eigen::VectorXd> analytic_optima;
    double var_lo = 0.0;  // bounds on noise_var over the domain
    double var_hi = 1.0;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& x) const;
};

// sin(2*pi*x) on [0,2] with a sigmoid noise-variance profile: quiet (~0.02)
// on [0,1], loud (~0.8) on (1,2]. Two global maxima, x=0.25 and x=1.25.
Benchmark sine_benchmark();

// Negated Branin on [-5,10]x[0,15]; three global maxima of value ~-0.3979
// whose noise levels are ordered A > B > C by a sigmoid in x1.
Benchmark branin_benchmark();

const std::vector<std::string>& benchmark_names();
Benchmark make_benchmark(const std::string& name);

// k i.i.d. draws y_i = f(x) + N(0, rho^2(x)). Throws InputError when x is
// outside the domain or k < 1.
std::vector<double> sample_observation(const Benchmark& bench,
                                       const Eigen::VectorXd& x, int k,
                                       std::mt19937_64& rng);

// First n scrambled-Sobol points mapped into the benchmark box; seed == 0
// gives the unscrambled base sequence.
Eigen::MatrixXd sobol_design(const Benchmark& bench, int n, std::uint64_t seed);

// Regular lattice over the domain with roughly 10^4 * d points total,
// used as the exhaustive reference for the MV optimum.
Eigen::MatrixXd dense_grid(const Benchmark& bench);

// max over (dense grid  U  analytic optima) of f(x) - alpha*rho^2(x).
double mv_optimum(const Benchmark& bench, double alpha);

// Affine map between the domain box and the unit cube (GPs operate on
// normalized inputs).
Eigen::VectorXd to_unit(const Benchmark& bench, const Eigen::VectorXd& x);
Eigen::MatrixXd to_unit(const Benchmark& bench, const Eigen::MatrixXd& X);
Eigen::VectorXd from_unit(const Benchmark& bench, const Eigen::VectorXd& u);

}  // namespace rahbo
