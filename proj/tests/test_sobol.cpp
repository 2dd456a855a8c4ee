#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "rahbo/errors.hpp"
#include "rahbo/sobol.hpp"

using namespace rahbo;

namespace {

// Star-discrepancy proxy over origin-anchored boxes with corners at the
// sample coordinates; the same estimator is applied to both point sets.
double discrepancy_proxy(const Eigen::MatrixXd& P) {
    const int n = static_cast<int>(P.rows());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double bx = P(i, 0), by = P(j, 1);
            int count = 0;
            for (int p = 0; p < n; ++p) {
                if (P(p, 0) <= bx && P(p, 1) <= by) {
                    ++count;
                }
            }
            worst = std::max(worst, std::abs(double(count) / n - bx * by));
        }
    }
    return worst;
}

}  // namespace

TEST_SUITE("sobol") {

TEST_CASE("first point is the cube midpoint") {
    for (int d : {1, 2, 4, 8}) {
        const Eigen::MatrixXd P = sobol_unit(1, d, 0);
        for (int j = 0; j < d; ++j) {
            CHECK(P(0, j) == 0.5);
        }
    }
}

TEST_CASE("base sequence matches the standard construction (2-D)") {
    const Eigen::MatrixXd P = sobol_unit(4, 2, 0);
    const double expected[4][2] = {
        {0.5, 0.5}, {0.75, 0.25}, {0.25, 0.75}, {0.375, 0.375}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(P(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
        }
    }
}

TEST_CASE("points stay inside the unit cube") {
    for (std::uint64_t seed : {0ULL, 7ULL, 123ULL}) {
        const Eigen::MatrixXd P = sobol_unit(257, 3, seed);
        CHECK(P.minCoeff() >= 0.0);
        CHECK(P.maxCoeff() < 1.0);
    }
}

TEST_CASE("deterministic per seed, different across seeds") {
    const Eigen::MatrixXd A = sobol_unit(32, 2, 42);
    const Eigen::MatrixXd B = sobol_unit(32, 2, 42);
    const Eigen::MatrixXd C = sobol_unit(32, 2, 43);
    CHECK(A == B);
    CHECK((A - C).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("lower discrepancy than iid uniform in median over seeds") {
    std::vector<double> sobol_d, unif_d;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        sobol_d.push_back(discrepancy_proxy(sobol_unit(64, 2, seed)));
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Eigen::MatrixXd U(64, 2);
        for (int i = 0; i < 64; ++i) {
            U(i, 0) = u(rng);
            U(i, 1) = u(rng);
        }
        unif_d.push_back(discrepancy_proxy(U));
    }
    std::sort(sobol_d.begin(), sobol_d.end());
    std::sort(unif_d.begin(), unif_d.end());
    CHECK(sobol_d[10] < unif_d[10]);
}

TEST_CASE("box mapping and input validation") {
    Eigen::VectorXd lo(2), hi(2);
    lo << -5.0, 0.0;
    hi << 10.0, 15.0;
    const Eigen::MatrixXd P = sobol_box(lo, hi, 16, 0);
    CHECK(P(0, 0) == doctest::Approx(2.5));
    CHECK(P(0, 1) == doctest::Approx(7.5));
    for (int i = 0; i < P.rows(); ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(P(i, j) >= lo(j));
            CHECK(P(i, j) < hi(j));
        }
    }
    CHECK_THROWS_AS(sobol_unit(4, 0, 0), InputError);
    CHECK_THROWS_AS(sobol_unit(4, sobol_max_dimension() + 1, 0), InputError);
    CHECK_THROWS_AS(sobol_unit(-1, 2, 0), InputError);
}

}  // TEST_SUITE
