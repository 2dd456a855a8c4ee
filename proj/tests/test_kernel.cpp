#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rahbo/errors.hpp"
#include "rahbo/kernel.hpp"

using namespace rahbo;

namespace {

KernelSpec make_spec(KernelFamily family, int d, double lengthscale = 1.0,
                     double scale = 1.0) {
    KernelSpec spec;
    spec.family = family;
    spec.lengthscales = Eigen::VectorXd::Constant(d, lengthscale);
    spec.output_scale = scale;
    return spec;
}

Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            X(i, j) = u(rng);
        }
    }
    return X;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("squared exponential identities") {
    const KernelSpec spec = make_spec(KernelFamily::SquaredExponential, 1);
    Eigen::VectorXd x(1), y(1);
    x << 0.3;
    y << 0.3;
    CHECK(eval_kernel(spec, x, x) == 1.0);
    y << 1.3;  // |x - y| = 1
    CHECK(eval_kernel(spec, x, y) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-14));
}

TEST_CASE("matern52 zero distance and closed form") {
    const KernelSpec spec = make_spec(KernelFamily::Matern52, 2, 0.37);
    Eigen::VectorXd x(2), y(2);
    x << 0.1, 0.9;
    CHECK(eval_kernel(spec, x, x) == 1.0);
    y << 0.4, 0.2;
    const double r = std::sqrt(((x - y) / 0.37).squaredNorm());
    const double z = std::sqrt(5.0) * r;
    const double expected = (1.0 + z + 5.0 * r * r / 3.0) * std::exp(-z);
    CHECK(eval_kernel(spec, x, y) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("linear kernel normalization on the unit cube") {
    const KernelSpec spec = make_spec(KernelFamily::Linear, 2);
    Eigen::VectorXd x(2), y(2);
    x << 1.0, 1.0;
    y << 1.0, 1.0;
    CHECK(eval_kernel(spec, x, y) == doctest::Approx(1.0));
    y << 0.5, 0.0;
    CHECK(eval_kernel(spec, x, y) == doctest::Approx(0.25));
    // bounded by 1 for unit-cube inputs
    const Eigen::MatrixXd P = random_points(40, 2, 11);
    for (int i = 0; i < P.rows(); ++i) {
        for (int j = 0; j < P.rows(); ++j) {
            CHECK(eval_kernel(spec, P.row(i), P.row(j)) <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("symmetry over random pairs") {
    for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52,
                        KernelFamily::Linear}) {
        const KernelSpec spec = make_spec(family, 3, 0.7, 0.9);
        const Eigen::MatrixXd P = random_points(20, 3, 5);
        for (int i = 0; i < P.rows(); ++i) {
            for (int j = 0; j < P.rows(); ++j) {
                CHECK(eval_kernel(spec, P.row(i), P.row(j)) ==
                      eval_kernel(spec, P.row(j), P.row(i)));
            }
        }
    }
}

TEST_CASE("boundedness for stationary kernels with unit scale") {
    for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52}) {
        const KernelSpec spec = make_spec(family, 2, 0.4);
        const Eigen::MatrixXd P = random_points(30, 2, 9);
        for (int i = 0; i < P.rows(); ++i) {
            for (int j = 0; j < P.rows(); ++j) {
                const double v = eval_kernel(spec, P.row(i), P.row(j));
                CHECK(v > 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("kernel_matrix agrees with pairwise evaluation") {
    const KernelSpec spec = make_spec(KernelFamily::Matern52, 2, 0.5);
    const Eigen::MatrixXd X = random_points(5, 2, 3);
    const Eigen::MatrixXd K = kernel_matrix(spec, X);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            CHECK(K(i, j) ==
                  doctest::Approx(eval_kernel(spec, X.row(i), X.row(j))).epsilon(1e-12));
        }
    }
    CHECK(K == K.transpose());
}

TEST_CASE("kernel_matrix trivial cases") {
    const KernelSpec spec = make_spec(KernelFamily::SquaredExponential, 1);
    Eigen::MatrixXd X(1, 1);
    X << 0.77;
    const Eigen::MatrixXd K1 = kernel_matrix(spec, X);
    CHECK(K1(0, 0) == 1.0);

    Eigen::MatrixXd X2(2, 1);
    X2 << 0.77, 0.77;
    const Eigen::MatrixXd K2 = kernel_matrix(spec, X2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(K2(i, j) == 1.0);
        }
    }
}

TEST_CASE("kernel_vector matches scalar evaluations") {
    const KernelSpec spec = make_spec(KernelFamily::SquaredExponential, 3, 0.8);
    const Eigen::MatrixXd X = random_points(4, 3, 17);
    Eigen::VectorXd x(3);
    x << 0.2, 0.5, 0.9;
    const Eigen::VectorXd k = kernel_vector(spec, X, x);
    REQUIRE(k.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(k(i) == doctest::Approx(eval_kernel(spec, X.row(i), x)).epsilon(1e-12));
    }

    Eigen::MatrixXd X1(1, 3);
    X1.row(0) = x.transpose();
    CHECK(kernel_vector(spec, X1, x)(0) == 1.0);
    CHECK(kernel_vector(spec, Eigen::MatrixXd(0, 3), x).size() == 0);
}

TEST_CASE("kernel_cross agrees with pairwise evaluation") {
    for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52,
                        KernelFamily::Linear}) {
        const KernelSpec spec = make_spec(family, 2, 0.3, 1.4);
        const Eigen::MatrixXd X = random_points(6, 2, 21);
        const Eigen::MatrixXd Q = random_points(9, 2, 22);
        const Eigen::MatrixXd K = kernel_cross(spec, X, Q);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 9; ++j) {
                CHECK(K(i, j) ==
                      doctest::Approx(eval_kernel(spec, X.row(i), Q.row(j))).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("gram matrices are positive semidefinite up to jitter") {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> nd(2, 50);
    for (auto family : {KernelFamily::SquaredExponential, KernelFamily::Matern52,
                        KernelFamily::Linear}) {
        for (int rep = 0; rep < 5; ++rep) {
            const int n = nd(rng);
            const KernelSpec spec = make_spec(family, 2, 0.25);
            Eigen::MatrixXd X = random_points(n, 2, rng());
            if (n >= 2) {
                X.row(1) = X.row(0);  // duplicates stress the PSD edge
            }
            Eigen::MatrixXd K = kernel_matrix(spec, X);
            K.diagonal().array() += 1e-8;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
            CHECK(es.eigenvalues().minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("dimension mismatches and invalid specs are input errors") {
    const KernelSpec spec = make_spec(KernelFamily::Matern52, 2);
    Eigen::VectorXd x2(2), x3(3);
    x2 << 0.1, 0.2;
    x3 << 0.1, 0.2, 0.3;
    CHECK_THROWS_AS(eval_kernel(spec, x2, x3), InputError);
    CHECK_THROWS_AS(eval_kernel(spec, x3, x2), InputError);
    CHECK_THROWS_AS(kernel_matrix(spec, Eigen::MatrixXd::Zero(2, 3)), InputError);
    CHECK_THROWS_AS(kernel_vector(spec, Eigen::MatrixXd::Zero(2, 2), x3), InputError);

    KernelSpec bad = spec;
    bad.lengthscales(0) = 0.0;
    CHECK_THROWS_AS(validate_kernel_spec(bad), InputError);
    bad = spec;
    bad.output_scale = -1.0;
    CHECK_THROWS_AS(validate_kernel_spec(bad), InputError);
    bad = spec;
    bad.lengthscales.resize(0);
    CHECK_THROWS_AS(validate_kernel_spec(bad), InputError);
}

TEST_CASE("output_scale scales the kernel") {
    const KernelSpec spec = make_spec(KernelFamily::SquaredExponential, 1, 1.0, 2.5);
    Eigen::VectorXd x(1), y(1);
    x << 0.0;
    y << 1.0;
    CHECK(eval_kernel(spec, x, x) == doctest::Approx(2.5));
    CHECK(eval_kernel(spec, x, y) ==
          doctest::Approx(2.5 * 0.6065306597126334).epsilon(1e-14));
}

}  // TEST_SUITE
