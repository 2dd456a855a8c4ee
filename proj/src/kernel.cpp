#include "rahbo/kernel.hpp"

#include <cmath>

#include "rahbo/errors.hpp"

namespace rahbo {
namespace {

constexpr double kSqrt5 = 2.23606797749978969;

void check_dim(const KernelSpec& spec, const Eigen::VectorXd& x, const char* where) {
    if (x.size() != spec.lengthscales.size()) {
        throw InputError(std::string(where) + ": point dimension " +
                         std::to_string(x.size()) + " does not match kernel dimension " +
                         std::to_string(spec.lengthscales.size()));
    }
}

double stationary_from_sq_dist(KernelFamily family, double sq_dist) {
    switch (family) {
        case KernelFamily::SquaredExponential:
            return std::exp(-0.5 * sq_dist);
        case KernelFamily::Matern52: {
            const double r = std::sqrt(sq_dist);
            const double z = kSqrt5 * r;
            return (1.0 + z + 5.0 * sq_dist / 3.0) * std::exp(-z);
        }
        case KernelFamily::Linear:
            break;
    }
    throw InputError("stationary_from_sq_dist: not a stationary kernel");
}

}  // namespace

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::SquaredExponential: return "squared_exponential";
        case KernelFamily::Matern52: return "matern52";
        case KernelFamily::Linear: return "linear";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "squared_exponential" || name == "rbf") {
        return KernelFamily::SquaredExponential;
    }
    if (name == "matern52") {
        return KernelFamily::Matern52;
    }
    if (name == "linear") {
        return KernelFamily::Linear;
    }
    throw InputError("unknown kernel family: '" + name + "'");
}

void validate_kernel_spec(const KernelSpec& spec) {
    if (spec.lengthscales.size() == 0) {
        throw InputError("kernel spec: lengthscales must be non-empty");
    }
    for (Eigen::Index i = 0; i < spec.lengthscales.size(); ++i) {
        if (!(spec.lengthscales(i) > 0.0) || !std::isfinite(spec.lengthscales(i))) {
            throw InputError("kernel spec: lengthscales must be strictly positive");
        }
    }
    if (!(spec.output_scale > 0.0) || !std::isfinite(spec.output_scale)) {
        throw InputError("kernel spec: output_scale must be strictly positive");
    }
}

double eval_kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& x2) {
    check_dim(spec, x, "eval_kernel");
    check_dim(spec, x2, "eval_kernel");
    if (spec.family == KernelFamily::Linear) {
        const double denom = std::max(1.0, static_cast<double>(x.size()));
        return spec.output_scale * x.dot(x2) / denom;
    }
    double sq_dist = 0.0;
    for (Eigen::Index d = 0; d < x.size(); ++d) {
        const double delta = (x(d) - x2(d)) / spec.lengthscales(d);
        sq_dist += delta * delta;
    }
    return spec.output_scale * stationary_from_sq_dist(spec.family, sq_dist);
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows();
    if (n > 0 && X.cols() != spec.lengthscales.size()) {
        throw InputError("kernel_matrix: point dimension mismatch");
    }
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = eval_kernel(spec, X.row(i), X.row(j));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& x) {
    check_dim(spec, x, "kernel_vector");
    if (X.rows() > 0 && X.cols() != spec.lengthscales.size()) {
        throw InputError("kernel_vector: point dimension mismatch");
    }
    Eigen::VectorXd k(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        k(i) = eval_kernel(spec, X.row(i), x);
    }
    return k;
}

Eigen::MatrixXd kernel_cross(const KernelSpec& spec, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Q) {
    if ((X.rows() > 0 && X.cols() != spec.lengthscales.size()) ||
        (Q.rows() > 0 && Q.cols() != spec.lengthscales.size())) {
        throw InputError("kernel_cross: point dimension mismatch");
    }
    const Eigen::Index n = X.rows();
    const Eigen::Index m = Q.rows();
    if (n == 0 || m == 0) {
        return Eigen::MatrixXd(n, m);
    }
    if (spec.family == KernelFamily::Linear) {
        const double denom = std::max(1.0, static_cast<double>(X.cols()));
        return (spec.output_scale / denom) * (X * Q.transpose());
    }
    // ARD-scaled squared distances via the (a^2 + b^2 - 2ab) expansion.
    Eigen::MatrixXd Xs = X;
    Eigen::MatrixXd Qs = Q;
    for (Eigen::Index d = 0; d < X.cols(); ++d) {
        const double inv = 1.0 / spec.lengthscales(d);
        Xs.col(d) *= inv;
        Qs.col(d) *= inv;
    }
    const Eigen::VectorXd xn = Xs.rowwise().squaredNorm();
    const Eigen::VectorXd qn = Qs.rowwise().squaredNorm();
    Eigen::MatrixXd sq = xn.replicate(1, m) + qn.transpose().replicate(n, 1) -
                         2.0 * (Xs * Qs.transpose());
    sq = sq.cwiseMax(0.0);
    Eigen::MatrixXd K(n, m);
    if (spec.family == KernelFamily::SquaredExponential) {
        K = (spec.output_scale * (-0.5 * sq.array()).exp()).matrix();
    } else {
        Eigen::ArrayXXd r = sq.array().sqrt();
        Eigen::ArrayXXd z = kSqrt5 * r;
        K = (spec.output_scale * (1.0 + z + 5.0 / 3.0 * sq.array()) * (-z).exp()).matrix();
    }
    return K;
}

double kernel_diag(const KernelSpec& spec, const Eigen::VectorXd& x) {
    check_dim(spec, x, "kernel_diag");
    if (spec.family == KernelFamily::Linear) {
        const double denom = std::max(1.0, static_cast<double>(x.size()));
        return spec.output_scale * x.squaredNorm() / denom;
    }
    return spec.output_scale;
}

}  // namespace rahbo
