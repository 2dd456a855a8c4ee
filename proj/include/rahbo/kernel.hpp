#pragma once

#include <string>

#include <Eigen/Dense>

namespace rahbo {

enum class KernelFamily { SquaredExponential, Matern52, Linear };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Stationary kernels are normalized so that kappa(x,x) = output_scale; with
// the default output_scale = 1 the kernel is bounded by 1, matching the
// normalization the confidence-bound theory assumes. The linear kernel is
// <x,x'>/max(1,d) so the same bound holds on the unit cube (lengthscales are
// used for dimension checking only).
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern52;
    Eigen::VectorXd lengthscales;  // one per input dimension (ARD), > 0
    double output_scale = 1.0;

    int dim() const { return static_cast<int>(lengthscales.size()); }
};

// Throws InputError if lengthscales are empty/non-positive or the scale is
// non-positive.
void validate_kernel_spec(const KernelSpec& spec);

double eval_kernel(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& x2);

// n x n Gram matrix over the rows of X; exactly symmetric by construction.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X);

// [kappa(X_1,x), ..., kappa(X_n,x)]
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& x);

// n x m cross matrix kappa(X_i, Q_j); batched path used by acquisition.
Eigen::MatrixXd kernel_cross(const KernelSpec& spec, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Q);

// kappa(x,x)
double kernel_diag(const KernelSpec& spec, const Eigen::VectorXd& x);

}  // namespace rahbo
