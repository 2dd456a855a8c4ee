#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace rahbo {

// First n points of the d-dimensional Sobol sequence on [0,1)^d, skipping the
// all-zeros point so the sequence starts at the cube midpoint. seed != 0
// applies a seeded digital shift (XOR scramble) per dimension; seed == 0
// yields the unscrambled base sequence.
Eigen::MatrixXd sobol_unit(int n, int d, std::uint64_t seed);

// Sobol points mapped into the box [lo, hi] componentwise.
Eigen::MatrixXd sobol_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                          int n, std::uint64_t seed);

// Largest supported dimension of the built-in direction-number table.
int sobol_max_dimension();

}  // namespace rahbo
