#include "rahbo/sobol.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "rahbo/errors.hpp"
#include "rahbo/rng.hpp"

namespace rahbo {
namespace {

constexpr int kBits = 32;

// Primitive polynomial degree, coefficient word, and initial direction
// numbers for dimensions 2..16 (dimension 1 is the van der Corput radical
// inverse and needs no table entry). Values are the classic Joe-Kuo set.
struct DimInit {
    int s;
    std::uint32_t a;
    std::array<std::uint32_t, 6> m;
};

constexpr std::array<DimInit, 15> kDimInit = {{
    {1, 0, {1, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

// Direction integers for one dimension, v[c] scaled by 2^(32-c-1).
std::array<std::uint32_t, kBits> direction_numbers(int dim_index) {
    std::array<std::uint32_t, kBits> v{};
    if (dim_index == 0) {
        for (int c = 0; c < kBits; ++c) {
            v[c] = 1u << (kBits - 1 - c);
        }
        return v;
    }
    const DimInit& init = kDimInit[static_cast<std::size_t>(dim_index - 1)];
    const int s = init.s;
    for (int c = 0; c < s; ++c) {
        v[c] = init.m[static_cast<std::size_t>(c)] << (kBits - 1 - c);
    }
    for (int c = s; c < kBits; ++c) {
        std::uint32_t value = v[c - s] ^ (v[c - s] >> s);
        for (int z = 1; z < s; ++z) {
            if ((init.a >> (s - 1 - z)) & 1u) {
                value ^= v[c - z];
            }
        }
        v[c] = value;
    }
    return v;
}

}  // namespace

int sobol_max_dimension() {
    return static_cast<int>(kDimInit.size()) + 1;
}

Eigen::MatrixXd sobol_unit(int n, int d, std::uint64_t seed) {
    if (n < 0) {
        throw InputError("sobol_unit: n must be nonnegative");
    }
    if (d < 1 || d > sobol_max_dimension()) {
        throw InputError("sobol_unit: dimension out of supported range [1, " +
                         std::to_string(sobol_max_dimension()) + "]");
    }

    std::vector<std::array<std::uint32_t, kBits>> v;
    v.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        v.push_back(direction_numbers(j));
    }

    std::vector<std::uint32_t> shift(static_cast<std::size_t>(d), 0u);
    if (seed != 0) {
        auto rng = make_stream({seed, stream_tag::kSobolScramble});
        for (int j = 0; j < d; ++j) {
            shift[static_cast<std::size_t>(j)] =
                static_cast<std::uint32_t>(rng() >> 32);
        }
    }

    Eigen::MatrixXd points(n, d);
    std::vector<std::uint32_t> state(static_cast<std::size_t>(d), 0u);
    constexpr double scale = 1.0 / 4294967296.0;  // 2^-32
    // Gray-code stepping over Sobol indices 1..n; index 0 (the origin) is
    // skipped so the first emitted point is the cube midpoint.
    for (int i = 0; i < n; ++i) {
        const int c = std::countr_zero(static_cast<std::uint32_t>(i + 1));
        for (int j = 0; j < d; ++j) {
            state[static_cast<std::size_t>(j)] ^=
                v[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
            const std::uint32_t scrambled =
                state[static_cast<std::size_t>(j)] ^ shift[static_cast<std::size_t>(j)];
            points(i, j) = static_cast<double>(scrambled) * scale;
        }
    }
    return points;
}

Eigen::MatrixXd sobol_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                          int n, std::uint64_t seed) {
    if (lo.size() != hi.size()) {
        throw InputError("sobol_box: lo/hi dimension mismatch");
    }
    const int d = static_cast<int>(lo.size());
    Eigen::MatrixXd u = sobol_unit(n, d, seed);
    for (int j = 0; j < d; ++j) {
        u.col(j) = (lo(j) + u.col(j).array() * (hi(j) - lo(j))).matrix();
    }
    return u;
}

}  // namespace rahbo
