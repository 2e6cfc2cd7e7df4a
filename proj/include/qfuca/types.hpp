// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qfuca {

template <typename Scalar = double>
using Complex = std::complex<Scalar>;

template <typename Scalar = double>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar = double>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Point = Eigen::Vector2d;

// Per-level cell counts, innermost level first: dims[0] = K_1, dims[N-1] = K_N.
using Dims = std::vector<int>;

inline constexpr double kPi = std::numbers::pi;

inline std::size_t product(std::span<const int> dims) {
    std::size_t p = 1;
    for (int k : dims) p *= static_cast<std::size_t>(k);
    return p;
}

// Flat index of a logical tuple. idx[0] = k_1 varies fastest, idx[N-1] = k_N slowest,
// which matches the Kronecker order F_{K_N} (x) ... (x) F_{K_1}.
inline std::size_t flatten(std::span<const int> dims, std::span<const int> idx) {
    std::size_t flat = 0;
    for (std::size_t n = dims.size(); n-- > 0;) flat = flat * static_cast<std::size_t>(dims[n]) + static_cast<std::size_t>(idx[n]);
    return flat;
}

inline std::vector<int> unflatten(std::span<const int> dims, std::size_t flat) {
    std::vector<int> idx(dims.size());
    for (std::size_t n = 0; n < dims.size(); ++n) {
        idx[n] = static_cast<int>(flat % static_cast<std::size_t>(dims[n]));
        flat /= static_cast<std::size_t>(dims[n]);
    }
    return idx;
}

}  // namespace qfuca
