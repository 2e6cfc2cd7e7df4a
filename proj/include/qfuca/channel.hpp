// SPDX-License-Identifier: Apache-2.0
//
// Free-space line-of-sight channel between two identical, coaxial, parallel
// QF-UCAs. Rows are receive logical indices, columns transmit logical
// indices, both flat in the k_1-fastest order.

#pragma once

#include "qfuca/errors.hpp"
#include "qfuca/geometry.hpp"
#include "qfuca/transforms.hpp"
#include "qfuca/types.hpp"

#include <vector>

namespace qfuca {

inline constexpr double kSpeedOfLight = 299792458.0;

struct ChannelParams {
    double wavelength = kSpeedOfLight / 5.8e9;  // meters
    double beta = 1.0;
    double distance = 100.0;  // axial separation D, meters

    static ChannelParams from_frequency(double frequency_hz, double beta = 1.0, double distance = 100.0);
    void validate() const;
};

enum class DistanceMode { exact, approx };

double exact_distance(const Point& tx, const Point& rx, double D);

// First-order expansion in 1/D, cross terms with the signs as commonly printed
// (all positive). Exact to O(R^4/D^3) for single-level arrays only.
double approx_distance(const DimensionSpec& spec, std::span<const int> idx_t, std::span<const int> idx_r, double D);

Complex<> element_gain(double d, const ChannelParams& params);

template <typename Scalar = double>
struct ChannelMatrix {
    CMatrix<Scalar> values;
    Dims dims;
};

ChannelMatrix<> assemble_H(const DimensionSpec& spec, const ChannelParams& params,
                           DistanceMode mode = DistanceMode::exact);

// Average of H over simultaneous cyclic shifts of the level-n receive and
// transmit indices: the nearest matrix that commutes with the level-n shift.
template <typename Scalar>
CMatrix<Scalar> nearest_level_circulant(const CMatrix<Scalar>& H, const Dims& dims, int level) {
    if (H.rows() != H.cols()) throw ParameterError("circulant projection needs a square matrix");
    if (H.rows() != static_cast<Eigen::Index>(product(dims))) throw ParameterError("matrix order does not match dims");
    if (level < 1 || level > static_cast<int>(dims.size())) throw ParameterError("level out of range");
    const int K = dims[level - 1];
    const auto stride = static_cast<Eigen::Index>(detail::inner_size(dims, level));
    const Eigen::Index M = H.rows();
    auto shift = [&](Eigen::Index i, int t) {
        const Eigen::Index digit = (i / stride) % K;
        return i + (((digit + t) % K) - digit) * stride;
    };
    CMatrix<Scalar> avg = CMatrix<Scalar>::Zero(M, M);
    for (int t = 0; t < K; ++t)
        for (Eigen::Index c = 0; c < M; ++c) {
            const Eigen::Index cs = shift(c, t);
            for (Eigen::Index r = 0; r < M; ++r) avg(r, c) += H(shift(r, t), cs);
        }
    avg /= static_cast<Scalar>(K);
    return avg;
}

template <typename Scalar>
Scalar circulant_deviation(const CMatrix<Scalar>& H, const Dims& dims, int level) {
    const Scalar norm = H.norm();
    if (norm == Scalar(0)) return Scalar(0);
    return (H - nearest_level_circulant(H, dims, level)).norm() / norm;
}

template <typename Scalar = double>
struct BlockDiagonalization {
    std::vector<CMatrix<Scalar>> blocks;  // K_N diagonal blocks of W_N^H H W_N
    Scalar leakage = 0;                   // relative Frobenius norm of the off-diagonal blocks
};

namespace detail {

template <typename Scalar>
BlockDiagonalization<Scalar> split_blocks(const CMatrix<Scalar>& G, int top_cells) {
    BlockDiagonalization<Scalar> out;
    const Eigen::Index B = G.rows() / top_cells;
    Scalar off2 = 0;
    for (int a = 0; a < top_cells; ++a)
        for (int b = 0; b < top_cells; ++b) {
            if (a == b)
                out.blocks.push_back(G.block(a * B, a * B, B, B));
            else
                off2 += G.block(a * B, b * B, B, B).squaredNorm();
        }
    const Scalar total2 = G.squaredNorm();
    out.leakage = total2 > 0 ? std::sqrt(off2 / total2) : Scalar(0);
    return out;
}

}  // namespace detail

// W_N^H H W_N with the level-N transform applied in structured form.
template <typename Scalar>
BlockDiagonalization<Scalar> block_diagonalize(const CMatrix<Scalar>& H, const Dims& dims) {
    if (H.rows() != H.cols()) throw ParameterError("block diagonalization needs a square matrix");
    if (H.rows() != static_cast<Eigen::Index>(product(dims)))
        throw ParameterError("channel order " + std::to_string(H.rows()) + " does not match dims");
    const int N = static_cast<int>(dims.size());
    CMatrix<Scalar> Y = H;
    apply_level_dft(Y, dims, N, true);  // W_N^H H
    CMatrix<Scalar> Z = Y.transpose();
    apply_level_dft(Z, dims, N);  // W_N^T (W_N^H H)^T, and W_N is symmetric
    return detail::split_blocks<Scalar>(Z.transpose(), dims.back());
}

template <typename Scalar>
BlockDiagonalization<Scalar> block_diagonalize(const ChannelMatrix<Scalar>& H) {
    return block_diagonalize(H.values, H.dims);
}

// Same quantity from an explicit dense W_N.
template <typename Scalar>
BlockDiagonalization<Scalar> block_diagonalize_dense(const CMatrix<Scalar>& H, const CMatrix<Scalar>& W, int top_cells) {
    if (H.rows() != H.cols() || W.rows() != H.rows() || W.cols() != H.cols())
        throw ParameterError("block diagonalization: order mismatch");
    if (top_cells < 1 || H.rows() % top_cells != 0) throw ParameterError("top-level cell count does not divide the order");
    const CMatrix<Scalar> G = W.adjoint() * H * W;
    return detail::split_blocks<Scalar>(G, top_cells);
}

}  // namespace qfuca
