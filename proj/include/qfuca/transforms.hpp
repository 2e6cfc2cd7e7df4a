// SPDX-License-Identifier: Apache-2.0
//
// Per-level IDFTs and the nested modulation matrix
//
//     W_{k_N} = W_N * blkdiag_l(W_{N-1} Q_l Lambda_{N-1}),
//     W_n = F_{K_n} (x) I,   Lambda_n = I_{K_n} (x) W_{k_{n-1}},
//
// with unitary F_K(k, l) = exp(j 2 pi l k / K) / sqrt(K). Vectors are flat in
// the k_1-fastest order, so a level-n transform acts on fibres of stride
// prod_{i<n} K_i.

#pragma once

#include "qfuca/errors.hpp"
#include "qfuca/types.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace qfuca {

namespace detail {

inline void check_dims(const Dims& dims) {
    if (dims.empty()) throw ParameterError("dims must have at least one level");
    for (int k : dims)
        if (k < 1) throw ParameterError("cell counts must be positive");
}

inline std::size_t inner_size(const Dims& dims, int level) {
    std::size_t s = 1;
    for (int m = 0; m < level - 1; ++m) s *= static_cast<std::size_t>(dims[m]);
    return s;
}

}  // namespace detail

template <typename Scalar = double>
CMatrix<Scalar> idft_matrix(int K) {
    if (K < 1) throw ParameterError("IDFT order must be positive, got " + std::to_string(K));
    CMatrix<Scalar> F(K, K);
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(K));
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
            // reduce l*k mod K first so large orders keep full phase accuracy
            const Scalar phase = Scalar(2) * static_cast<Scalar>(kPi) * static_cast<Scalar>((static_cast<long long>(l) * k) % K) / K;
            F(k, l) = std::polar(scale, phase);
        }
    return F;
}

// W_n = F_{K_n} (x) I_{prod_{i<n} K_i}; 1 <= level <= dims.size().
template <typename Scalar = double>
CMatrix<Scalar> block_idft(int level, const Dims& dims) {
    detail::check_dims(dims);
    if (level < 1 || level > static_cast<int>(dims.size()))
        throw ParameterError("level " + std::to_string(level) + " outside [1, " + std::to_string(dims.size()) + "]");
    const auto F = idft_matrix<Scalar>(dims[level - 1]);
    const auto inner = static_cast<Eigen::Index>(detail::inner_size(dims, level));
    const Eigen::Index K = F.rows();
    CMatrix<Scalar> W = CMatrix<Scalar>::Zero(K * inner, K * inner);
    for (Eigen::Index a = 0; a < K; ++a)
        for (Eigen::Index b = 0; b < K; ++b) W.block(a * inner, b * inner, inner, inner).diagonal().setConstant(F(a, b));
    return W;
}

template <typename Scalar>
using RowMajorCMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

// In row-major storage the fibre of all columns is a K x (inner * C) matrix
// whose row k is the k-th row group, so a level transform is one product per fibre.
template <typename Scalar>
void level_dft_rows(RowMajorCMatrix<Scalar>& R, const Dims& dims, int level, bool adjoint);

}  // namespace detail

// Multiplies x (a vector or the columns of a matrix) in place by the level-n
// factor F_{K_n} (x) I, or by its adjoint.
template <typename Derived>
void apply_level_dft(Eigen::MatrixBase<Derived>& x, const Dims& dims, int level, bool adjoint = false) {
    using Cplx = typename Derived::Scalar;
    using Real = typename Cplx::value_type;
    const int K = dims[level - 1];
    if (K == 1) return;
    const auto inner = static_cast<Eigen::Index>(detail::inner_size(dims, level));
    const Eigen::Index fibre = inner * K;
    if (x.rows() % fibre != 0) throw ParameterError("vector length does not match dims");
    CMatrix<Real> F = idft_matrix<Real>(K);
    if (adjoint) F = F.conjugate().eval();  // F is symmetric, so F^H = conj(F)
    const Eigen::Index C = x.cols();
    if (C == 1) {
        CMatrix<Real> tmp(inner, K);
        for (Eigen::Index base = 0; base < x.rows(); base += fibre) {
            // the fibre, viewed as inner x K, times F^T = F
            Eigen::Map<CMatrix<Real>> view(&x.derived().coeffRef(base, 0), inner, K);
            tmp.noalias() = view * F;
            view = tmp;
        }
        return;
    }
    RowMajorCMatrix<Real> R = x;
    detail::level_dft_rows(R, dims, level, adjoint);
    x = R;
    static_assert(std::is_same_v<Cplx, std::complex<Real>>);
}

namespace detail {

// Up to this order a level is a direct row combination. Larger orders with
// only 2, 3, 5 as prime factors use the FFT, the rest a product with F.
inline constexpr int kDirectLevelMax = 8;

inline bool fft_friendly(int K) {
    if (K <= kDirectLevelMax) return false;
    for (int p : {2, 3, 5})
        while (K % p == 0) K /= p;
    return K == 1;
}

template <typename Scalar>
void level_dft_rows(RowMajorCMatrix<Scalar>& R, const Dims& dims, int level, bool adjoint) {
    const int K = dims[level - 1];
    if (K == 1) return;
    const auto inner = static_cast<Eigen::Index>(inner_size(dims, level));
    const Eigen::Index fibre = inner * K;
    if (R.rows() % fibre != 0) throw ParameterError("vector length does not match dims");
    CMatrix<Scalar> F = idft_matrix<Scalar>(K);
    if (adjoint) F = F.conjugate().eval();
    const Eigen::Index C = R.cols();
    const Eigen::Index L = inner * C;
    if (fft_friendly(K)) {
        // F x = ifft(x) / sqrt(K), F^H x = fft(x) / sqrt(K), one transform per column
        Eigen::FFT<Scalar> fft;
        fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
        const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(K));
        std::vector<std::complex<Scalar>> in(static_cast<std::size_t>(K)), out(in.size());
        for (Eigen::Index base = 0; base < R.rows(); base += fibre) {
            Eigen::Map<RowMajorCMatrix<Scalar>> view(R.data() + base * C, K, L);
            for (Eigen::Index j = 0; j < L; ++j) {
                for (Eigen::Index m = 0; m < K; ++m) in[static_cast<std::size_t>(m)] = view(m, j);
                if (adjoint)
                    fft.fwd(out, in);
                else
                    fft.inv(out, in);
                for (Eigen::Index m = 0; m < K; ++m) view(m, j) = scale * out[static_cast<std::size_t>(m)];
            }
        }
        return;
    }
    if (K > kDirectLevelMax) {
        RowMajorCMatrix<Scalar> tmp(K, L);
        for (Eigen::Index base = 0; base < R.rows(); base += fibre) {
            Eigen::Map<RowMajorCMatrix<Scalar>> view(R.data() + base * C, K, L);
            tmp.noalias() = F * view;
            view = tmp;
        }
        return;
    }
    // small K: a general product packs more than it computes, so combine rows
    // directly over short segments that stay in L1
    constexpr Eigen::Index seg = 256;
    RowMajorCMatrix<Scalar> tmp(K, seg);
    for (Eigen::Index base = 0; base < R.rows(); base += fibre) {
        Eigen::Map<RowMajorCMatrix<Scalar>> view(R.data() + base * C, K, L);
        for (Eigen::Index off = 0; off < L; off += seg) {
            const Eigen::Index w = std::min(seg, L - off);
            for (Eigen::Index k = 0; k < K; ++k) {
                auto t = tmp.row(k).head(w);
                t = F(k, 0) * view.row(0).segment(off, w);
                for (Eigen::Index m = 1; m < K; ++m) t += F(k, m) * view.row(m).segment(off, w);
            }
            view.middleCols(off, w) = tmp.leftCols(w);
        }
    }
}

// Block (a, b) of the result is F(a, b) * cols[b]; a single entry serves every b.
template <typename Scalar>
CMatrix<Scalar> scaled_blocks(const CMatrix<Scalar>& F, const std::vector<CMatrix<Scalar>>& cols) {
    const Eigen::Index K = F.rows(), B = cols.front().rows();
    CMatrix<Scalar> W(K * B, K * B);
    for (Eigen::Index b = 0; b < K; ++b)
        for (Eigen::Index a = 0; a < K; ++a) W.block(a * B, b * B, B, B) = F(a, b) * cols[cols.size() == 1 ? 0 : static_cast<std::size_t>(b)];
    return W;
}

}  // namespace detail

// W_{k_n} with identity precoding; nested_matrix(0) is the 1x1 identity.
template <typename Scalar = double>
CMatrix<Scalar> nested_matrix(int level, const Dims& dims) {
    detail::check_dims(dims);
    if (level < 0 || level > static_cast<int>(dims.size())) throw ParameterError("nested level out of range");
    // W_{k_n} = W_n Lambda_n = F_{K_n} (x) W_{k_{n-1}}, block by block
    CMatrix<Scalar> W = CMatrix<Scalar>::Identity(1, 1);
    for (int n = 1; n <= level; ++n) W = detail::scaled_blocks(idft_matrix<Scalar>(dims[n - 1]), {W});
    return W;
}

// Lambda_n = blkdiag of K_n copies of W_{k_{n-1}}.
template <typename Scalar = double>
CMatrix<Scalar> scalar_block(int level, const Dims& dims) {
    detail::check_dims(dims);
    if (level < 1 || level > static_cast<int>(dims.size())) throw ParameterError("scalar-block level out of range");
    const auto sub = nested_matrix<Scalar>(level - 1, dims);
    const Eigen::Index s = sub.rows();
    const int K = dims[level - 1];
    CMatrix<Scalar> L = CMatrix<Scalar>::Zero(s * K, s * K);
    for (int i = 0; i < K; ++i) L.block(i * s, i * s, s, s) = sub;
    return L;
}

template <typename Scalar = double>
class NestedModulation {
public:
    using Matrix = CMatrix<Scalar>;
    using Vector = CVector<Scalar>;

    explicit NestedModulation(Dims dims) : dims_(std::move(dims)) { detail::check_dims(dims_); }

    // One precoder per top-level block (K_N of them), each of order prod_{n<N} K_n.
    NestedModulation(Dims dims, std::vector<Matrix> precoders) : NestedModulation(std::move(dims)) {
        if (dims_.size() < 2) throw ParameterError("precoding needs at least two levels");
        if (precoders.size() == 1) precoders.assign(static_cast<std::size_t>(dims_.back()), precoders.front());
        if (precoders.size() != static_cast<std::size_t>(dims_.back()))
            throw ParameterError("expected " + std::to_string(dims_.back()) + " precoders, got " + std::to_string(precoders.size()));
        const auto B = static_cast<Eigen::Index>(block_size());
        for (const auto& q : precoders)
            if (q.rows() != B || q.cols() != B)
                throw ParameterError("precoder must be " + std::to_string(B) + "x" + std::to_string(B));
        precoders_ = std::move(precoders);
    }

    const Dims& dims() const { return dims_; }
    int levels() const { return static_cast<int>(dims_.size()); }
    std::size_t order() const { return product(dims_); }
    std::size_t block_size() const { return order() / static_cast<std::size_t>(dims_.back()); }
    bool has_precoders() const { return !precoders_.empty(); }
    const std::vector<Matrix>& precoders() const { return precoders_; }

    Matrix composed() const {
        const int N = levels();
        if (precoders_.empty()) return nested_matrix<Scalar>(N, dims_);
        // W_N blkdiag_l(W_{N-1} Q_l Lambda_{N-1}) built block by block
        const Matrix Wsub = nested_matrix<Scalar>(N - 2, dims_);
        const Eigen::Index s = Wsub.rows();
        const auto B = static_cast<Eigen::Index>(block_size());
        const Dims sub(dims_.begin(), dims_.end() - 1);
        std::vector<Matrix> G;
        for (const auto& Q : precoders_) {
            RowMajorCMatrix<Scalar> R(B, B);
            for (Eigen::Index j = 0; j < B / s; ++j) R.middleCols(j * s, s).noalias() = Q.middleCols(j * s, s) * Wsub;
            detail::level_dft_rows(R, sub, N - 1, false);
            G.emplace_back(R);
        }
        return detail::scaled_blocks(idft_matrix<Scalar>(dims_.back()), G);
    }

    Vector apply(const Vector& s) const {
        check_length(s.rows());
        return apply_structured(s);
    }

    // composed() * x level by level; x may be a vector or a matrix of columns.
    template <typename Derived>
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Derived::ColsAtCompileTime> apply_structured(
        const Eigen::MatrixBase<Derived>& x) const {
        return run(x, false);
    }

    // composed()^H * x.
    template <typename Derived>
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Derived::ColsAtCompileTime> apply_adjoint_structured(
        const Eigen::MatrixBase<Derived>& x) const {
        return run(x, true);
    }

private:
    void check_length(Eigen::Index rows) const {
        if (rows != static_cast<Eigen::Index>(order()))
            throw ParameterError("signal length " + std::to_string(rows) + " does not match modulation order " +
                                 std::to_string(order()));
    }

    template <typename Derived>
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Derived::ColsAtCompileTime> run(
        const Eigen::MatrixBase<Derived>& x, bool adjoint) const {
        check_length(x.rows());
        using Out = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Derived::ColsAtCompileTime>;
        if (x.cols() == 1) {
            Out y = x;
            steps(y, adjoint);
            return y;
        }
        RowMajorCMatrix<Scalar> R = x;  // one layout change for all levels
        steps(R, adjoint);
        return Out(R);
    }

    template <typename M>
    void level(M& y, int n, bool adjoint) const {
        if constexpr (std::is_same_v<M, RowMajorCMatrix<Scalar>>)
            detail::level_dft_rows(y, dims_, n, adjoint);
        else
            apply_level_dft(y, dims_, n, adjoint);
    }

    template <typename M>
    void steps(M& y, bool adjoint) const {
        const int N = levels();
        if (!adjoint) {
            for (int n = 1; n <= N - 2; ++n) level(y, n, false);
            if (N >= 2) apply_precoders(y, false);
            for (int n = std::max(N - 1, 1); n <= N; ++n) level(y, n, false);
        } else {
            for (int n = N; n >= std::max(N - 1, 1); --n) level(y, n, true);
            if (N >= 2) apply_precoders(y, true);
            for (int n = N - 2; n >= 1; --n) level(y, n, true);
        }
    }

    template <typename M>
    void apply_precoders(M& y, bool adjoint) const {
        if (precoders_.empty()) return;
        const auto B = static_cast<Eigen::Index>(block_size());
        for (std::size_t l = 0; l < precoders_.size(); ++l) {
            auto blk = y.middleRows(static_cast<Eigen::Index>(l) * B, B);
            if (adjoint)
                blk = precoders_[l].adjoint() * blk;
            else
                blk = precoders_[l] * blk;
        }
    }

    Dims dims_;
    std::vector<Matrix> precoders_;
};

}  // namespace qfuca
