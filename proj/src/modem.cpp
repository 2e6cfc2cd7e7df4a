// SPDX-License-Identifier: Apache-2.0
#include "qfuca/modem.hpp"

#include "qfuca/assignment.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace qfuca {

std::size_t PrecodingSet::live_count() const {
    std::size_t n = 0;
    for (char c : live) n += c ? 1 : 0;
    return n;
}

std::vector<CMatrix<>> PrecodingSet::precoders() const {
    std::vector<CMatrix<>> q;
    q.reserve(blocks.size());
    for (const auto& b : blocks) q.push_back(b.Q);
    return q;
}

NestedModulation<> PrecodingSet::modulation() const {
    if (dims.size() < 2) return NestedModulation<>(dims);
    return NestedModulation<>(dims, precoders());
}

namespace {

// A^H X A for A = W_{N-1} acting on a top-level block.
CMatrix<> reduce_block(const CMatrix<>& Hl, const Dims& sub) {
    if (sub.empty()) return Hl;
    const int level = static_cast<int>(sub.size());
    CMatrix<> Y = Hl;
    apply_level_dft(Y, sub, level, true);
    CMatrix<> Z = Y.transpose();
    apply_level_dft(Z, sub, level);
    return Z.transpose();
}

BlockFactor factor_block(CMatrix<> reduced) {
    const Eigen::Index B = reduced.rows();
    Eigen::BDCSVD<CMatrix<>> svd(reduced, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix<>& U = svd.matrixU();
    const CMatrix<>& V = svd.matrixV();
    const auto& s = svd.singularValues();

    // attribute each singular triplet to a mode position by maximal overlap
    Eigen::MatrixXd score = U.cwiseAbs2() + V.cwiseAbs2();
    const auto col = max_weight_assignment(score);

    BlockFactor f;
    f.U.resize(B, B);
    f.Q.resize(B, B);
    f.v.resize(B);
    for (Eigen::Index i = 0; i < B; ++i) {
        f.U.col(i) = U.col(col[i]);
        f.Q.col(i) = V.col(col[i]);
        f.v(i) = s(col[i]);
    }
    f.reduced = std::move(reduced);
    return f;
}

}  // namespace

PrecodingSet derive_precoding(const ChannelMatrix<>& H) {
    const auto bd = block_diagonalize(H.values, H.dims);
    PrecodingSet ps;
    ps.dims = H.dims;
    ps.leakage = bd.leakage;
    const Dims sub(H.dims.begin(), H.dims.end() - 1);
    const auto B = static_cast<Eigen::Index>(ps.order() / static_cast<std::size_t>(H.dims.back()));
    ps.gains.resize(static_cast<Eigen::Index>(ps.order()));
    for (std::size_t l = 0; l < bd.blocks.size(); ++l) {
        ps.blocks.push_back(factor_block(reduce_block(bd.blocks[l], sub)));
        ps.gains.segment(static_cast<Eigen::Index>(l) * B, B) = ps.blocks.back().v;
    }
    const double vmax = ps.gains.size() ? ps.gains.maxCoeff() : 0.0;
    ps.floor = kZeroForcingFloor * vmax;
    ps.live.resize(ps.order());
    for (Eigen::Index i = 0; i < ps.gains.size(); ++i) ps.live[i] = (vmax > 0.0 && ps.gains(i) > ps.floor) ? 1 : 0;
    return ps;
}

double reconstruction_error(const PrecodingSet& ps) {
    double worst = 0.0;
    for (const auto& b : ps.blocks) {
        const double n = b.reduced.norm();
        const double e = (b.U * b.v.cast<Complex<>>().asDiagonal() * b.Q.adjoint() - b.reduced).norm();
        worst = std::max(worst, n > 0 ? e / n : e);
    }
    return worst;
}

void verify_precoding(const PrecodingSet& ps, double tol) {
    const double e = reconstruction_error(ps);
    if (!(e <= tol))
        throw VerificationError("precoding reconstruction error " + std::to_string(e) + " exceeds " + std::to_string(tol));
}

CVector<> nom_modulate(const CVector<>& S, const NestedModulation<>& nm) { return nm.apply_structured(S); }

CVector<> nod_demodulate(const CVector<>& R, const PrecodingSet& ps) {
    const auto M = static_cast<Eigen::Index>(ps.order());
    if (R.size() != M) throw ParameterError("received vector length does not match the precoding set");
    const Dims& dims = ps.dims;
    const int N = static_cast<int>(dims.size());
    CVector<> y = R;
    apply_level_dft(y, dims, N, true);
    if (N >= 2) apply_level_dft(y, dims, N - 1, true);
    const auto B = static_cast<Eigen::Index>(ps.blocks.empty() ? 0 : ps.blocks.front().v.size());
    for (std::size_t l = 0; l < ps.blocks.size(); ++l) {
        auto blk = y.segment(static_cast<Eigen::Index>(l) * B, B);
        blk = ps.blocks[l].U.adjoint() * blk;
    }
    for (Eigen::Index i = 0; i < M; ++i) y(i) = ps.live[i] ? y(i) / ps.gains(i) : Complex<>(0.0, 0.0);
    for (int n = N - 2; n >= 1; --n) apply_level_dft(y, dims, n, true);
    for (Eigen::Index i = 0; i < M; ++i)
        if (!ps.live[i]) y(i) = 0.0;
    return y;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CVector<> draw_noise(const NoiseModel& noise, std::size_t order, std::uint64_t trial, const std::vector<int>* logical_map) {
    if (!(noise.variance >= 0.0)) throw ParameterError("noise variance must be nonnegative");
    CVector<> n = CVector<>::Zero(static_cast<Eigen::Index>(order));
    if (noise.variance == 0.0) return n;
    std::mt19937_64 rng(splitmix64(noise.seed + trial));
    std::normal_distribution<double> g(0.0, std::sqrt(noise.variance / 2.0));
    if (noise.correlation == NoiseCorrelation::independent) {
        for (auto& z : n) {
            const double re = g(rng);
            z = Complex<>(re, g(rng));
        }
        return n;
    }
    if (logical_map == nullptr || logical_map->size() != order)
        throw ParameterError("shared-element noise needs the logical-to-physical map");
    int elements = 0;
    for (int e : *logical_map) elements = std::max(elements, e + 1);
    std::vector<Complex<>> draws(static_cast<std::size_t>(elements));
    for (auto& z : draws) {
        const double re = g(rng);
        z = Complex<>(re, g(rng));
    }
    for (std::size_t i = 0; i < order; ++i) n(static_cast<Eigen::Index>(i)) = draws[(*logical_map)[i]];
    return n;
}

RVector<> analytic_noise_variance(const PrecodingSet& ps, double sigma2) {
    const auto M = static_cast<Eigen::Index>(ps.order());
    RVector<> zf(M);
    for (Eigen::Index i = 0; i < M; ++i) zf(i) = ps.live[i] ? sigma2 / (ps.gains(i) * ps.gains(i)) : 0.0;
    const int N = static_cast<int>(ps.dims.size());
    if (N <= 2) return zf;
    // the lower-level DFT adjoint spreads each zero-forced group evenly
    const auto G = static_cast<Eigen::Index>(detail::inner_size(ps.dims, N - 1));
    RVector<> out(M);
    for (Eigen::Index g = 0; g < M; g += G) out.segment(g, G).setConstant(zf.segment(g, G).mean());
    for (Eigen::Index i = 0; i < M; ++i)
        if (!ps.live[i]) out(i) = 0.0;
    return out;
}

Link make_link(ChannelMatrix<> H) {
    PrecodingSet ps = derive_precoding(H);
    verify_precoding(ps);
    NestedModulation<> nm = ps.modulation();
    return Link{std::move(H), std::move(ps), std::move(nm)};
}

EndToEndResult end_to_end(const Link& link, const CVector<>& S, const NoiseModel& noise, std::uint64_t trial,
                          const std::vector<int>* logical_map) {
    const auto& ps = link.precoding;
    const CVector<> X = nom_modulate(S, link.modulation);
    const CVector<> clean = link.H.values * X;
    EndToEndResult out;
    out.gains = ps.gains;
    out.live = ps.live;
    const CVector<> s0 = nod_demodulate(clean, ps);
    double err2 = 0.0, ref2 = 0.0;
    for (Eigen::Index i = 0; i < S.size(); ++i) {
        if (!ps.live[i]) continue;
        err2 += std::norm(s0(i) - S(i));
        ref2 += std::norm(S(i));
    }
    out.residual_interference = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
    if (noise.variance > 0.0)
        out.s_hat = nod_demodulate(clean + draw_noise(noise, ps.order(), trial, logical_map), ps);
    else
        out.s_hat = s0;
    return out;
}

EndToEndResult end_to_end(const DimensionSpec& spec, const ChannelParams& params, const NoiseModel& noise,
                          const CVector<>& S, DistanceMode mode) {
    const Link link = make_link(assemble_H(spec, params, mode));
    if (noise.correlation == NoiseCorrelation::shared_element) {
        const auto geo = build_geometry(spec);
        return end_to_end(link, S, noise, 0, &geo.logical_map);
    }
    return end_to_end(link, S, noise, 0, nullptr);
}

SymmetrizingPhase symmetrizing_phase(const CMatrix<>& M, int max_sweeps) {
    if (M.rows() != M.cols()) throw ParameterError("symmetrization needs a square matrix");
    const Eigen::Index n = M.rows();
    SymmetrizingPhase r;
    r.p = CVector<>::Ones(n);
    const double norm = M.norm();
    auto asym = [&](const CVector<>& p) {
        const CMatrix<> PM = p.asDiagonal() * M;
        return norm > 0 ? (PM - PM.transpose()).norm() / norm : 0.0;
    };
    r.asymmetry_before = asym(r.p);
    double current = r.asymmetry_before;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex<> z = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) z += M(i, j) * std::conj(r.p(j)) * std::conj(M(j, i));
            if (std::abs(z) > 0.0) r.p(i) = std::conj(z) / std::abs(z);
        }
        const double next = asym(r.p);
        if (current - next <= 1e-15) {
            current = next;
            break;
        }
        current = next;
    }
    r.asymmetry_after = current;
    r.exact = current <= 1e-10;
    return r;
}

}  // namespace qfuca
