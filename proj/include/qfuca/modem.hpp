// SPDX-License-Identifier: Apache-2.0
//
// NOM -> channel -> NOD pipeline. The top-level DFT block-diagonalizes the
// channel; each top-level block l is reduced by W_{N-1} and factored as
// M_l = U_l V_l Q_l^H. Q_l precodes, U_l^H decodes, V_l^{-1} zero-forces and
// the remaining levels are plain DFT demodulation.

#pragma once

#include "qfuca/channel.hpp"
#include "qfuca/geometry.hpp"
#include "qfuca/transforms.hpp"
#include "qfuca/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qfuca {

inline constexpr double kZeroForcingFloor = 1e-12;       // relative to the largest singular value
inline constexpr double kReconstructionTolerance = 1e-10;

struct BlockFactor {
    CMatrix<> reduced;  // W_{N-1}^H H^{(l)} W_{N-1}
    CMatrix<> U;
    CMatrix<> Q;
    RVector<> v;  // singular values in mode order
};

struct PrecodingSet {
    Dims dims;
    std::vector<BlockFactor> blocks;  // one per top-level mode l_N
    RVector<> gains;                  // v over all flat mode indices
    std::vector<char> live;           // gains above the zero-forcing floor
    double floor = 0.0;
    double leakage = 0.0;             // top-level block leakage of the channel

    std::size_t order() const { return product(dims); }
    std::size_t live_count() const;
    std::vector<CMatrix<>> precoders() const;
    NestedModulation<> modulation() const;
};

PrecodingSet derive_precoding(const ChannelMatrix<>& H);

// Largest relative error ||U V Q^H - M||_F / ||M||_F over the blocks.
double reconstruction_error(const PrecodingSet& ps);

// Throws VerificationError when the reconstruction error exceeds tol.
void verify_precoding(const PrecodingSet& ps, double tol = kReconstructionTolerance);

CVector<> nom_modulate(const CVector<>& S, const NestedModulation<>& nm);
CVector<> nod_demodulate(const CVector<>& R, const PrecodingSet& ps);

enum class NoiseCorrelation { independent, shared_element };

struct NoiseModel {
    double variance = 0.0;  // per logical receive index, W
    NoiseCorrelation correlation = NoiseCorrelation::independent;
    std::uint64_t seed = 1;
};

std::uint64_t splitmix64(std::uint64_t x);

// Complex Gaussian noise over logical receive indices for one trial. The
// shared-element mode needs the physical mapping.
CVector<> draw_noise(const NoiseModel& noise, std::size_t order, std::uint64_t trial,
                     const std::vector<int>* logical_map = nullptr);

// Per-mode post-demodulation noise variance for independent noise; 0 on dead modes.
RVector<> analytic_noise_variance(const PrecodingSet& ps, double sigma2);

struct Link {
    ChannelMatrix<> H;
    PrecodingSet precoding;
    NestedModulation<> modulation;
};

Link make_link(ChannelMatrix<> H);

struct EndToEndResult {
    CVector<> s_hat;
    RVector<> gains;
    std::vector<char> live;
    double residual_interference = 0.0;  // noiseless relative recovery error on live modes
};

EndToEndResult end_to_end(const Link& link, const CVector<>& S, const NoiseModel& noise, std::uint64_t trial = 0,
                          const std::vector<int>* logical_map = nullptr);
EndToEndResult end_to_end(const DimensionSpec& spec, const ChannelParams& params, const NoiseModel& noise,
                          const CVector<>& S, DistanceMode mode = DistanceMode::exact);

// Unit-modulus diagonal P reducing ||P M - (P M)^T||_F by coordinate ascent.
struct SymmetrizingPhase {
    CVector<> p;
    double asymmetry_before = 0.0;  // relative to ||M||_F
    double asymmetry_after = 0.0;
    bool exact = false;
};

SymmetrizingPhase symmetrizing_phase(const CMatrix<>& M, int max_sweeps = 200);

}  // namespace qfuca
