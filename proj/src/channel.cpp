// SPDX-License-Identifier: Apache-2.0
#include "qfuca/channel.hpp"

#include <cmath>

namespace qfuca {

ChannelParams ChannelParams::from_frequency(double frequency_hz, double beta, double distance) {
    if (!(frequency_hz > 0.0)) throw ParameterError("carrier frequency must be positive");
    ChannelParams p{kSpeedOfLight / frequency_hz, beta, distance};
    p.validate();
    return p;
}

void ChannelParams::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw ParameterError("wavelength must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
    if (!(distance > 0.0) || !std::isfinite(distance)) throw ParameterError("distance must be positive");
}

double exact_distance(const Point& tx, const Point& rx, double D) {
    if (!(D > 0.0)) throw ParameterError("axial distance must be positive");
    return std::sqrt(D * D + (rx - tx).squaredNorm());
}

double approx_distance(const DimensionSpec& spec, std::span<const int> idx_t, std::span<const int> idx_r, double D) {
    if (!(D > 0.0)) throw ParameterError("axial distance must be positive");
    const auto phi = level_azimuths(spec, idx_t);
    const auto theta = level_azimuths(spec, idx_r);
    const auto& R = spec.radii;
    const std::size_t N = R.size();
    double self = 0.0;
    for (std::size_t n = 0; n < N; ++n) self += R[n] * R[n] * (1.0 - std::cos(theta[n] - phi[n]));
    double cross = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            cross += R[i] * R[j] *
                     (std::cos(theta[i] - theta[j]) + std::cos(phi[i] - phi[j]) + std::cos(theta[i] - phi[j]) +
                      std::cos(phi[i] - theta[j]));
    return D + (self + cross) / D;
}

Complex<> element_gain(double d, const ChannelParams& params) {
    if (!(d > 0.0)) throw SingularityError("element gain is singular at zero distance");
    const double mag = params.beta * params.wavelength / (4.0 * kPi * d);
    // phase reduced modulo one wavelength to keep it accurate at large d/lambda
    const double cycles = std::fmod(d / params.wavelength, 1.0);
    return std::polar(mag, -2.0 * kPi * cycles);
}

ChannelMatrix<> assemble_H(const DimensionSpec& spec, const ChannelParams& params, DistanceMode mode) {
    params.validate();
    const auto pos = realize_positions(spec);
    const auto M = static_cast<Eigen::Index>(pos.size());
    ChannelMatrix<> H{CMatrix<>(M, M), spec.cells};
    if (mode == DistanceMode::exact) {
        for (Eigen::Index k = 0; k < M; ++k)
            for (Eigen::Index v = 0; v < M; ++v)
                H.values(v, k) = element_gain(exact_distance(pos[k], pos[v], params.distance), params);
    } else {
        std::vector<std::vector<int>> idx(static_cast<std::size_t>(M));
        for (Eigen::Index i = 0; i < M; ++i) idx[i] = unflatten(spec.cells, static_cast<std::size_t>(i));
        for (Eigen::Index k = 0; k < M; ++k)
            for (Eigen::Index v = 0; v < M; ++v)
                H.values(v, k) = element_gain(approx_distance(spec, idx[k], idx[v], params.distance), params);
    }
    return H;
}

}  // namespace qfuca
