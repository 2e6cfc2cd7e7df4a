// SPDX-License-Identifier: Apache-2.0
#include "qfuca/capacity.hpp"

#include "qfuca/errors.hpp"

#include <cmath>

namespace qfuca {

SeReport spectral_efficiency(const Dims& dims, const RVector<>& gains, const RVector<>& powers, const RVector<>& sigma2,
                             std::size_t n_elements, const std::vector<char>& live) {
    const Eigen::Index M = gains.size();
    if (powers.size() != M || sigma2.size() != M) throw ParameterError("gains, powers and noise must have equal length");
    if (static_cast<std::size_t>(M) != product(dims)) throw ParameterError("gain count does not match dims");
    if (!live.empty() && live.size() != static_cast<std::size_t>(M)) throw ParameterError("live mask length mismatch");
    SeReport r;
    r.n_elements = n_elements;
    r.modes.reserve(static_cast<std::size_t>(M));
    for (Eigen::Index i = 0; i < M; ++i) {
        ModeRate m;
        m.mode = unflatten(dims, static_cast<std::size_t>(i));
        m.gain2 = gains(i) * gains(i);
        m.power = powers(i);
        m.noise = sigma2(i);
        m.live = live.empty() || live[static_cast<std::size_t>(i)];
        if (m.power < 0.0) throw ParameterError("mode power must be nonnegative");
        if (m.noise < 0.0) throw ParameterError("noise variance must be nonnegative");
        const double signal = m.live ? m.gain2 * m.power : 0.0;
        if (signal > 0.0 && m.noise == 0.0) throw ParameterError("noise variance is zero on a live mode");
        m.snr = signal > 0.0 ? signal / m.noise : 0.0;
        m.rate = std::log2(1.0 + m.snr);
        r.total_se += m.rate;
        r.modes.push_back(std::move(m));
    }
    r.eoal = eoal(r.total_se, n_elements);
    return r;
}

SeReport spectral_efficiency(const Dims& dims, const RVector<>& gains, const RVector<>& powers, double sigma2,
                             std::size_t n_elements, const std::vector<char>& live) {
    return spectral_efficiency(dims, gains, powers, RVector<>::Constant(gains.size(), sigma2), n_elements, live);
}

double eoal(double se, std::size_t n_elements) {
    if (n_elements < 1) throw ParameterError("element count must be at least 1");
    return se / static_cast<double>(n_elements);
}

RVector<> uniform_power_allocation(double total_power, std::size_t n_modes) {
    if (total_power < 0.0) throw ParameterError("total power must be nonnegative");
    if (n_modes < 1) throw ParameterError("need at least one mode");
    return RVector<>::Constant(static_cast<Eigen::Index>(n_modes), total_power / static_cast<double>(n_modes));
}

RVector<> live_power_allocation(double total_power, const std::vector<char>& live) {
    if (total_power < 0.0) throw ParameterError("total power must be nonnegative");
    std::size_t n = 0;
    for (char c : live) n += c ? 1 : 0;
    RVector<> p = RVector<>::Zero(static_cast<Eigen::Index>(live.size()));
    if (n == 0) return p;
    for (std::size_t i = 0; i < live.size(); ++i)
        if (live[i]) p(static_cast<Eigen::Index>(i)) = total_power / static_cast<double>(n);
    return p;
}

double reference_gain2(const ChannelParams& params, double reference_distance) {
    if (!(reference_distance > 0.0)) throw ParameterError("reference distance must be positive");
    const double g = params.beta * params.wavelength / (4.0 * kPi * reference_distance);
    return g * g;
}

double noise_variance_for_snr(double snr_db, double total_power, double reference_gain2) {
    if (!std::isfinite(snr_db)) throw ParameterError("SNR must be finite");
    if (!(total_power > 0.0)) throw ParameterError("total power must be positive");
    return total_power * reference_gain2 / std::pow(10.0, snr_db / 10.0);
}

}  // namespace qfuca
