// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qfuca/channel.hpp"
#include "qfuca/types.hpp"

#include <string>
#include <vector>

namespace qfuca {

struct ModeRate {
    std::vector<int> mode;  // (l_1, ..., l_N), innermost first
    double gain2 = 0.0;     // |v|^2
    double power = 0.0;     // W
    double noise = 0.0;     // sigma^2, W
    double snr = 0.0;
    double rate = 0.0;      // bits/s/Hz
    bool live = true;
};

struct SeReport {
    std::vector<ModeRate> modes;
    double total_se = 0.0;
    std::size_t n_elements = 0;
    double eoal = 0.0;
};

// Rates log2(1 + |v|^2 P / sigma^2) over all modes; `live` (optional) zeroes dead modes.
SeReport spectral_efficiency(const Dims& dims, const RVector<>& gains, const RVector<>& powers, double sigma2,
                             std::size_t n_elements, const std::vector<char>& live = {});
SeReport spectral_efficiency(const Dims& dims, const RVector<>& gains, const RVector<>& powers,
                             const RVector<>& sigma2, std::size_t n_elements, const std::vector<char>& live = {});

double eoal(double se, std::size_t n_elements);

RVector<> uniform_power_allocation(double total_power, std::size_t n_modes);

// Uniform over live modes only; dead modes get nothing.
RVector<> live_power_allocation(double total_power, const std::vector<char>& live);

// Single-element free-space power gain (beta lambda / (4 pi D))^2.
double reference_gain2(const ChannelParams& params, double reference_distance);

// sigma^2 such that total_power * reference gain / sigma^2 equals the SNR.
double noise_variance_for_snr(double snr_db, double total_power, double reference_gain2);

}  // namespace qfuca
