// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "qfuca/capacity.hpp"
#include "qfuca/errors.hpp"

#include <doctest.h>

using namespace qfuca;

TEST_SUITE("capacity") {

TEST_CASE("unit SNR gives one bit") {
    const auto r = spectral_efficiency({1}, RVector<>::Constant(1, 1.0), RVector<>::Constant(1, 2.0), 2.0, 1);
    CHECK(r.total_se == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.modes.size() == 1);
    CHECK(r.modes[0].snr == doctest::Approx(1.0));
}

TEST_CASE("equal modes at 15 dB") {
    const Dims d = {4, 2};
    const double snr = std::pow(10.0, 1.5);
    const auto r = spectral_efficiency(d, RVector<>::Ones(8), RVector<>::Constant(8, snr), 1.0, 8);
    CHECK(r.total_se == doctest::Approx(8 * 5.0278).epsilon(1e-4));
    CHECK(r.eoal == doctest::Approx(5.0278).epsilon(1e-4));
}

TEST_CASE("zero gains and dead modes") {
    CHECK(spectral_efficiency({3}, RVector<>::Zero(3), RVector<>::Ones(3), 1.0, 3).total_se == 0.0);
    const auto r = spectral_efficiency({3}, RVector<>::Ones(3), RVector<>::Ones(3), 1.0, 3, {1, 0, 1});
    CHECK(r.total_se == doctest::Approx(2.0));
    CHECK(r.modes[1].rate == 0.0);
    CHECK_FALSE(r.modes[1].live);
    // zero noise is only an error where there is signal
    CHECK_THROWS_AS(spectral_efficiency({2}, RVector<>::Ones(2), RVector<>::Ones(2), 0.0, 2), ParameterError);
    CHECK_NOTHROW(spectral_efficiency({2}, RVector<>::Zero(2), RVector<>::Ones(2), 0.0, 2));
    CHECK_THROWS_AS(spectral_efficiency({2}, RVector<>::Ones(3), RVector<>::Ones(3), 1.0, 2), ParameterError);
}

TEST_CASE("mode tuples follow the flat order") {
    const auto r = spectral_efficiency({2, 3}, RVector<>::Ones(6), RVector<>::Ones(6), 1.0, 6);
    CHECK(r.modes[1].mode == std::vector<int>{1, 0});
    CHECK(r.modes[2].mode == std::vector<int>{0, 1});
}

TEST_CASE("eoal") {
    CHECK(eoal(50.0, 25) == 2.0);
    CHECK(eoal(0.0, 3) == 0.0);
    CHECK_THROWS_AS(eoal(1.0, 0), ParameterError);
}

TEST_CASE("power allocation") {
    const auto p = uniform_power_allocation(1.0, 4);
    for (int i = 0; i < 4; ++i) CHECK(p(i) == 0.25);
    CHECK(uniform_power_allocation(0.0, 5).sum() == 0.0);
    CHECK(uniform_power_allocation(3.0, 7).sum() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_power_allocation(1.0, 0), ParameterError);
    const auto q = live_power_allocation(1.0, {1, 0, 1, 1});
    CHECK(q(1) == 0.0);
    CHECK(q.sum() == doctest::Approx(1.0));
}

TEST_CASE("noise reference") {
    ChannelParams c = ChannelParams::from_frequency(5.8e9);
    const double g = reference_gain2(c, 100.0);
    CHECK(std::sqrt(g) == doctest::Approx(4.1134e-5).epsilon(1e-4));
    const double s2 = noise_variance_for_snr(15.0, 1.0, g);
    CHECK(10 * std::log10(1.0 * g / s2) == doctest::Approx(15.0));
}

TEST_CASE("per-mode noise agrees with the dense oracle") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    RVector<> g(12), p(12);
    for (int i = 0; i < 12; ++i) {
        g(i) = u(rng);
        p(i) = u(rng);
    }
    const auto r = spectral_efficiency({3, 4}, g, p, 0.3, 5);
    CHECK(r.total_se == doctest::Approx(oracle::se(g, p, 0.3, {})).epsilon(1e-14));
}

}  // TEST_SUITE
