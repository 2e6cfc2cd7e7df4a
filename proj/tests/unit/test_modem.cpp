// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"
#include "qfuca/modem.hpp"

#include <doctest.h>

using namespace qfuca;
using oracle::cd;

namespace {

ChannelMatrix<> synthetic(const Dims& d, const CMatrix<>& H) { return ChannelMatrix<>{H, d}; }

double rel(const CVector<>& a, const CVector<>& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_SUITE("modem") {

TEST_CASE("loopback on synthetic top-level circulant channels") {
    std::mt19937_64 rng(3);
    for (const Dims& d : {Dims{2, 2}, Dims{2, 2, 2}, Dims{3, 4}, Dims{2, 3, 2}, Dims{4, 4, 4}}) {
        const Link link = make_link(synthetic(d, oracle::top_circulant(d, rng)));
        CHECK(link.precoding.live_count() == product(d));
        CHECK(reconstruction_error(link.precoding) <= 1e-10);
        const auto S = oracle::random_vector(static_cast<Eigen::Index>(product(d)), rng);
        const auto r = end_to_end(link, S, NoiseModel{}, 0);
        CHECK(rel(r.s_hat, S) <= 1e-8);
        CHECK(r.residual_interference <= 1e-10);
        // the precoded modulation stays unitary
        const auto W = link.modulation.composed();
        CHECK((W.adjoint() * W - CMatrix<>::Identity(W.rows(), W.rows())).norm() <= 1e-10);
        CHECK((W - oracle::dense_modulation(d, link.precoding.precoders())).norm() <= 1e-12);
    }
}

TEST_CASE("two-level fully circulant channel: gains are DFT eigenvalue magnitudes, U and Q are phases") {
    std::mt19937_64 rng(5);
    for (const Dims& d : {Dims{2, 2}, Dims{3, 2}, Dims{4, 3}}) {
        const CMatrix<> H = oracle::multilevel_circulant(d, rng);
        const auto ps = derive_precoding(synthetic(d, H));
        const auto F = oracle::kron_chain(d);
        const CMatrix<> D = F.adjoint() * H * F;  // diagonal
        for (Eigen::Index i = 0; i < D.rows(); ++i) CHECK(std::abs(ps.gains(i) - std::abs(D(i, i))) <= 1e-12 * H.norm());
        for (const auto& b : ps.blocks) {
            const CMatrix<> Ud = b.U.cwiseAbs();
            CHECK((Ud - CMatrix<>::Identity(b.U.rows(), b.U.cols())).norm() <= 1e-10);
            const CMatrix<> Qd = b.Q.cwiseAbs();
            CHECK((Qd - CMatrix<>::Identity(b.Q.rows(), b.Q.cols())).norm() <= 1e-10);
        }
    }
}

TEST_CASE("single level: trivial precoding") {
    const auto p = ChannelParams::from_frequency(5.8e9);
    const auto s = plain_spec(8, 4.0);
    const auto H = assemble_H(s, p);
    const auto ps = derive_precoding(H);
    REQUIRE(ps.blocks.size() == 8);
    const auto F = oracle::dft(8);
    const CMatrix<> D = F.adjoint() * H.values * F;
    for (int l = 0; l < 8; ++l) {
        CHECK(ps.blocks[l].v.size() == 1);
        CHECK(std::abs(ps.gains(l) - std::abs(D(l, l))) <= 1e-12 * H.values.norm());
    }
    std::mt19937_64 rng(1);
    const auto S = oracle::random_vector(8, rng);
    const Link link = make_link(H);
    CHECK(rel(end_to_end(link, S, NoiseModel{}).s_hat, S) <= 1e-8);
}

TEST_CASE("identity channel") {
    const Dims d = {2, 3};
    const auto ps = derive_precoding(synthetic(d, CMatrix<>::Identity(6, 6)));
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(std::abs(ps.gains(i) - 1.0) < 1e-14);
}

TEST_CASE("zero inputs") {
    std::mt19937_64 rng(9);
    const Dims d = {2, 2, 2};
    const Link link = make_link(synthetic(d, oracle::top_circulant(d, rng)));
    CHECK(nom_modulate(CVector<>::Zero(8), link.modulation).norm() == 0.0);
    CHECK(nod_demodulate(CVector<>::Zero(8), link.precoding).norm() == 0.0);
    CHECK_THROWS_AS(nod_demodulate(CVector<>::Zero(7), link.precoding), ParameterError);
}

TEST_CASE("rank-deficient channel flags dead modes") {
    // all-ones channel: one live mode
    const Dims d = {2, 2};
    const auto ps = derive_precoding(synthetic(d, CMatrix<>::Ones(4, 4)));
    CHECK(ps.live_count() == 1);
    CHECK(ps.live[0] == 1);
    const auto var = analytic_noise_variance(ps, 1.0);
    for (int i = 1; i < 4; ++i) CHECK(var(i) == 0.0);
}

TEST_CASE("reconstruction check catches a tampered factor") {
    std::mt19937_64 rng(13);
    const Dims d = {3, 2};
    auto ps = derive_precoding(synthetic(d, oracle::top_circulant(d, rng)));
    CHECK_NOTHROW(verify_precoding(ps));
    ps.blocks[1].v(0) *= 1.01;
    CHECK_THROWS_AS(verify_precoding(ps), VerificationError);
}

TEST_CASE("matrix pipeline equals the element-wise summation") {
    const auto p = ChannelParams::from_frequency(5.8e9, 1.0, 100.0);
    std::mt19937_64 rng(17);
    const auto s = unconstrained_spec({3, 2}, {1.0, 2.0});
    const auto S = oracle::random_vector(6, rng);
    const auto H = assemble_H(s, p);
    const CVector<> r = H.values * nom_modulate(S, NestedModulation<>(s.cells));
    const auto ref = oracle::received_sum(s, p.wavelength, 1.0, 100.0, S);
    CHECK(rel(r, ref) <= 1e-10);
}

TEST_CASE("noise draws") {
    NoiseModel n{2.0, NoiseCorrelation::independent, 42};
    const auto a = draw_noise(n, 16, 3), b = draw_noise(n, 16, 3), c = draw_noise(n, 16, 4);
    CHECK(a == b);
    CHECK(a != c);
    const std::vector<int> map = {0, 1, 0, 2};
    NoiseModel shared{1.0, NoiseCorrelation::shared_element, 1};
    const auto z = draw_noise(shared, 4, 0, &map);
    CHECK(z(0) == z(2));
    CHECK(z(0) != z(1));
    CHECK_THROWS_AS(draw_noise(shared, 4, 0), ParameterError);
    CHECK(draw_noise(NoiseModel{0.0}, 5, 0).norm() == 0.0);
    CHECK_THROWS_AS(draw_noise(NoiseModel{-1.0}, 5, 0), ParameterError);
}

TEST_CASE("physical shared layout reports finite residual interference") {
    const auto p = ChannelParams::from_frequency(5.8e9, 1.0, 100.0);
    DimensionSpec s;
    {
        const LayoutType t{LayoutKind::shared_center, 0};
        const auto sol = solve_layout_pair(t, 8, 4);
        REQUIRE(!sol.empty());
        s = sharing_spec({8, 4}, {t}, std::vector<PairSolution>{sol.front()}, 4.0);
    }
    std::mt19937_64 rng(23);
    const auto S = oracle::random_vector(32, rng);
    const auto r = end_to_end(s, p, NoiseModel{}, S);
    CHECK(std::isfinite(r.residual_interference));
    CHECK(r.live.size() == 32);
}

TEST_CASE("symmetrizing phase") {
    std::mt19937_64 rng(29);
    // M = D S with S symmetric and D a unit-modulus diagonal: exactly symmetrizable
    const auto A = oracle::random_vector(16, rng);
    CMatrix<> Sym(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) Sym(i, j) = A(std::min(i, j) * 4 + std::max(i, j));
    CVector<> dphase(4);
    for (int i = 0; i < 4; ++i) dphase(i) = std::exp(cd(0, 0.7 * i + 0.3));
    const CMatrix<> M = dphase.asDiagonal() * Sym;
    const auto r = symmetrizing_phase(M);
    CHECK(r.asymmetry_before > 0.1);
    CHECK(r.asymmetry_after <= r.asymmetry_before);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(std::abs(r.p(i)) - 1.0) < 1e-12);
    const CMatrix<> PM = r.p.asDiagonal() * M;
    CHECK((PM - PM.transpose()).norm() / M.norm() == doctest::Approx(r.asymmetry_after).epsilon(1e-9));
}

}  // TEST_SUITE
