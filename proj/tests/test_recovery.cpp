#include <cmath>

#include "csifuzz/channel.hpp"
#include "csifuzz/recovery.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csifuzz;

namespace {

CsiVector observe(const FuzzerTaps& taps, const ChannelModel& ch, std::uint64_t seed) {
    PhyConfig cfg;
    const OfdmFrame tx = modulate_frame(random_bits(100, seed), cfg, taps);
    return estimate_csi(propagate(tx, ch, seed), cfg);
}

}  // namespace

TEST_CASE("identity taps leave CSI unchanged") {
    ChannelModel ch;
    ch.cir = {1.0, 0.4};
    const CsiVector csi = observe(FuzzerTaps::identity(), ch, 1);
    const RecoveredCsi r = recover(csi, FuzzerTaps::identity(), PhyConfig{});
    CHECK(r.values == csi.values);
    CHECK(r.min_art_magnitude == 1.0);
}

TEST_CASE("synthetic CSI recovers H_env exactly") {
    const FuzzerTaps taps{{0.0, 0.35}, 0.1};
    const auto art = oracle::used(oracle::dft({1.0, {0.0, 0.35}, 0.1}, 64));
    const auto env = oracle::used(oracle::dft({1.0, 0.4}, 64));
    CsiVector csi;
    for (std::size_t i = 0; i < 52; ++i) csi.values.push_back(art[i] * env[i]);
    const RecoveredCsi r = recover(csi, taps, PhyConfig{});
    for (std::size_t i = 0; i < 52; ++i) CHECK(std::abs(r.values[i] - env[i]) < 1e-9);
    double min_mag = 1e9;
    for (const auto& v : art) min_mag = std::min(min_mag, std::abs(v));
    CHECK(r.min_art_magnitude == doctest::Approx(min_mag).epsilon(1e-12));
}

TEST_CASE("recovery from simulated frames, random taps and environments") {
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        const FuzzerTaps taps = random_taps(derive_seed(50, i));
        ChannelModel ch;
        ch.cir.resize(1 + i % 3);
        for (auto& v : ch.cir) v = rng.complex_gaussian(1.0);
        ch.cir[0] += 2.0;  // keep the environment away from spectral nulls
        const RecoveredCsi r = recover(observe(taps, ch, i), taps, PhyConfig{});
        const auto env = oracle::used(oracle::dft(ch.cir, 64));
        for (std::size_t k = 0; k < 52; ++k) REQUIRE(std::abs(r.values[k] - env[k]) < 1e-9);
    }
}

TEST_CASE("recovery scales estimation noise by 1/|H_art|^2") {
    // LTF estimate error per bin: noise variance times 52/64 per symbol,
    // halved by averaging the two training symbols.
    const double sigma2 = 0.01;
    const double est_var = sigma2 * 52.0 / 64.0 / 2.0;
    const FuzzerTaps taps{{0.0, 0.35}, 0.1};
    const auto art = oracle::used(oracle::dft({1.0, {0.0, 0.35}, 0.1}, 64));
    ChannelModel ch;
    ch.noise_variance = sigma2;
    const int trials = 10000;
    std::vector<double> err(52, 0.0);
    for (int t = 0; t < trials; ++t) {
        const RecoveredCsi r = recover(observe(taps, ch, derive_seed(60, t)), taps, PhyConfig{});
        for (std::size_t k = 0; k < 52; ++k) err[k] += std::norm(r.values[k] - 1.0);
    }
    for (std::size_t k = 0; k < 52; ++k) {
        const double want = est_var / std::norm(art[k]);
        CHECK(err[k] / trials == doctest::Approx(want).epsilon(0.10));
    }
}

TEST_CASE("ill-conditioned taps are reported") {
    // Legal taps keep |H_art| >= 1 - |c1| - |c2| > 0, so raise the threshold
    // above the true minimum to exercise the error path.
    const FuzzerTaps taps{-0.45, {0.0, 0.45}};
    const CsiVector csi = observe(taps, ChannelModel{}, 1);
    const RecoveredCsi ok = recover(csi, taps, PhyConfig{});
    CHECK(ok.min_art_magnitude > 0.0);
    try {
        (void)recover(csi, taps, PhyConfig{}, ok.min_art_magnitude * 1.5);
        FAIL("expected IllConditionedError");
    } catch (const IllConditionedError& e) {
        CHECK_FALSE(e.subcarriers().empty());
        CHECK(e.min_magnitude() == doctest::Approx(ok.min_art_magnitude));
        for (int k : e.subcarriers()) CHECK((k != 0 && std::abs(k) <= 26));
    }
}

TEST_CASE("distortion score") {
    const ComplexVec ones(52, 1.0);
    CHECK(unauthorized_distortion(ones, ones) == 0.0);

    const FuzzerTaps taps{{0.0, 0.35}, 0.1};
    const auto art = oracle::used(oracle::dft({1.0, {0.0, 0.35}, 0.1}, 64));
    double mean = 0.0;
    for (const auto& v : art) mean += std::abs(v);
    mean /= 52.0;
    double acc = 0.0;
    for (const auto& v : art) acc += std::norm(v / mean - 1.0);
    const double want = std::sqrt(acc / 52.0);
    const CsiVector on = observe(taps, ChannelModel{}, 3);
    const CsiVector off = observe(FuzzerTaps::identity(), ChannelModel{}, 3);
    CHECK(unauthorized_distortion(on, off) == doctest::Approx(want).epsilon(1e-9));
    CHECK(want == doctest::Approx(0.3606285970149196).epsilon(1e-12));

    double prev = 0.0;
    for (double c : {0.1, 0.2, 0.3, 0.4}) {
        const FuzzerTaps t{{0.0, c}, 0.0};
        const double d = unauthorized_distortion(observe(t, ChannelModel{}, 4), off);
        CHECK(d > prev);
        prev = d;
    }

    ComplexVec with_zero = ones;
    with_zero[5] = 0.0;
    CHECK_THROWS_AS(unauthorized_distortion(ones, with_zero), std::invalid_argument);
    CHECK_THROWS_AS(unauthorized_distortion(ComplexVec(51, 1.0), ones), std::invalid_argument);
    CHECK_THROWS_AS(unauthorized_distortion(ComplexVec{}, ComplexVec{}), std::invalid_argument);
}

TEST_CASE("recovering with the wrong key leaves residual distortion") {
    const double step = std::ldexp(1.0, -15);
    ChannelModel multipath;
    multipath.cir = {1.0, {0.2, 0.3}};
    const auto env = used_bins(env_response(multipath, 64));
    for (int i = 0; i < 200; ++i) {
        const FuzzerTaps key = random_taps(derive_seed(70, i));
        const FuzzerTaps guess = random_taps(derive_seed(71, i));
        const auto hk = used_bins(artificial_response(key, 64));
        const auto hg = used_bins(artificial_response(guess, 64));
        ComplexVec composite(52);
        for (std::size_t k = 0; k < 52; ++k) composite[k] = hk[k] / hg[k];
        const double composite_score = unauthorized_distortion(composite, ComplexVec(52, 1.0));

        // Flat environment: the residual is exactly the key/guess composite.
        const RecoveredCsi flat = recover(observe(key, ChannelModel{}, i), guess, PhyConfig{});
        CHECK(unauthorized_distortion(flat.values, ComplexVec(52, 1.0)) ==
              doctest::Approx(composite_score).epsilon(1e-9));

        const RecoveredCsi r = recover(observe(key, multipath, i), guess, PhyConfig{});
        const double residual = unauthorized_distortion(r.values, env);
        const bool differs = std::abs(key.c1() - guess.c1()) > step ||
                             std::abs(key.c2() - guess.c2()) > step;
        if (differs) {
            CHECK(composite_score > 0.0);
            CHECK(residual > 0.0);
        }
    }
}
