#include <cmath>

#include "csifuzz/channel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csifuzz;

namespace {

OfdmFrame random_frame(std::uint64_t seed) {
    PhyConfig cfg;
    return modulate_frame(random_bits(300, seed), cfg, random_taps(seed));
}

}  // namespace

TEST_CASE("identity channel") {
    const OfdmFrame f = random_frame(1);
    const OfdmFrame out = propagate(f, ChannelModel{}, 5);
    CHECK(out.samples == f.samples);
    for (const auto& v : env_response(ChannelModel{}, 64)) CHECK(v == Complex{1.0, 0.0});
}

TEST_CASE("noise power") {
    OfdmFrame f;
    f.samples.assign(1000000, Complex{});
    ChannelModel ch;
    ch.noise_variance = 0.1;
    const OfdmFrame out = propagate(f, ch, 77);
    double p = 0.0;
    for (const auto& v : out.samples) p += std::norm(v);
    CHECK(p / double(out.samples.size()) == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("noise is reproducible per seed") {
    const OfdmFrame f = random_frame(2);
    ChannelModel ch;
    ch.cir = {1.0, {0.2, -0.1}};
    ch.noise_variance = 0.05;
    CHECK(propagate(f, ch, 9).samples == propagate(f, ch, 9).samples);
    CHECK(propagate(f, ch, 9).samples != propagate(f, ch, 10).samples);
}

TEST_CASE("two-tap environment response") {
    ChannelModel ch;
    ch.cir = {1.0, 0.4};
    const auto h = env_response(ch, 64);
    const auto want = oracle::dft({1.0, 0.4}, 64);
    for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(h[k] - want[k]) < 1e-12);
    const auto u = used_bins(h);
    REQUIRE(u.size() == 52);
    CHECK(std::abs(u[0] - want[38]) < 1e-15);   // subcarrier -26
    CHECK(std::abs(u[51] - want[26]) < 1e-15);  // subcarrier 26
}

TEST_CASE("random three-tap responses match brute force") {
    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        ChannelModel ch;
        ch.cir = {rng.complex_gaussian(1), rng.complex_gaussian(1), rng.complex_gaussian(1)};
        const auto h = env_response(ch, 64);
        const auto want = oracle::dft(ch.cir, 64);
        for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(h[k] - want[k]) < 1e-12);
    }
}

TEST_CASE("deep fade nulls the chosen subcarrier") {
    for (int k0 : {-20, -1, 3, 10, 26}) {
        const ChannelModel ch = deep_fade_channel(k0);
        const auto h = env_response(ch, 64);
        CHECK(std::abs(h[PhyConfig::bin(k0)]) < 1e-12);
        const auto k1 = PhyConfig::bin(k0 == 26 ? 25 : k0 + 1);
        CHECK(std::abs(h[k1]) > 0.05);
    }
}

TEST_CASE("delay spread budget is enforced") {
    ChannelModel ch;
    ch.cir.assign(ChannelModel::kMaxCirLength, 0.1);
    CHECK_NOTHROW(ch.validate());
    ch.cir.push_back(0.1);
    CHECK_THROWS_AS(ch.validate(), ConfigError);
    CHECK_THROWS_AS(propagate(random_frame(1), ch, 0), ConfigError);
    ChannelModel neg;
    neg.noise_variance = -1.0;
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    ChannelModel empty;
    empty.cir.clear();
    CHECK_THROWS_AS(empty.validate(), ConfigError);
}

TEST_CASE("superposition without noise") {
    ChannelModel ch;
    ch.cir = {{0.9, 0.1}, 0.3, {0.0, -0.2}};
    for (int i = 0; i < 10; ++i) {
        const OfdmFrame a = random_frame(100 + i), b = random_frame(200 + i);
        REQUIRE(a.samples.size() == b.samples.size());
        const Complex alpha{0.7, -0.3}, beta{-1.1, 0.5};
        OfdmFrame mix = a;
        for (std::size_t n = 0; n < mix.samples.size(); ++n)
            mix.samples[n] = alpha * a.samples[n] + beta * b.samples[n];
        const auto ya = propagate(a, ch, 0).samples, yb = propagate(b, ch, 0).samples;
        const auto ym = propagate(mix, ch, 0).samples;
        for (std::size_t n = 0; n < ym.size(); ++n)
            REQUIRE(std::abs(ym[n] - (alpha * ya[n] + beta * yb[n])) < 1e-12);
    }
}

TEST_CASE("drift") {
    ChannelModel ch;
    ch.cir = {1.0, {0.3, 0.4}, -0.2};
    CHECK(drift_step(ch, 1, 0).cir == ch.cir);

    ch.drift = 0.01;
    CHECK(drift_step(ch, 3, 7).cir == drift_step(ch, 3, 7).cir);
    CHECK(drift_step(ch, 3, 7).cir != drift_step(ch, 3, 8).cir);

    // Relative change per tap and step: complex Gaussian with std 0.01.
    double sum = 0.0;
    std::size_t n = 0;
    ChannelModel cur = ch;
    for (std::uint64_t step = 0; step < 100; ++step) {
        const ChannelModel next = drift_step(cur, 11, step);
        for (std::size_t t = 0; t < cur.cir.size(); ++t) {
            sum += std::norm((next.cir[t] - cur.cir[t]) / std::abs(cur.cir[t]));
            ++n;
        }
        cur = next;
    }
    CHECK(std::sqrt(sum / double(n)) == doctest::Approx(0.01).epsilon(0.2));
    ch.drift = -0.1;
    CHECK_THROWS(drift_step(ch, 1, 0));
}

TEST_CASE("loopback channel") {
    const ChannelModel ch = loopback_channel();
    REQUIRE(ch.cir.size() == 2);
    CHECK(ch.cir[1] == Complex{0.05, -0.02});
    CHECK(ch.noise_variance == 0.0);
}
