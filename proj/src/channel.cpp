#include "csifuzz/channel.hpp"

#include <cmath>
#include <string>

namespace csifuzz {

void ChannelModel::validate() const {
    if (cir.empty()) throw ConfigError("channel: CIR is empty");
    if (cir.size() > kMaxCirLength)
        throw ConfigError("channel: CIR length " + std::to_string(cir.size()) +
                          " plus the 2 fuzzer taps exceeds the cyclic prefix (max " +
                          std::to_string(kMaxCirLength) + ")");
    if (!all_finite(cir)) throw ConfigError("channel: CIR has non-finite taps");
    if (!std::isfinite(drift) || drift < 0.0) throw ConfigError("channel: drift must be >= 0");
    if (!std::isfinite(noise_variance) || noise_variance < 0.0)
        throw ConfigError("channel: noise variance must be >= 0");
}

ChannelModel loopback_channel() {
    ChannelModel ch;
    ch.cir = {Complex{1.0, 0.0}, Complex{0.05, -0.02}};
    return ch;
}

ChannelModel deep_fade_channel(int subcarrier, std::size_t dft_size) {
    const double theta = 2.0 * kPi * double(subcarrier) / double(dft_size);
    ChannelModel ch;
    ch.cir = {Complex{1.0, 0.0}, -std::polar(1.0, theta)};
    return ch;
}

OfdmFrame propagate(const OfdmFrame& frame, const ChannelModel& ch, std::uint64_t seed) {
    ch.validate();
    const auto& x = frame.samples;
    const std::size_t n = x.size();
    const std::size_t taps = ch.cir.size();

    OfdmFrame out = frame;
    out.samples.assign(n + taps - 1, Complex{});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < taps; ++t) out.samples[i + t] += ch.cir[t] * x[i];

    if (ch.noise_variance > 0.0) {
        Rng rng(seed);
        for (auto& v : out.samples) v += rng.complex_gaussian(ch.noise_variance);
    }
    out.seed = seed;
    return out;
}

FrequencyResponse env_response(const ChannelModel& ch, std::size_t dft_size) {
    if (ch.cir.empty()) throw std::invalid_argument("env_response: empty CIR");
    if (dft_size < ch.cir.size())
        throw std::invalid_argument("env_response: dft_size smaller than CIR length");
    return dft(ch.cir, dft_size);
}

ChannelModel drift_step(const ChannelModel& ch, std::uint64_t seed, std::uint64_t frame_index) {
    if (ch.drift < 0.0) throw std::invalid_argument("drift_step: negative drift");
    if (ch.drift == 0.0) return ch;
    Rng rng(derive_seed(seed, frame_index));
    ChannelModel out = ch;
    for (auto& tap : out.cir) {
        const double sd = ch.drift * std::abs(tap);
        tap += rng.complex_gaussian(sd * sd);
    }
    return out;
}

ComplexVec used_bins(const FrequencyResponse& response) {
    if (response.size() != PhyConfig::kFftSize)
        throw std::invalid_argument("used_bins: response must have 64 bins");
    ComplexVec out;
    out.reserve(PhyConfig::kNumUsed);
    for (int k : PhyConfig::used_subcarriers()) out.push_back(response[PhyConfig::bin(k)]);
    return out;
}

}  // namespace csifuzz
