#ifndef CSIFUZZ_CHANNEL_HPP
#define CSIFUZZ_CHANNEL_HPP

#include <cstdint>

#include "csifuzz/core.hpp"
#include "csifuzz/fuzzer.hpp"
#include "csifuzz/phy.hpp"

namespace csifuzz {

/// Environment between transmitter and receiver: a multipath FIR, a per-frame
/// drift scale, and additive noise variance per complex sample.
struct ChannelModel {
    ComplexVec cir{Complex{1.0, 0.0}};
    double drift = 0.0;
    double noise_variance = 0.0;

    /// Longest environment CIR that still leaves room for the two fuzzer taps
    /// inside the cyclic prefix.
    static constexpr std::size_t kMaxCirLength = PhyConfig::kCpLength - 2;

    /// Throws ConfigError when the CIR is empty or too long, or when drift or
    /// noise variance is negative or not finite.
    void validate() const;
};

/// Short fixed CIR standing in for TX->RX antenna coupling plus analog filter
/// ripple (the self-monitoring loopback).
ChannelModel loopback_channel();

/// Two-tap CIR [1, -exp(i 2 pi k0 / N)] whose response is exactly zero on
/// subcarrier k0 (signed index).
ChannelModel deep_fade_channel(int subcarrier, std::size_t dft_size = PhyConfig::kFftSize);

/// Linear convolution with the CIR plus complex Gaussian noise. Output grows by
/// cir.size() - 1 samples. Deterministic per seed.
OfdmFrame propagate(const OfdmFrame& frame, const ChannelModel& ch, std::uint64_t seed);

/// H_env(k) = DFT(cir zero-padded to dft_size). Requires dft_size >= cir.size().
FrequencyResponse env_response(const ChannelModel& ch, std::size_t dft_size);

/// Perturbs each tap by an independent complex Gaussian of standard deviation
/// drift * |tap|. drift == 0 returns the model unchanged.
ChannelModel drift_step(const ChannelModel& ch, std::uint64_t seed, std::uint64_t frame_index);

/// Restriction of a full-band response to the used subcarriers.
ComplexVec used_bins(const FrequencyResponse& response);

}  // namespace csifuzz

#endif
