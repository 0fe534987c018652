#ifndef CSIFUZZ_MONTECARLO_HPP
#define CSIFUZZ_MONTECARLO_HPP

#include <cstdint>

#include "csifuzz/channel.hpp"
#include "csifuzz/fuzzer.hpp"
#include "csifuzz/phy.hpp"

namespace csifuzz {

/// One link configuration: random payload -> fuzzer -> environment -> LTF
/// estimate -> decode.
struct LinkScenario {
    PhyConfig phy;
    ChannelModel channel;
    FuzzerTaps taps;
    std::size_t payload_bits = 800;
    /// Equalize with the true H_art * H_env instead of the LTF estimate.
    bool genie_csi = false;
};

struct FrameOutcome {
    std::size_t bit_errors = 0;
    std::size_t bits = 0;
    std::size_t erased_bins = 0;
    bool frame_error() const { return bit_errors != 0; }
};

/// Frame `frame_seed` drives payload, noise and drift. Two scenarios run with
/// the same seed see the same payload and the same noise realization.
FrameOutcome simulate_frame(const LinkScenario& scenario, std::uint64_t frame_seed);

struct LinkStats {
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t erased_bins = 0;

    double per() const { return frames ? double(frame_errors) / double(frames) : 0.0; }
    double ber() const { return bits ? double(bit_errors) / double(bits) : 0.0; }
    void add(const FrameOutcome& o);
    void merge(const LinkStats& other);
    friend bool operator==(const LinkStats&, const LinkStats&) = default;
};

/// Two scenarios driven by common random numbers, frame by frame.
struct PairedStats {
    LinkStats a;
    LinkStats b;
    std::uint64_t only_a_failed = 0;
    std::uint64_t only_b_failed = 0;

    /// One-sided McNemar statistic for "b fails less often than a".
    double mcnemar_z() const;
    friend bool operator==(const PairedStats&, const PairedStats&) = default;
};

// The frame seed of frame i in a cell is derive_seed(cell_seed, i), so the
// serial and parallel kernels produce identical statistics.
LinkStats run_link_serial(const LinkScenario& scenario, std::uint64_t cell_seed,
                          std::size_t frames);
LinkStats run_link_parallel(const LinkScenario& scenario, std::uint64_t cell_seed,
                            std::size_t frames);

PairedStats run_paired_serial(const LinkScenario& a, const LinkScenario& b,
                              std::uint64_t cell_seed, std::size_t frames);
PairedStats run_paired_parallel(const LinkScenario& a, const LinkScenario& b,
                                std::uint64_t cell_seed, std::size_t frames);

/// Uncoded BPSK through the OFDM chain over AWGN at the given Eb/N0.
LinkStats uncoded_bpsk_ber(double ebn0_db, std::size_t frames, std::size_t bits_per_frame,
                           std::uint64_t seed);

/// Gaussian tail probability.
double q_function(double x);

int max_threads();

}  // namespace csifuzz

#endif
