#include "csifuzz/montecarlo.hpp"

#include <cmath>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace csifuzz {

namespace {

CsiVector true_response(const LinkScenario& s, const ChannelModel& ch) {
    const ComplexVec art = used_bins(artificial_response(s.taps, PhyConfig::kFftSize));
    const ComplexVec env = used_bins(env_response(ch, PhyConfig::kFftSize));
    CsiVector csi;
    csi.values.resize(art.size());
    for (std::size_t i = 0; i < art.size(); ++i) csi.values[i] = art[i] * env[i];
    return csi;
}

}  // namespace

FrameOutcome simulate_frame(const LinkScenario& s, std::uint64_t frame_seed) {
    const Bits bits = random_bits(s.payload_bits, derive_seed(frame_seed, 0));
    const OfdmFrame tx = modulate_frame(bits, s.phy, s.taps);
    const ChannelModel ch = drift_step(s.channel, derive_seed(frame_seed, 1), 0);
    const OfdmFrame rx = propagate(tx, ch, derive_seed(frame_seed, 2));
    const CsiVector csi = s.genie_csi ? true_response(s, ch) : estimate_csi(rx, s.phy);
    const DemodResult demod = demodulate_frame(rx, csi, s.phy);

    FrameOutcome out;
    out.bits = bits.size();
    out.erased_bins = demod.erased_bins;
    for (std::size_t i = 0; i < bits.size(); ++i) out.bit_errors += demod.bits[i] != bits[i];
    return out;
}

void LinkStats::add(const FrameOutcome& o) {
    ++frames;
    frame_errors += o.frame_error();
    bits += o.bits;
    bit_errors += o.bit_errors;
    erased_bins += o.erased_bins;
}

void LinkStats::merge(const LinkStats& other) {
    frames += other.frames;
    frame_errors += other.frame_errors;
    bits += other.bits;
    bit_errors += other.bit_errors;
    erased_bins += other.erased_bins;
}

double PairedStats::mcnemar_z() const {
    const double discordant = double(only_a_failed + only_b_failed);
    if (discordant == 0.0) return 0.0;
    return (double(only_a_failed) - double(only_b_failed)) / std::sqrt(discordant);
}

LinkStats run_link_serial(const LinkScenario& scenario, std::uint64_t cell_seed, std::size_t frames) {
    LinkStats stats;
    for (std::size_t i = 0; i < frames; ++i) stats.add(simulate_frame(scenario, derive_seed(cell_seed, i)));
    return stats;
}

LinkStats run_link_parallel(const LinkScenario& scenario, std::uint64_t cell_seed, std::size_t frames) {
    std::uint64_t frame_errors = 0, bits = 0, bit_errors = 0, erased = 0;
    const auto n = static_cast<std::int64_t>(frames);
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : frame_errors, bits, bit_errors, erased)
    for (std::int64_t i = 0; i < n; ++i) {
        const FrameOutcome o = simulate_frame(scenario, derive_seed(cell_seed, std::uint64_t(i)));
        frame_errors += o.frame_error();
        bits += o.bits;
        bit_errors += o.bit_errors;
        erased += o.erased_bins;
    }
    LinkStats stats;
    stats.frames = frames;
    stats.frame_errors = frame_errors;
    stats.bits = bits;
    stats.bit_errors = bit_errors;
    stats.erased_bins = erased;
    return stats;
}

PairedStats run_paired_serial(const LinkScenario& a, const LinkScenario& b, std::uint64_t cell_seed,
                              std::size_t frames) {
    PairedStats stats;
    for (std::size_t i = 0; i < frames; ++i) {
        const std::uint64_t seed = derive_seed(cell_seed, i);
        const FrameOutcome oa = simulate_frame(a, seed);
        const FrameOutcome ob = simulate_frame(b, seed);
        stats.a.add(oa);
        stats.b.add(ob);
        stats.only_a_failed += oa.frame_error() && !ob.frame_error();
        stats.only_b_failed += ob.frame_error() && !oa.frame_error();
    }
    return stats;
}

PairedStats run_paired_parallel(const LinkScenario& a, const LinkScenario& b, std::uint64_t cell_seed,
                                std::size_t frames) {
    std::uint64_t fe_a = 0, bits_a = 0, be_a = 0, er_a = 0;
    std::uint64_t fe_b = 0, bits_b = 0, be_b = 0, er_b = 0;
    std::uint64_t only_a = 0, only_b = 0;
    const auto n = static_cast<std::int64_t>(frames);
#pragma omp parallel for schedule(dynamic, 16) \
    reduction(+ : fe_a, bits_a, be_a, er_a, fe_b, bits_b, be_b, er_b, only_a, only_b)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::uint64_t seed = derive_seed(cell_seed, std::uint64_t(i));
        const FrameOutcome oa = simulate_frame(a, seed);
        const FrameOutcome ob = simulate_frame(b, seed);
        fe_a += oa.frame_error();
        bits_a += oa.bits;
        be_a += oa.bit_errors;
        er_a += oa.erased_bins;
        fe_b += ob.frame_error();
        bits_b += ob.bits;
        be_b += ob.bit_errors;
        er_b += ob.erased_bins;
        only_a += oa.frame_error() && !ob.frame_error();
        only_b += ob.frame_error() && !oa.frame_error();
    }
    PairedStats stats;
    stats.a = {frames, fe_a, bits_a, be_a, er_a};
    stats.b = {frames, fe_b, bits_b, be_b, er_b};
    stats.only_a_failed = only_a;
    stats.only_b_failed = only_b;
    return stats;
}

LinkStats uncoded_bpsk_ber(double ebn0_db, std::size_t frames, std::size_t bits_per_frame,
                           std::uint64_t seed) {
    LinkScenario s;
    s.phy.modulation = Modulation::BPSK;
    s.phy.coding = Coding::Uncoded;
    s.channel.noise_variance = noise_variance_for_ebn0(std::pow(10.0, ebn0_db / 10.0), s.phy);
    s.payload_bits = bits_per_frame;
    s.genie_csi = true;
    return run_link_parallel(s, seed, frames);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace csifuzz
