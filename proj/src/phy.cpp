#include "csifuzz/phy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace csifuzz {

namespace {

constexpr std::array<double, 53> kLtfFull = {
    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1,
    0,
    1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1};

constexpr std::array<int, 4> kPilotIndices = {-21, -7, 7, 21};
constexpr std::array<double, 4> kPilotValues = {1, 1, 1, -1};

// Transmit scaling: time = IDFT(X) * 64 / sqrt(52) gives unit mean power
// when all 52 used bins carry unit-power symbols.
const double kTxScale = double(PhyConfig::kFftSize) / std::sqrt(double(PhyConfig::kNumUsed));

std::size_t used_position(int k) {
    return static_cast<std::size_t>(k < 0 ? k + 26 : k + 25);
}

std::size_t shift_parameter(std::size_t n_bpsc) { return std::max<std::size_t>(n_bpsc / 2, 1); }

// Gray level for a pair of bits on one 16-QAM axis: 00 -3, 01 -1, 11 1, 10 3.
double qam16_level(std::uint8_t b0, std::uint8_t b1) {
    if (b0 == 0) return b1 == 0 ? -3.0 : -1.0;
    return b1 == 0 ? 3.0 : 1.0;
}

struct Constellation {
    std::vector<Complex> points;           // indexed by bit label, MSB = first bit
    std::size_t bits = 0;
};

const Constellation& constellation(Modulation m) {
    static const auto build = [](Modulation mod) {
        Constellation c;
        c.bits = bits_per_subcarrier(mod);
        const std::size_t count = std::size_t{1} << c.bits;
        for (std::size_t label = 0; label < count; ++label) {
            std::uint8_t b[4] = {};
            for (std::size_t i = 0; i < c.bits; ++i) b[i] = (label >> (c.bits - 1 - i)) & 1u;
            c.points.push_back(map_symbol(std::span<const std::uint8_t>(b, c.bits), mod));
        }
        return c;
    };
    static const Constellation bpsk = build(Modulation::BPSK);
    static const Constellation qpsk = build(Modulation::QPSK);
    static const Constellation qam16 = build(Modulation::QAM16);
    switch (m) {
        case Modulation::BPSK: return bpsk;
        case Modulation::QPSK: return qpsk;
        default: return qam16;
    }
}

ComplexVec ofdm_symbol(const ComplexVec& bins) {
    ComplexVec time = idft(bins);
    ComplexVec out;
    out.reserve(PhyConfig::kSymbolLength);
    for (std::size_t i = PhyConfig::kFftSize - PhyConfig::kCpLength; i < PhyConfig::kFftSize; ++i)
        out.push_back(time[i] * kTxScale);
    for (const auto& v : time) out.push_back(v * kTxScale);
    return out;
}

template <typename T>
std::vector<T> permute(std::span<const T> in, std::size_t n_cbps, std::size_t n_bpsc, bool inverse) {
    if (n_cbps == 0 || in.size() % n_cbps != 0)
        throw std::invalid_argument("interleaver: length is not a multiple of n_cbps");
    std::vector<T> out(in.size());
    for (std::size_t base = 0; base < in.size(); base += n_cbps) {
        for (std::size_t k = 0; k < n_cbps; ++k) {
            const std::size_t j = interleaver_position(k, n_cbps, n_bpsc);
            if (inverse)
                out[base + k] = in[base + j];
            else
                out[base + j] = in[base + k];
        }
    }
    return out;
}

}  // namespace

std::string to_string(Modulation m) {
    switch (m) {
        case Modulation::BPSK: return "bpsk";
        case Modulation::QPSK: return "qpsk";
        case Modulation::QAM16: return "qam16";
    }
    return "unknown";
}

Modulation modulation_from_string(const std::string& name) {
    if (name == "bpsk" || name == "BPSK") return Modulation::BPSK;
    if (name == "qpsk" || name == "QPSK") return Modulation::QPSK;
    if (name == "qam16" || name == "QAM16" || name == "16qam") return Modulation::QAM16;
    throw std::invalid_argument("unknown modulation: " + name);
}

std::size_t bits_per_subcarrier(Modulation m) {
    switch (m) {
        case Modulation::BPSK: return 1;
        case Modulation::QPSK: return 2;
        case Modulation::QAM16: return 4;
    }
    return 1;
}

const std::array<int, PhyConfig::kNumUsed>& PhyConfig::used_subcarriers() {
    static const auto table = [] {
        std::array<int, kNumUsed> t{};
        std::size_t i = 0;
        for (int k = -26; k <= 26; ++k)
            if (k != 0) t[i++] = k;
        return t;
    }();
    return table;
}

const std::array<int, PhyConfig::kNumData>& PhyConfig::data_subcarriers() {
    static const auto table = [] {
        std::array<int, kNumData> t{};
        std::size_t i = 0;
        for (int k : used_subcarriers())
            if (std::find(kPilotIndices.begin(), kPilotIndices.end(), k) == kPilotIndices.end())
                t[i++] = k;
        return t;
    }();
    return table;
}

const std::array<int, PhyConfig::kNumPilots>& PhyConfig::pilot_subcarriers() { return kPilotIndices; }

const std::array<double, PhyConfig::kNumUsed>& PhyConfig::ltf_sequence() {
    static const auto table = [] {
        std::array<double, kNumUsed> t{};
        std::size_t i = 0;
        for (int k : used_subcarriers()) t[i++] = kLtfFull[static_cast<std::size_t>(k + 26)];
        return t;
    }();
    return table;
}

std::size_t PhyConfig::bin(int subcarrier) {
    const int n = static_cast<int>(kFftSize);
    return static_cast<std::size_t>(((subcarrier % n) + n) % n);
}

std::size_t PhyConfig::data_bits_per_symbol() const {
    return coding == Coding::Conv12 ? coded_bits_per_symbol() / 2 : coded_bits_per_symbol();
}

std::size_t PhyConfig::symbols_for_payload(std::size_t n_bits) const {
    const std::size_t total = coding == Coding::Conv12 ? n_bits + kConvTailBits : n_bits;
    const std::size_t per = data_bits_per_symbol();
    return (total + per - 1) / per;
}

// ---------------------------------------------------------------------------
// Convolutional code

namespace {

struct Trellis {
    // outputs[r] for the 7-bit register r = (input << 6) | state.
    std::array<std::uint8_t, 128> out_a{};
    std::array<std::uint8_t, 128> out_b{};
    Trellis() {
        for (unsigned r = 0; r < 128; ++r) {
            out_a[r] = static_cast<std::uint8_t>(std::popcount(r & kConvPolyA) & 1);
            out_b[r] = static_cast<std::uint8_t>(std::popcount(r & kConvPolyB) & 1);
        }
    }
};

const Trellis& trellis() {
    static const Trellis t;
    return t;
}

}  // namespace

Bits conv_encode(std::span<const std::uint8_t> bits) {
    const Trellis& t = trellis();
    Bits out;
    out.reserve(2 * (bits.size() + kConvTailBits));
    unsigned state = 0;
    auto push = [&](unsigned input) {
        const unsigned r = (input << 6) | state;
        out.push_back(t.out_a[r]);
        out.push_back(t.out_b[r]);
        state = r >> 1;
    };
    for (auto b : bits) push(b & 1u);
    for (std::size_t i = 0; i < kConvTailBits; ++i) push(0);
    return out;
}

Bits viterbi_decode(std::span<const double> llrs) {
    if (llrs.size() % 2 != 0) throw std::invalid_argument("viterbi_decode: odd metric count");
    if (llrs.size() < 2 * kConvTailBits)
        throw std::invalid_argument("viterbi_decode: shorter than the trellis tail");
    const std::size_t steps = llrs.size() / 2;

    // For next state ns and predecessor lsb, the branch label (a << 1) | b.
    static const auto labels = [] {
        const Trellis& t = trellis();
        std::array<std::array<std::uint8_t, 2>, 64> out{};
        for (unsigned ns = 0; ns < 64; ++ns)
            for (unsigned lsb = 0; lsb < 2; ++lsb) {
                const unsigned r = ((ns >> 5) << 6) | ((ns << 1) & 63u) | lsb;
                out[ns][lsb] = static_cast<std::uint8_t>((t.out_a[r] << 1) | t.out_b[r]);
            }
        return out;
    }();

    // Unreachable states start far below any reachable metric.
    constexpr double kUnreachable = -1e300;
    std::array<double, 64> metric;
    metric.fill(kUnreachable);
    metric[0] = 0.0;
    std::array<double, 64> next{};
    // decisions[step * 64 + state] = lsb of the surviving predecessor.
    std::vector<std::uint8_t> decisions(steps * 64);

    for (std::size_t s = 0; s < steps; ++s) {
        const double la = llrs[2 * s];
        const double lb = llrs[2 * s + 1];
        const std::array<double, 4> branch = {la + lb, la - lb, -la + lb, -la - lb};
        std::uint8_t* dec = decisions.data() + s * 64;
        for (unsigned ns = 0; ns < 64; ++ns) {
            const unsigned p0 = (ns << 1) & 63u;
            const double m0 = metric[p0] + branch[labels[ns][0]];
            const double m1 = metric[p0 | 1u] + branch[labels[ns][1]];
            const bool take1 = m1 > m0;  // ties keep the even predecessor
            next[ns] = take1 ? m1 : m0;
            dec[ns] = take1;
        }
        metric = next;
    }

    Bits path(steps);
    unsigned state = 0;  // terminated trellis
    for (std::size_t s = steps; s-- > 0;) {
        path[s] = static_cast<std::uint8_t>(state >> 5);
        state = ((state << 1) & 63u) | decisions[s * 64 + state];
    }
    path.resize(steps - kConvTailBits);
    return path;
}

// ---------------------------------------------------------------------------
// Interleaver

std::size_t interleaver_position(std::size_t k, std::size_t n_cbps, std::size_t n_bpsc) {
    const std::size_t s = shift_parameter(n_bpsc);
    const std::size_t i = (n_cbps / 16) * (k % 16) + k / 16;
    return s * (i / s) + (i + n_cbps - (16 * i) / n_cbps) % s;
}

Bits interleave(std::span<const std::uint8_t> bits, std::size_t n_cbps, std::size_t n_bpsc) {
    return permute(bits, n_cbps, n_bpsc, false);
}

Bits deinterleave(std::span<const std::uint8_t> bits, std::size_t n_cbps, std::size_t n_bpsc) {
    return permute(bits, n_cbps, n_bpsc, true);
}

std::vector<double> deinterleave(std::span<const double> values, std::size_t n_cbps,
                                 std::size_t n_bpsc) {
    return permute(values, n_cbps, n_bpsc, true);
}

// ---------------------------------------------------------------------------
// Mapping

Complex map_symbol(std::span<const std::uint8_t> b, Modulation m) {
    switch (m) {
        case Modulation::BPSK:
            return {b[0] ? 1.0 : -1.0, 0.0};
        case Modulation::QPSK: {
            const double s = 1.0 / std::sqrt(2.0);
            return {(b[0] ? 1.0 : -1.0) * s, (b[1] ? 1.0 : -1.0) * s};
        }
        case Modulation::QAM16: {
            const double s = 1.0 / std::sqrt(10.0);
            return {qam16_level(b[0], b[1]) * s, qam16_level(b[2], b[3]) * s};
        }
    }
    return {};
}

ComplexVec map_bits(std::span<const std::uint8_t> bits, Modulation m) {
    const std::size_t n = bits_per_subcarrier(m);
    if (bits.size() % n != 0) throw std::invalid_argument("map_bits: length not a multiple of bits/symbol");
    ComplexVec out;
    out.reserve(bits.size() / n);
    for (std::size_t i = 0; i < bits.size(); i += n) out.push_back(map_symbol(bits.subspan(i, n), m));
    return out;
}

void demap_symbol(Complex z, double weight, Modulation m, std::vector<double>& out) {
    const Constellation& c = constellation(m);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::array<double, 4> d0;
    std::array<double, 4> d1;
    d0.fill(kInf);
    d1.fill(kInf);
    for (std::size_t label = 0; label < c.points.size(); ++label) {
        const double d = std::norm(z - c.points[label]);
        for (std::size_t i = 0; i < c.bits; ++i) {
            const bool one = (label >> (c.bits - 1 - i)) & 1u;
            auto& slot = one ? d1[i] : d0[i];
            slot = std::min(slot, d);
        }
    }
    for (std::size_t i = 0; i < c.bits; ++i) out.push_back(weight * (d1[i] - d0[i]));
}

// ---------------------------------------------------------------------------
// Frames

ComplexVec modulate_baseband(std::span<const std::uint8_t> bits, const PhyConfig& cfg,
                             std::size_t* data_symbols) {
    const std::size_t n_sym = cfg.symbols_for_payload(bits.size());
    const std::size_t n_cbps = cfg.coded_bits_per_symbol();
    const std::size_t n_bpsc = bits_per_subcarrier(cfg.modulation);

    Bits coded;
    if (cfg.coding == Coding::Conv12) {
        Bits padded(bits.begin(), bits.end());
        padded.resize(n_sym * cfg.data_bits_per_symbol() - kConvTailBits, 0);
        coded = conv_encode(padded);
    } else {
        coded.assign(bits.begin(), bits.end());
        coded.resize(n_sym * n_cbps, 0);
    }
    const Bits interleaved = interleave(coded, n_cbps, n_bpsc);

    ComplexVec samples;
    samples.reserve((PhyConfig::kNumLtf + n_sym) * PhyConfig::kSymbolLength);

    ComplexVec bins(PhyConfig::kFftSize);
    const auto& used = PhyConfig::used_subcarriers();
    const auto& ltf = PhyConfig::ltf_sequence();
    for (std::size_t i = 0; i < used.size(); ++i) bins[PhyConfig::bin(used[i])] = ltf[i];
    const ComplexVec ltf_symbol = ofdm_symbol(bins);
    for (std::size_t r = 0; r < PhyConfig::kNumLtf; ++r)
        samples.insert(samples.end(), ltf_symbol.begin(), ltf_symbol.end());

    const auto& data = PhyConfig::data_subcarriers();
    for (std::size_t s = 0; s < n_sym; ++s) {
        std::fill(bins.begin(), bins.end(), Complex{});
        const auto block = std::span<const std::uint8_t>(interleaved).subspan(s * n_cbps, n_cbps);
        for (std::size_t j = 0; j < data.size(); ++j)
            bins[PhyConfig::bin(data[j])] = map_symbol(block.subspan(j * n_bpsc, n_bpsc), cfg.modulation);
        for (std::size_t p = 0; p < kPilotIndices.size(); ++p)
            bins[PhyConfig::bin(kPilotIndices[p])] = kPilotValues[p];
        const ComplexVec sym = ofdm_symbol(bins);
        samples.insert(samples.end(), sym.begin(), sym.end());
    }
    if (data_symbols) *data_symbols = n_sym;
    return samples;
}

OfdmFrame modulate_frame(std::span<const std::uint8_t> bits, const PhyConfig& cfg,
                         const FuzzerTaps& taps) {
    OfdmFrame frame;
    const ComplexVec base = modulate_baseband(bits, cfg, &frame.data_symbols);
    frame.samples = apply_fir(base, taps);
    frame.payload_bits.assign(bits.begin(), bits.end());
    frame.modulation = cfg.modulation;
    frame.coding = cfg.coding;
    return frame;
}

ComplexVec symbol_spectrum(std::span<const Complex> samples, std::size_t index) {
    const std::size_t start = index * PhyConfig::kSymbolLength + PhyConfig::kCpLength;
    if (start + PhyConfig::kFftSize > samples.size())
        throw std::invalid_argument("symbol_spectrum: frame too short for symbol index");
    ComplexVec spectrum = dft(samples.subspan(start, PhyConfig::kFftSize), PhyConfig::kFftSize);
    for (auto& v : spectrum) v /= kTxScale;
    return spectrum;
}

CsiVector estimate_csi(const OfdmFrame& frame_rx, const PhyConfig&) {
    const ComplexVec y0 = symbol_spectrum(frame_rx.samples, 0);
    const ComplexVec y1 = symbol_spectrum(frame_rx.samples, 1);
    const auto& used = PhyConfig::used_subcarriers();
    const auto& ltf = PhyConfig::ltf_sequence();
    CsiVector csi;
    csi.values.resize(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        const std::size_t b = PhyConfig::bin(used[i]);
        csi.values[i] = 0.5 * (y0[b] + y1[b]) / ltf[i];
    }
    return csi;
}

DemodResult demodulate_frame(const OfdmFrame& frame_rx, const CsiVector& csi, const PhyConfig& cfg) {
    if (csi.values.size() != PhyConfig::kNumUsed)
        throw std::invalid_argument("demodulate_frame: CSI must cover the 52 used subcarriers");
    const std::size_t n_sym = frame_rx.data_symbols;
    const std::size_t n_cbps = cfg.coded_bits_per_symbol();
    const std::size_t n_bpsc = bits_per_subcarrier(cfg.modulation);
    const auto& data = PhyConfig::data_subcarriers();

    DemodResult result;
    std::vector<double> raw;
    raw.reserve(n_sym * n_cbps);
    for (std::size_t s = 0; s < n_sym; ++s) {
        const ComplexVec y = symbol_spectrum(frame_rx.samples, PhyConfig::kNumLtf + s);
        for (int k : data) {
            const Complex h = csi.values[used_position(k)];
            if (std::abs(h) <= kErasureThreshold) {
                raw.insert(raw.end(), n_bpsc, 0.0);
                ++result.erased_bins;
                continue;
            }
            demap_symbol(y[PhyConfig::bin(k)] / h, std::norm(h), cfg.modulation, raw);
        }
    }
    result.llrs = deinterleave(std::span<const double>(raw), n_cbps, n_bpsc);

    const std::size_t n_payload = frame_rx.payload_bits.size();
    if (cfg.coding == Coding::Conv12) {
        result.bits = viterbi_decode(result.llrs);
    } else {
        result.bits.resize(result.llrs.size());
        for (std::size_t i = 0; i < result.llrs.size(); ++i) result.bits[i] = result.llrs[i] < 0.0;
    }
    result.bits.resize(n_payload);
    return result;
}

double noise_variance_for_ebn0(double ebn0_linear, const PhyConfig& cfg) {
    const double rate = cfg.coding == Coding::Conv12 ? 0.5 : 1.0;
    const double bits_per_bin = double(bits_per_subcarrier(cfg.modulation)) * rate;
    // Per-bin Es/N0 = 64 / (52 sigma^2) after the receive FFT.
    return double(PhyConfig::kFftSize) /
           (double(PhyConfig::kNumUsed) * ebn0_linear * bits_per_bin);
}

double noise_variance_for_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

}  // namespace csifuzz
