#include "csifuzz/covert.hpp"

#include <cmath>
#include <limits>

#include "csifuzz/channel.hpp"

namespace csifuzz {

CirAlphabet CirAlphabet::default_alphabet() {
    CirAlphabet a;
    a.patterns = {
        FuzzerTaps{Complex{0.0, 0.35}, Complex{0.1, 0.0}},
        FuzzerTaps{Complex{0.0, -0.35}, Complex{0.1, 0.0}},
        FuzzerTaps{Complex{0.35, 0.0}, Complex{0.0, 0.1}},
        FuzzerTaps{Complex{-0.35, 0.0}, Complex{0.0, 0.1}},
    };
    return a;
}

void CirAlphabet::validate() const {
    if (patterns.size() < 2 || patterns.size() > 256)
        throw ConfigError("alphabet: need between 2 and 256 patterns");
    if (pilot_period < 2) throw ConfigError("alphabet: pilot_period must be >= 2");
    if (!(d_min > 0.0)) throw ConfigError("alphabet: d_min must be positive");
    const double d = min_pairwise_distance(*this);
    if (d < d_min)
        throw ConfigError("alphabet: patterns closer than d_min (" + std::to_string(d) + " < " +
                          std::to_string(d_min) + ")");
}

std::size_t CirAlphabet::digits_per_byte() const {
    std::size_t digits = 0;
    for (std::size_t span = 1; span < 256; span *= patterns.size()) ++digits;
    return digits;
}

namespace {

ComplexVec pattern_response(const FuzzerTaps& taps) {
    return used_bins(artificial_response(taps, PhyConfig::kFftSize));
}

double rms_distance(std::span<const Complex> a, std::span<const Complex> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc / double(a.size()));
}

}  // namespace

double response_distance(const FuzzerTaps& a, const FuzzerTaps& b) {
    return rms_distance(pattern_response(a), pattern_response(b));
}

double min_pairwise_distance(const CirAlphabet& alphabet) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < alphabet.patterns.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet.patterns.size(); ++j)
            best = std::min(best, response_distance(alphabet.patterns[i], alphabet.patterns[j]));
    return best;
}

std::uint16_t crc16_ccitt(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xffff;
    for (auto byte : data) {
        crc ^= static_cast<std::uint16_t>(byte) << 8;
        for (int i = 0; i < 8; ++i)
            crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                                 : static_cast<std::uint16_t>(crc << 1);
    }
    return crc;
}

std::vector<std::uint8_t> frame_message(std::span<const std::uint8_t> msg) {
    if (msg.size() > 0xffff) throw std::invalid_argument("covert message longer than 65535 bytes");
    std::vector<std::uint8_t> out;
    out.reserve(msg.size() + 4);
    out.push_back(static_cast<std::uint8_t>(msg.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(msg.size() & 0xff));
    out.insert(out.end(), msg.begin(), msg.end());
    const std::uint16_t crc = crc16_ccitt(out);
    out.push_back(static_cast<std::uint8_t>(crc >> 8));
    out.push_back(static_cast<std::uint8_t>(crc & 0xff));
    return out;
}

std::vector<std::size_t> bytes_to_symbols(std::span<const std::uint8_t> bytes,
                                          const CirAlphabet& alphabet) {
    const std::size_t m = alphabet.size();
    const std::size_t digits = alphabet.digits_per_byte();
    std::vector<std::size_t> out;
    out.reserve(bytes.size() * digits);
    for (auto byte : bytes) {
        std::vector<std::size_t> d(digits);
        std::size_t v = byte;
        for (std::size_t i = digits; i-- > 0;) {
            d[i] = v % m;
            v /= m;
        }
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

std::vector<ScheduledFrame> covert_encode(std::span<const std::uint8_t> msg,
                                          const CirAlphabet& alphabet) {
    alphabet.validate();
    const auto symbols = bytes_to_symbols(frame_message(msg), alphabet);
    std::vector<ScheduledFrame> schedule;
    std::size_t next = 0;
    for (std::size_t frame = 0; next < symbols.size(); ++frame) {
        if (frame % alphabet.pilot_period == 0) {
            schedule.push_back({FuzzerTaps::identity(), true, 0});
        } else {
            const std::size_t s = symbols[next++];
            schedule.push_back({alphabet.patterns[s], false, s});
        }
    }
    return schedule;
}

std::vector<std::size_t> CovertDecodeResult::symbols() const {
    std::vector<std::size_t> out;
    out.reserve(decisions.size());
    for (const auto& d : decisions) out.push_back(d.symbol);
    return out;
}

CovertDecodeError::CovertDecodeError(const std::string& what, CovertDecodeResult best_effort)
    : std::runtime_error(what), best_effort_(std::move(best_effort)) {}

namespace {

SymbolDecision classify_against(std::span<const Complex> ratio, const std::vector<ComplexVec>& responses) {
    SymbolDecision best;
    best.distance = std::numeric_limits<double>::infinity();
    best.runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < responses.size(); ++m) {
        const double d = rms_distance(ratio, responses[m]);
        if (d < best.distance) {
            best.runner_up = best.distance;
            best.distance = d;
            best.symbol = m;
        } else if (d < best.runner_up) {
            best.runner_up = d;
        }
    }
    return best;
}

std::vector<ComplexVec> pattern_responses(const CirAlphabet& alphabet) {
    std::vector<ComplexVec> out;
    for (const auto& p : alphabet.patterns) out.push_back(pattern_response(p));
    return out;
}

}  // namespace

SymbolDecision classify_ratio(std::span<const Complex> ratio, const CirAlphabet& alphabet) {
    if (ratio.size() != PhyConfig::kNumUsed)
        throw std::invalid_argument("covert: ratio must cover the used subcarriers");
    return classify_against(ratio, pattern_responses(alphabet));
}

std::vector<SymbolDecision> covert_classify(std::span<const CsiVector> csi_stream,
                                            const CirAlphabet& alphabet) {
    const auto responses = pattern_responses(alphabet);

    std::vector<SymbolDecision> out;
    const CsiVector* pilot = nullptr;
    ComplexVec ratio(PhyConfig::kNumUsed);
    for (std::size_t i = 0; i < csi_stream.size(); ++i) {
        const CsiVector& csi = csi_stream[i];
        if (csi.values.size() != PhyConfig::kNumUsed)
            throw std::invalid_argument("covert: CSI record does not cover the used subcarriers");
        if (i % alphabet.pilot_period == 0) {
            pilot = &csi;
            continue;
        }
        if (pilot == nullptr) throw std::invalid_argument("covert: data frame before first pilot");
        for (std::size_t k = 0; k < ratio.size(); ++k) {
            const Complex p = pilot->values[k];
            ratio[k] = p == Complex{} ? Complex{} : csi.values[k] / p;
        }
        out.push_back(classify_against(ratio, responses));
    }
    return out;
}

CovertDecodeResult covert_decode(std::span<const CsiVector> csi_stream, const CirAlphabet& alphabet,
                                 const PhyConfig&) {
    CovertDecodeResult result;
    result.decisions = covert_classify(csi_stream, alphabet);

    const std::size_t m = alphabet.size();
    const std::size_t digits = alphabet.digits_per_byte();
    std::vector<std::uint8_t> raw;
    for (std::size_t i = 0; i + digits <= result.decisions.size(); i += digits) {
        std::size_t v = 0;
        for (std::size_t d = 0; d < digits; ++d) v = v * m + result.decisions[i + d].symbol;
        raw.push_back(static_cast<std::uint8_t>(std::min<std::size_t>(v, 255)));
    }

    if (raw.size() < 4) {
        result.bytes = raw;
        throw CovertDecodeError("covert: stream too short for framing", std::move(result));
    }
    const std::size_t len = (std::size_t{raw[0]} << 8) | raw[1];
    const std::size_t avail = std::min(len, raw.size() - 2);
    result.bytes.assign(raw.begin() + 2, raw.begin() + 2 + static_cast<std::ptrdiff_t>(avail));
    if (raw.size() < len + 4)
        throw CovertDecodeError("covert: stream shorter than the framed length", std::move(result));
    const std::uint16_t crc = crc16_ccitt(std::span<const std::uint8_t>(raw).first(len + 2));
    const std::uint16_t got = static_cast<std::uint16_t>((raw[len + 2] << 8) | raw[len + 3]);
    if (crc != got) throw CovertDecodeError("covert: CRC mismatch", std::move(result));
    return result;
}

std::size_t symbol_errors(std::span<const std::size_t> decoded, std::span<const std::size_t> reference) {
    std::size_t errors = 0;
    for (std::size_t i = 0; i < reference.size(); ++i)
        if (i >= decoded.size() || decoded[i] != reference[i]) ++errors;
    return errors;
}

}  // namespace csifuzz
