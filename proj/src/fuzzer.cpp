#include "csifuzz/fuzzer.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace csifuzz {

void validate_tap(Complex c) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("fuzzer tap is not finite");
    if (c.real() != 0.0 && c.imag() != 0.0)
        throw std::invalid_argument("fuzzer tap must be purely real or purely imaginary");
    const double v = c.real() != 0.0 ? c.real() : c.imag();
    if (v < -0.5 || v >= 0.5) throw std::out_of_range("fuzzer tap outside [-0.5, 0.5)");
}

TapAxis axis_of(Complex c) { return c.imag() != 0.0 ? TapAxis::Imag : TapAxis::Real; }

FuzzerTaps::FuzzerTaps(Complex c1, Complex c2, bool enabled)
    : c1_(c1), c2_(c2), enabled_(enabled) {
    validate_tap(c1);
    validate_tap(c2);
}

FuzzerTaps FuzzerTaps::from_fixed(const FixedPointTap& c1, const FixedPointTap& c2) {
    return {c1.decode(), c2.decode()};
}

double FuzzerTaps::power_gain() const { return 1.0 + std::norm(c1()) + std::norm(c2()); }

TapAxis FuzzerTaps::c1_axis() const { return axis_of(c1()); }
TapAxis FuzzerTaps::c2_axis() const { return axis_of(c2()); }

FuzzerTaps FuzzerTaps::quantized() const {
    if (!enabled_) return *this;
    return from_fixed(quantize_tap(c1_, axis_of(c1_)), quantize_tap(c2_, axis_of(c2_)));
}

ComplexVec apply_fir(std::span<const Complex> x, const FuzzerTaps& taps) {
    return apply_fir_switched(x, taps, taps, x.size());
}

ComplexVec apply_fir_switched(std::span<const Complex> x, const FuzzerTaps& before,
                              const FuzzerTaps& after, std::size_t switch_at) {
    if (x.empty()) throw std::invalid_argument("apply_fir: empty input");
    const std::size_t n = x.size();
    ComplexVec y(n + 2);
    auto at = [&](std::size_t i) { return i < n ? x[i] : Complex{}; };
    for (std::size_t i = 0; i < n + 2; ++i) {
        const FuzzerTaps& t = i < switch_at ? before : after;
        Complex acc = at(i);
        if (i >= 1) acc += t.c1() * at(i - 1);
        if (i >= 2) acc += t.c2() * at(i - 2);
        y[i] = acc;
    }
    return y;
}

FrequencyResponse artificial_response(const FuzzerTaps& taps, std::size_t dft_size) {
    if (dft_size < 3) throw std::invalid_argument("artificial_response: dft_size must be >= 3");
    const auto cir = taps.cir();
    return dft(cir, dft_size);
}

std::string FuzzerRegister::hex() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", word);
    return buf;
}

FuzzerRegister FuzzerRegister::parse_hex(const std::string& text) {
    if (text.size() < 3 || text.size() > 10 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
        throw std::invalid_argument("register word must look like 0x1234abcd: " + text);
    char* end = nullptr;
    const unsigned long v = std::strtoul(text.c_str() + 2, &end, 16);
    if (end == nullptr || *end != '\0')
        throw std::invalid_argument("register word is not hexadecimal: " + text);
    return {static_cast<std::uint32_t>(v)};
}

namespace {

std::uint32_t pack_half(const FixedPointTap& t) {
    if (t.code < FixedPointTap::kMinCode || t.code > FixedPointTap::kMaxCode)
        throw std::out_of_range("tap code outside [-16384, 16383]");
    const std::uint32_t axis = t.axis == TapAxis::Imag ? 1u : 0u;
    const std::uint32_t code = static_cast<std::uint32_t>(static_cast<std::int32_t>(t.code)) & 0x7fffu;
    return (axis << 15) | code;
}

FixedPointTap unpack_half(std::uint32_t half) {
    std::int32_t code = static_cast<std::int32_t>(half & 0x7fffu);
    if (code & 0x4000) code -= 0x8000;  // sign-extend 15 bits
    return {(half >> 15) & 1u ? TapAxis::Imag : TapAxis::Real, static_cast<std::int16_t>(code)};
}

}  // namespace

FuzzerRegister pack_register(const FixedPointTap& c1, const FixedPointTap& c2) {
    return {(pack_half(c1) << 16) | pack_half(c2)};
}

std::pair<FixedPointTap, FixedPointTap> unpack_register(FuzzerRegister reg) {
    return {unpack_half(reg.word >> 16), unpack_half(reg.word & 0xffffu)};
}

FuzzerRegister register_for(const FuzzerTaps& taps) {
    const Complex c1 = taps.c1();
    const Complex c2 = taps.c2();
    return pack_register(quantize_tap(c1, axis_of(c1)), quantize_tap(c2, axis_of(c2)));
}

FuzzerTaps taps_from_register(FuzzerRegister reg) {
    const auto [c1, c2] = unpack_register(reg);
    return FuzzerTaps::from_fixed(c1, c2);
}

FuzzerTaps random_taps(std::uint64_t seed, TapRange range) {
    if (!(range.lo < range.hi)) throw std::invalid_argument("random_taps: empty tap range");
    if (range.lo < -0.5 || range.hi > 0.5)
        throw std::out_of_range("random_taps: range must lie within [-0.5, 0.5)");
    Rng rng(seed);
    auto draw = [&] {
        const bool imag = rng.bit() != 0;
        double v = rng.uniform(range.lo, range.hi);
        if (v >= 0.5) v = std::nextafter(0.5, 0.0);
        return imag ? Complex{0.0, v} : Complex{v, 0.0};
    };
    const Complex c1 = draw();
    const Complex c2 = draw();
    return {c1, c2};
}

}  // namespace csifuzz
