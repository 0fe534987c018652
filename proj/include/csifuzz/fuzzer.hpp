#ifndef CSIFUZZ_FUZZER_HPP
#define CSIFUZZ_FUZZER_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "csifuzz/core.hpp"

namespace csifuzz {

using FrequencyResponse = ComplexVec;

/// Transmitter-side fuzzer setting. Each of c1, c2 is purely real or purely
/// imaginary with its nonzero component in [-0.5, 0.5). A disabled fuzzer
/// behaves as the CIR [1, 0, 0] regardless of the stored taps.
class FuzzerTaps {
public:
    FuzzerTaps() = default;

    /// Throws std::invalid_argument for a tap that is not axis-aligned and
    /// std::out_of_range for a component outside [-0.5, 0.5).
    FuzzerTaps(Complex c1, Complex c2, bool enabled = true);

    static FuzzerTaps identity() { return {}; }
    static FuzzerTaps from_fixed(const FixedPointTap& c1, const FixedPointTap& c2);

    Complex c1() const { return enabled_ ? c1_ : Complex{}; }
    Complex c2() const { return enabled_ ? c2_ : Complex{}; }
    bool enabled() const { return enabled_; }

    /// The artificial CIR [1, c1, c2].
    std::array<Complex, 3> cir() const { return {Complex{1.0, 0.0}, c1(), c2()}; }

    /// Output/input power ratio on white input: 1 + |c1|^2 + |c2|^2.
    double power_gain() const;

    /// Snaps both taps onto the Q1.15 register grid.
    FuzzerTaps quantized() const;

    TapAxis c1_axis() const;
    TapAxis c2_axis() const;

    friend bool operator==(const FuzzerTaps& a, const FuzzerTaps& b) {
        return a.c1() == b.c1() && a.c2() == b.c2();
    }

private:
    Complex c1_{};
    Complex c2_{};
    bool enabled_ = false;
};

void validate_tap(Complex c);

/// Axis of an axis-aligned tap; a zero tap reports Real.
TapAxis axis_of(Complex c);

/// y[n] = x[n] + c1 x[n-1] + c2 x[n-2], full linear convolution (length + 2).
/// The undelayed sample always passes with coefficient exactly 1.
ComplexVec apply_fir(std::span<const Complex> x, const FuzzerTaps& taps);

/// Same FIR, but the taps switch from `before` to `after` at sample index
/// `switch_at`. Models a register write landing in the middle of a frame.
ComplexVec apply_fir_switched(std::span<const Complex> x, const FuzzerTaps& before,
                              const FuzzerTaps& after, std::size_t switch_at);

/// H_art(k) = DFT([1, c1, c2, 0...], dft_size). Requires dft_size >= 3.
FrequencyResponse artificial_response(const FuzzerTaps& taps, std::size_t dft_size);

/// Register word: bit 31 c1 axis, bits 30..16 c1 code (15-bit two's
/// complement), bit 15 c2 axis, bits 14..0 c2 code. Axis flag 1 = imaginary.
struct FuzzerRegister {
    std::uint32_t word = 0;

    std::string hex() const;
    static FuzzerRegister parse_hex(const std::string& text);

    friend bool operator==(const FuzzerRegister&, const FuzzerRegister&) = default;
};

FuzzerRegister pack_register(const FixedPointTap& c1, const FixedPointTap& c2);
std::pair<FixedPointTap, FixedPointTap> unpack_register(FuzzerRegister reg);

/// Register word for a taps setting (taps are quantized first).
FuzzerRegister register_for(const FuzzerTaps& taps);
FuzzerTaps taps_from_register(FuzzerRegister reg);

/// Sub-range of [-0.5, 0.5) from which random tap components are drawn.
struct TapRange {
    double lo = -0.5;
    double hi = 0.5;
};

/// Draws axis (real/imag) and component uniformly for each tap.
/// Deterministic per seed. Throws std::invalid_argument for an empty range
/// and std::out_of_range for a range outside [-0.5, 0.5].
FuzzerTaps random_taps(std::uint64_t seed, TapRange range = {});

}  // namespace csifuzz

#endif
