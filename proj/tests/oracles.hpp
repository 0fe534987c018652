// Independent reference computations used only by the tests. Nothing here
// calls into the library's transform, FIR, coding or interleaving code.
#ifndef CSIFUZZ_TESTS_ORACLES_HPP
#define CSIFUZZ_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using CxL = std::complex<long double>;

/// O(n^2) DFT in long double, x zero-padded to n.
inline std::vector<Cx> dft(const std::vector<Cx>& x, std::size_t n) {
    const long double pi = 3.141592653589793238462643383279502884L;
    std::vector<Cx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        CxL acc{};
        for (std::size_t m = 0; m < x.size(); ++m) {
            const long double angle = -2.0L * pi * static_cast<long double>((k * m) % n) / n;
            acc += CxL(x[m].real(), x[m].imag()) * CxL(std::cos(angle), std::sin(angle));
        }
        out[k] = Cx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return out;
}

/// Full linear convolution.
inline std::vector<Cx> convolve(const std::vector<Cx>& x, const std::vector<Cx>& h) {
    std::vector<Cx> y(x.size() + h.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) y[i + j] += x[i] * h[j];
    return y;
}

/// Bins of the used subcarriers -26..-1, 1..26 from a 64-point spectrum.
inline std::vector<Cx> used(const std::vector<Cx>& spectrum) {
    std::vector<Cx> out;
    for (int k = -26; k <= 26; ++k)
        if (k != 0) out.push_back(spectrum[static_cast<std::size_t>((k + 64) % 64)]);
    return out;
}

/// K=7 rate-1/2 encoder written as an explicit shift register.
/// reg[0] is the current input, reg[d] the input d steps ago.
inline std::vector<std::uint8_t> conv_encode(const std::vector<std::uint8_t>& bits) {
    constexpr std::array<int, 7> g0 = {1, 0, 1, 1, 0, 1, 1};  // 133 octal
    constexpr std::array<int, 7> g1 = {1, 1, 1, 1, 0, 0, 1};  // 171 octal
    std::array<int, 7> reg{};
    std::vector<std::uint8_t> in = bits;
    in.insert(in.end(), 6, 0);
    std::vector<std::uint8_t> out;
    for (auto b : in) {
        for (int d = 6; d > 0; --d) reg[d] = reg[d - 1];
        reg[0] = b;
        int a = 0, c = 0;
        for (int d = 0; d < 7; ++d) {
            a ^= reg[d] & g0[d];
            c ^= reg[d] & g1[d];
        }
        out.push_back(static_cast<std::uint8_t>(a));
        out.push_back(static_cast<std::uint8_t>(c));
    }
    return out;
}

/// Maximum-likelihood decode by enumerating every information word.
inline std::vector<std::uint8_t> ml_decode(const std::vector<double>& llrs, std::size_t k) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> best_bits;
    for (std::uint32_t word = 0; word < (1u << k); ++word) {
        std::vector<std::uint8_t> bits(k);
        for (std::size_t i = 0; i < k; ++i) bits[i] = (word >> i) & 1u;
        const auto code = conv_encode(bits);
        double metric = 0.0;
        for (std::size_t i = 0; i < code.size(); ++i) metric += code[i] ? -llrs[i] : llrs[i];
        if (metric > best) {
            best = metric;
            best_bits = bits;
        }
    }
    return best_bits;
}

/// First 802.11a interleaver permutation.
inline std::size_t first_permutation(std::size_t k, std::size_t n_cbps) {
    return (n_cbps / 16) * (k % 16) + k / 16;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Pearson chi-square statistic for counts against a uniform expectation.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    const double expected = double(total) / double(counts.size());
    double chi = 0.0;
    for (auto c : counts) chi += (double(c) - expected) * (double(c) - expected) / expected;
    return chi;
}

}  // namespace oracle

#endif
