#pragma once

#include <cstddef>
#include <cstdint>

#include "rllfb/kernels.hpp"

namespace rllfb::kernels {

inline std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

// Bits i*64+s .. i*64+s+63 of v, zero past the end (1 <= s <= 63).
inline std::uint64_t shifted_down(const std::uint64_t* v, std::size_t words, std::size_t i, int s) {
    const std::uint64_t hi = i + 1 < words ? v[i + 1] << (64 - s) : 0;
    return v[i] >> s | hi;
}

// Complement of word i, restricted to positions below `bits`.
inline std::uint64_t zeros_word(const std::uint64_t* v, std::size_t bits, std::size_t i) {
    const std::size_t base = i * 64;
    if (base >= bits) return 0;
    const std::size_t live = bits - base;
    const std::uint64_t mask = live >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << live) - 1;
    return ~v[i] & mask;
}

inline std::uint64_t zeros_shifted_down(const std::uint64_t* v, std::size_t bits, std::size_t i, int s) {
    return zeros_word(v, bits, i) >> s | zeros_word(v, bits, i + 1) << (64 - s);
}

namespace scalar {
void xor_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
std::uint64_t popcount(const std::uint64_t* v, std::size_t words);
bool subset_of(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
bool has_close_ones(const std::uint64_t* v, std::size_t bits, int d);
bool has_zero_run_longer(const std::uint64_t* v, std::size_t bits, int k);
}  // namespace scalar

namespace avx2 {
void xor_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
std::uint64_t popcount(const std::uint64_t* v, std::size_t words);
bool subset_of(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
bool has_close_ones(const std::uint64_t* v, std::size_t bits, int d);
bool has_zero_run_longer(const std::uint64_t* v, std::size_t bits, int k);
}  // namespace avx2

}  // namespace rllfb::kernels
