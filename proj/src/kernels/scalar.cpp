#include "kernels_impl.hpp"

#include <bit>

namespace rllfb::kernels::scalar {

void xor_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i) dst[i] ^= src[i];
}

std::uint64_t popcount(const std::uint64_t* v, std::size_t words) {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < words; ++i) n += std::popcount(v[i]);
    return n;
}

bool subset_of(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

bool has_close_ones(const std::uint64_t* v, std::size_t bits, int d) {
    const std::size_t words = word_count(bits);
    for (std::size_t i = 0; i < words; ++i)
        for (int s = 1; s <= d; ++s)
            if (v[i] & shifted_down(v, words, i, s)) return true;
    return false;
}

bool has_zero_run_longer(const std::uint64_t* v, std::size_t bits, int k) {
    const std::size_t words = word_count(bits);
    for (std::size_t i = 0; i < words; ++i) {
        std::uint64_t run = zeros_word(v, bits, i);
        for (int s = 1; s <= k && run; ++s) run &= zeros_shifted_down(v, bits, i, s);
        if (run) return true;
    }
    return false;
}

}  // namespace rllfb::kernels::scalar
