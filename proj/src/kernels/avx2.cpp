#include <immintrin.h>

#include <bit>

#include "kernels_impl.hpp"

namespace rllfb::kernels::avx2 {

namespace {

inline __m256i load(const std::uint64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }

// Per-byte popcount via nibble lookup, summed into four 64-bit lanes.
inline __m256i popcount_lanes(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3,
                                         1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low = _mm256_set1_epi8(0x0f);
    const __m256i lo = _mm256_shuffle_epi8(lut, _mm256_and_si256(v, low));
    const __m256i hi = _mm256_shuffle_epi8(lut, _mm256_and_si256(_mm256_srli_epi16(v, 4), low));
    return _mm256_sad_epu8(_mm256_add_epi8(lo, hi), _mm256_setzero_si256());
}

// Words i..i+3 shifted down by s bits, pulling in bits from words i+1..i+4.
inline __m256i shifted(const std::uint64_t* v, std::size_t i, int s) {
    const __m128i sv = _mm_cvtsi32_si128(s), tv = _mm_cvtsi32_si128(64 - s);
    return _mm256_or_si256(_mm256_srl_epi64(load(v + i), sv), _mm256_sll_epi64(load(v + i + 1), tv));
}

}  // namespace

void xor_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4)
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(load(dst + i), load(src + i)));
    for (; i < words; ++i) dst[i] ^= src[i];
}

std::uint64_t popcount(const std::uint64_t* v, std::size_t words) {
    std::size_t i = 0;
    __m256i acc = _mm256_setzero_si256();
    for (; i + 4 <= words; i += 4) acc = _mm256_add_epi64(acc, popcount_lanes(load(v + i)));
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t n = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < words; ++i) n += std::popcount(v[i]);
    return n;
}

bool subset_of(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4)
        if (!_mm256_testc_si256(load(b + i), load(a + i))) return false;
    for (; i < words; ++i)
        if (a[i] & ~b[i]) return false;
    return true;
}

bool has_close_ones(const std::uint64_t* v, std::size_t bits, int d) {
    const std::size_t words = word_count(bits);
    std::size_t i = 0;
    for (; i + 5 <= words; i += 4) {
        const __m256i w = load(v + i);
        __m256i hit = _mm256_setzero_si256();
        for (int s = 1; s <= d; ++s) hit = _mm256_or_si256(hit, _mm256_and_si256(w, shifted(v, i, s)));
        if (!_mm256_testz_si256(hit, hit)) return true;
    }
    for (; i < words; ++i)
        for (int s = 1; s <= d; ++s)
            if (v[i] & shifted_down(v, words, i, s)) return true;
    return false;
}

bool has_zero_run_longer(const std::uint64_t* v, std::size_t bits, int k) {
    const std::size_t full = bits / 64;
    const __m256i ones = _mm256_set1_epi64x(-1);
    std::size_t i = 0;
    // Vector path while words i..i+4 are all fully inside the vector.
    for (; i + 5 <= full; i += 4) {
        const __m256i z = _mm256_xor_si256(load(v + i), ones);
        __m256i run = z;
        for (int s = 1; s <= k; ++s) run = _mm256_andnot_si256(shifted(v, i, s), run);
        if (!_mm256_testz_si256(run, run)) return true;
    }
    const std::size_t words = word_count(bits);
    for (; i < words; ++i) {
        std::uint64_t run = zeros_word(v, bits, i);
        for (int s = 1; s <= k && run; ++s) run &= zeros_shifted_down(v, bits, i, s);
        if (run) return true;
    }
    return false;
}

}  // namespace rllfb::kernels::avx2
