#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Word-parallel kernels over bit-packed vectors. Bit i of a vector lives in word i / 64 at
// position i % 64; bits at or beyond the logical length must be zero.
namespace rllfb::kernels {

struct Ops {
    void (*xor_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
    std::uint64_t (*popcount)(const std::uint64_t* v, std::size_t words);
    /// True iff every set bit of a is set in b.
    bool (*subset_of)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
    /// True iff two set bits lie at distance 1..d (1 <= d <= 63).
    bool (*has_close_ones)(const std::uint64_t* v, std::size_t bits, int d);
    /// True iff some run of zeros inside [0, bits) is longer than k (0 <= k <= 62).
    bool (*has_zero_run_longer)(const std::uint64_t* v, std::size_t bits, int k);
};

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b);

const Ops& scalar_ops();
/// nullptr when the AVX2 variants were not compiled in.
const Ops* avx2_ops();

/// Chosen once: AVX2 when the CPU supports it, unless RLLFB_KERNELS=scalar.
Backend active_backend();
const Ops& ops();

}  // namespace rllfb::kernels
