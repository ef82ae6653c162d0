#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace rllfb::kernels {

std::string_view to_string(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

const Ops& scalar_ops() {
    static const Ops ops{scalar::xor_into, scalar::popcount, scalar::subset_of, scalar::has_close_ones,
                         scalar::has_zero_run_longer};
    return ops;
}

const Ops* avx2_ops() {
#ifdef RLLFB_HAVE_AVX2
    static const Ops ops{avx2::xor_into, avx2::popcount, avx2::subset_of, avx2::has_close_ones,
                         avx2::has_zero_run_longer};
    return &ops;
#else
    return nullptr;
#endif
}

Backend active_backend() {
    static const Backend chosen = [] {
        const char* env = std::getenv("RLLFB_KERNELS");
        if (env && std::string_view(env) == "scalar") return Backend::Scalar;
#if defined(RLLFB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
        return Backend::Scalar;
    }();
    return chosen;
}

const Ops& ops() {
    static const Ops& chosen = active_backend() == Backend::Avx2 ? *avx2_ops() : scalar_ops();
    return chosen;
}

}  // namespace rllfb::kernels
