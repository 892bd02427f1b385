#include "armauth/simd.hpp"

#include <cstdlib>
#include <string_view>

namespace armauth::simd {

#if !defined(ARMAUTH_HAVE_AVX2)
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif

bool cpu_has_avx2() noexcept {
#if defined(ARMAUTH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable& select() noexcept {
    if (const char* env = std::getenv("ARMAUTH_SIMD"); env && std::string_view(env) == "scalar")
        return scalar_kernels();
    if (cpu_has_avx2() && avx2_kernels()) return *avx2_kernels();
    return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace armauth::simd
