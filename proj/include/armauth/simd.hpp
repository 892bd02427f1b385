#pragma once

// Data-parallel inner loops used by the spectrum, the kNN scan and the
// neural-network layers. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2+FMA variant. The variant is selected once at
// startup from CPUID; setting ARMAUTH_SIMD=scalar in the environment forces
// the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace armauth::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // Returns sum(x*c) in *re and sum(x*s) in *im with one pass over x.
    void (*dot_pair)(const double* x, const double* c, const double* s, std::size_t n, double* re, double* im);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    double (*sum_squares)(const double* a, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels() noexcept;
bool cpu_has_avx2() noexcept;

// Table picked at startup.
const KernelTable& active() noexcept;
std::string_view isa_name(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    return active().squared_distance(a.data(), b.data(), a.size());
}
inline double sum_squares(std::span<const double> a) noexcept {
    return active().sum_squares(a.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace armauth::simd
