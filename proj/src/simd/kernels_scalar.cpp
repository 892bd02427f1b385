#include "armauth/simd.hpp"

namespace armauth::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void dot_pair_scalar(const double* x, const double* c, const double* s, std::size_t n, double* re, double* im) {
    double r = 0.0, q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r += x[i] * c[i];
        q += x[i] * s[i];
    }
    *re = r;
    *im = q;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double sum_squares_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalar{Isa::Scalar, dot_scalar, dot_pair_scalar, squared_distance_scalar,
                              sum_squares_scalar, axpy_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace armauth::simd
