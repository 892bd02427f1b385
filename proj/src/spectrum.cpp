#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "armauth/error.hpp"
#include "armauth/features.hpp"
#include "armauth/simd.hpp"

namespace armauth {
namespace {

// cos/sin rows of the real DFT for k = 0 .. n/2, row-major.
struct Twiddles {
    std::size_t n = 0;
    std::size_t bins = 0;
    std::vector<double> cos_rows;
    std::vector<double> sin_rows;
};

std::shared_ptr<const Twiddles> build_twiddles(std::size_t n) {
    auto tw = std::make_shared<Twiddles>();
    tw->n = n;
    tw->bins = n / 2 + 1;
    tw->cos_rows.resize(tw->bins * n);
    tw->sin_rows.resize(tw->bins * n);
    for (std::size_t k = 0; k < tw->bins; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            // Reduce k*j mod n first so the angle stays in [0, 2pi).
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
            tw->cos_rows[k * n + j] = std::cos(angle);
            tw->sin_rows[k * n + j] = std::sin(angle);
        }
    }
    return tw;
}

std::shared_ptr<const Twiddles> twiddles_for(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const Twiddles>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = build_twiddles(n);
    return slot;
}

}  // namespace

Spectrum power_spectrum(std::span<const double> series, double fs) {
    const std::size_t n = series.size();
    if (n < 2) throw InvalidInput("power spectrum needs at least two samples");
    if (!(fs > 0.0)) throw InvalidInput("sample rate must be positive");

    const auto tw = twiddles_for(n);
    const auto& kern = simd::active();
    Spectrum sp;
    sp.freqs.resize(tw->bins);
    sp.power.resize(tw->bins);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t k = 0; k < tw->bins; ++k) {
        double re = 0.0, im = 0.0;
        kern.dot_pair(series.data(), tw->cos_rows.data() + k * n, tw->sin_rows.data() + k * n, n, &re, &im);
        const double mag2 = re * re + im * im;
        const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
        sp.power[k] = (unpaired ? 1.0 : 2.0) * mag2 / n2;
        sp.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(n);
    }
    double total = 0.0;
    for (double p : sp.power) total += p;
    sp.total_power = total;
    return sp;
}

}  // namespace armauth
