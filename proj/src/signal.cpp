#include "armauth/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "armauth/error.hpp"

namespace armauth {

std::string_view axis_name(Axis a) noexcept {
    switch (a) {
        case Axis::X: return "X";
        case Axis::Y: return "Y";
        case Axis::Z: return "Z";
        case Axis::M: return "M";
    }
    return "?";
}

WindowConfig WindowConfig::from_seconds(double w_size_s, double s_interval_s, double fs) {
    if (!(w_size_s > 0.0) || !(s_interval_s > 0.0) || !(fs > 0.0))
        throw InvalidInput("window and slide durations must be positive");
    WindowConfig cfg;
    cfg.w_size_samples = static_cast<std::size_t>(std::llround(w_size_s * fs));
    cfg.s_interval_samples = static_cast<std::size_t>(std::llround(s_interval_s * fs));
    cfg.validate();
    return cfg;
}

void WindowConfig::validate() const {
    if (w_size_samples == 0 || s_interval_samples == 0)
        throw InvalidInput("window size and slide interval must be at least one sample");
    if (s_interval_samples > w_size_samples)
        throw InvalidInput("slide interval " + std::to_string(s_interval_samples) + " exceeds window size " +
                           std::to_string(w_size_samples));
}

std::vector<double> smooth_moving_average(std::span<const double> series, SmoothingConfig cfg) {
    const std::size_t p = cfg.points;
    if (p == 0) throw InvalidInput("moving average needs p >= 1");
    if (series.size() < p)
        throw InvalidInput("series of length " + std::to_string(series.size()) + " is shorter than p = " +
                           std::to_string(p));
    const std::size_t n_out = series.size() - (p - 1);
    std::vector<double> out(n_out);
    // Each output is summed directly rather than with a running sum so the
    // result is shift-equivariant bit for bit.
    const auto denom = static_cast<double>(p);
    for (std::size_t i = 0; i < n_out; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < p; ++j) acc += series[i + j];
        out[i] = acc / denom;
    }
    return out;
}

std::vector<double> derive_magnitude(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> z) {
    if (x.size() != y.size() || x.size() != z.size())
        throw InvalidInput("axis lengths differ: " + std::to_string(x.size()) + ", " + std::to_string(y.size()) +
                           ", " + std::to_string(z.size()));
    std::vector<double> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        // Sorted summation keeps the result invariant under axis permutation.
        std::array<double, 3> sq{x[i] * x[i], y[i] * y[i], z[i] * z[i]};
        std::sort(sq.begin(), sq.end());
        m[i] = std::sqrt(sq[0] + sq[1] + sq[2]);
    }
    return m;
}

TimeSeries make_time_series(SensorKind kind, double fs, std::vector<double> x, std::vector<double> y,
                            std::vector<double> z) {
    if (!(fs > 0.0)) throw InvalidInput("sample rate must be positive");
    TimeSeries ts;
    ts.sensor_kind = kind;
    ts.sample_rate_hz = fs;
    ts.channels[3] = derive_magnitude(x, y, z);
    ts.channels[0] = std::move(x);
    ts.channels[1] = std::move(y);
    ts.channels[2] = std::move(z);
    return ts;
}

TimeSeries preprocess(const TimeSeries& raw, SmoothingConfig cfg) {
    return make_time_series(raw.sensor_kind, raw.sample_rate_hz, smooth_moving_average(raw.channels[0], cfg),
                            smooth_moving_average(raw.channels[1], cfg), smooth_moving_average(raw.channels[2], cfg));
}

std::size_t window_count(std::size_t n, const WindowConfig& cfg) noexcept {
    if (cfg.w_size_samples == 0 || cfg.s_interval_samples == 0 || n < cfg.w_size_samples) return 0;
    return (n - cfg.w_size_samples) / cfg.s_interval_samples + 1;
}

std::vector<Window> segment_windows(const TimeSeries& ts, const WindowConfig& cfg, SessionKey key) {
    cfg.validate();
    const std::size_t n = ts.size();
    if (n < cfg.w_size_samples)
        throw InvalidInput("series of " + std::to_string(n) + " samples is shorter than one window (" +
                           std::to_string(cfg.w_size_samples) + ")");
    const std::size_t count = window_count(n, cfg);
    std::vector<Window> windows;
    windows.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Window w;
        w.key = key;
        w.start_index = k * cfg.s_interval_samples;
        for (int c = 0; c < 4; ++c) {
            const auto& src = ts.channels[c];
            const auto first = src.begin() + static_cast<std::ptrdiff_t>(w.start_index);
            w.channels[c].assign(first, first + static_cast<std::ptrdiff_t>(cfg.w_size_samples));
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

namespace {

void check_samples(std::span<const SensorSample> samples) {
    if (samples.size() < 2) throw InvalidInput("need at least two samples, got " + std::to_string(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.t) || !std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z))
            throw InvalidInput("non-finite value in sample " + std::to_string(i));
        if (i > 0 && s.t < samples[i - 1].t)
            throw InvalidInput("timestamps decrease at sample " + std::to_string(i));
    }
}

}  // namespace

double max_gap_deviation(std::span<const SensorSample> samples, double target_hz) {
    const double period = 1.0 / target_hz;
    double worst = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        worst = std::max(worst, std::abs((samples[i].t - samples[i - 1].t) - period) / period);
    return worst;
}

TimeSeries validate_and_resample(std::span<const SensorSample> samples, double target_hz, SensorKind kind) {
    if (!(target_hz > 0.0)) throw InvalidInput("target rate must be positive");
    check_samples(samples);

    std::vector<double> x, y, z;
    if (max_gap_deviation(samples, target_hz) <= 0.5) {
        x.reserve(samples.size());
        y.reserve(samples.size());
        z.reserve(samples.size());
        for (const auto& s : samples) {
            x.push_back(s.x);
            y.push_back(s.y);
            z.push_back(s.z);
        }
        return make_time_series(kind, target_hz, std::move(x), std::move(y), std::move(z));
    }

    const double t0 = samples.front().t;
    const double span_s = samples.back().t - t0;
    const auto n = static_cast<std::size_t>(std::floor(span_s * target_hz + 1e-9)) + 1;
    x.resize(n);
    y.resize(n);
    z.resize(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) / target_hz;
        while (j + 2 < samples.size() && samples[j + 1].t <= t) ++j;
        const auto& a = samples[j];
        const auto& b = samples[j + 1];
        const double dt = b.t - a.t;
        const double u = dt > 0.0 ? std::clamp((t - a.t) / dt, 0.0, 1.0) : 1.0;
        x[i] = a.x + u * (b.x - a.x);
        y[i] = a.y + u * (b.y - a.y);
        z[i] = a.z + u * (b.z - a.z);
    }
    return make_time_series(kind, target_hz, std::move(x), std::move(y), std::move(z));
}

}  // namespace armauth
