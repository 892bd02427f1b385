#pragma once

// Ingestion, smoothing, magnitude derivation and sliding-window segmentation
// of tri-axial sensor streams.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace armauth {

enum class SensorKind { Accelerometer, Gyroscope };

enum class Axis { X = 0, Y = 1, Z = 2, M = 3 };
inline constexpr std::array<Axis, 4> kAllAxes{Axis::X, Axis::Y, Axis::Z, Axis::M};
std::string_view axis_name(Axis a) noexcept;

inline constexpr double kNominalRateHz = 25.0;

struct SensorSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Uniformly sampled stream: channels x, y, z and the derived magnitude m.
struct TimeSeries {
    SensorKind sensor_kind = SensorKind::Accelerometer;
    double sample_rate_hz = kNominalRateHz;
    std::array<std::vector<double>, 4> channels;

    std::size_t size() const noexcept { return channels[0].size(); }
    const std::vector<double>& channel(Axis a) const noexcept { return channels[static_cast<int>(a)]; }
};

struct SmoothingConfig {
    std::size_t points = 5;
};

struct WindowConfig {
    std::size_t w_size_samples = 250;
    std::size_t s_interval_samples = 100;

    /// Converts seconds to samples at the given rate (rounded to nearest).
    static WindowConfig from_seconds(double w_size_s, double s_interval_s, double fs = kNominalRateHz);
    void validate() const;
};

/// Identifies one recording: (user, phase, session).
struct SessionKey {
    int user_id = 0;
    int phase = 1;
    int session = 1;

    friend bool operator==(const SessionKey&, const SessionKey&) = default;
    friend auto operator<=>(const SessionKey&, const SessionKey&) = default;
};

struct Window {
    SessionKey key;
    std::size_t start_index = 0;
    std::array<std::vector<double>, 4> channels;

    std::size_t size() const noexcept { return channels[0].size(); }
    std::span<const double> channel(Axis a) const noexcept { return channels[static_cast<int>(a)]; }
};

/// Equally weighted trailing moving average; output has N - (p - 1) samples,
/// out[i] = mean(in[i .. i+p-1]).
std::vector<double> smooth_moving_average(std::span<const double> series, SmoothingConfig cfg);

std::vector<double> derive_magnitude(std::span<const double> x, std::span<const double> y, std::span<const double> z);

/// Builds a TimeSeries from raw axes, deriving the magnitude channel.
TimeSeries make_time_series(SensorKind kind, double fs, std::vector<double> x, std::vector<double> y,
                            std::vector<double> z);

/// Smooths x, y and z, then re-derives m from the smoothed axes.
TimeSeries preprocess(const TimeSeries& raw, SmoothingConfig cfg);

/// Windows start at 0, s, 2s, ...; trailing partial data is dropped.
std::vector<Window> segment_windows(const TimeSeries& ts, const WindowConfig& cfg, SessionKey key = {});

/// Number of windows segment_windows would produce for n samples (0 if n < w).
std::size_t window_count(std::size_t n, const WindowConfig& cfg) noexcept;

/// Adopts the samples as a uniform stream at target_hz when every gap is
/// within 50% of the nominal period; otherwise linearly interpolates onto a
/// uniform grid starting at the first timestamp.
TimeSeries validate_and_resample(std::span<const SensorSample> samples, double target_hz,
                                 SensorKind kind = SensorKind::Accelerometer);

/// Largest relative deviation of a sample gap from 1/target_hz.
double max_gap_deviation(std::span<const SensorSample> samples, double target_hz);

}  // namespace armauth
