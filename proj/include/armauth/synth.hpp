#pragma once

// Seeded synthetic arm-swing generator: per-user sum-of-harmonics waveforms
// for both sensors, with multiplicative session and phase drift.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "armauth/corpus.hpp"
#include "armauth/signal.hpp"

namespace armauth::synth {

struct AxisWave {
    double amplitude = 1.0;  // peak of the noiseless waveform about `offset`
    double offset = 0.0;
    std::vector<double> harmonic_weights;  // [0] is the fundamental, always 1
    std::vector<double> harmonic_phases;
    double norm = 1.0;  // max of the unit waveform, folded into amplitude
};

struct UserGaitParams {
    std::uint64_t seed = 0;
    int user_id = 0;
    double cadence_hz = 1.0;
    std::array<AxisWave, 3> acc;
    std::array<AxisWave, 3> rot;
    double noise_std = 0.0;  // relative to each axis amplitude
    double session_drift = 0.0;
    double phase_drift = 0.0;
};

struct GeneratorConfig {
    std::uint64_t seed = 42;
    int users = 40;
    double duration_s = 120.0;
    double fs = kNominalRateHz;
    double noise_std = 0.1;
    double session_drift = 0.03;
    double phase_drift = 0.15;
};

/// Deterministic per (cfg.seed, user_id). Datasets number users from 1.
UserGaitParams generate_user(const GeneratorConfig& cfg, int user_id);

struct SessionStreams {
    std::vector<SensorSample> acc;
    std::vector<SensorSample> rot;
};

/// Raw samples at fs for one (phase, session). Session 2 applies session
/// drift; phase 2 additionally applies phase drift.
SessionStreams generate_session_samples(const UserGaitParams& p, int phase, int session, double duration_s,
                                        double fs);

/// Same streams as TimeSeries (magnitude derived).
std::pair<TimeSeries, TimeSeries> generate_session(const UserGaitParams& p, int phase, int session,
                                                   double duration_s = 120.0, double fs = kNominalRateHz);

/// All users, phases 1-2, sessions 1-2.
Dataset generate_dataset(const GeneratorConfig& cfg);

/// JSON record of every drawn parameter plus pairwise cadence gaps and
/// amplitude-vector distances.
std::string manifest_json(const GeneratorConfig& cfg, const std::vector<UserGaitParams>& users);

/// Writes the CSV tree and manifest.json under `root`.
void write_dataset(const GeneratorConfig& cfg, const std::filesystem::path& root);

}  // namespace armauth::synth
