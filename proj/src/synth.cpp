#include "armauth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "armauth/error.hpp"
#include "armauth/io.hpp"
#include "armauth/rng.hpp"

namespace armauth::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGravity = 9.81;
constexpr std::uint64_t kDriftTag = 11;
constexpr std::uint64_t kNoiseTag = 12;
// Gyro amplitudes stay above the mid-swing height even after drift.
constexpr double kRotAmpMin = 50.0;
constexpr double kRotAmpMax = 90.0;

double unit_wave(const AxisWave& a, double phi) {
    double v = 0.0;
    for (std::size_t k = 0; k < a.harmonic_weights.size(); ++k)
        v += a.harmonic_weights[k] * std::sin(static_cast<double>(k + 1) * phi + a.harmonic_phases[k]);
    return v;
}

AxisWave draw_axis(Rng& rng, std::size_t harmonics, double amp_lo, double amp_hi, double offset) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    AxisWave a;
    a.amplitude = amp_lo + (amp_hi - amp_lo) * u01(rng);
    a.offset = offset;
    a.harmonic_weights.push_back(1.0);
    a.harmonic_phases.push_back(kTwoPi * u01(rng));
    for (std::size_t k = 1; k < harmonics; ++k) {
        a.harmonic_weights.push_back(0.1 + 0.3 * u01(rng) / static_cast<double>(k));
        a.harmonic_phases.push_back(kTwoPi * u01(rng));
    }
    double mx = 0.0;
    for (int i = 0; i < 2048; ++i) mx = std::max(mx, unit_wave(a, kTwoPi * i / 2048.0));
    a.norm = mx;
    return a;
}

struct Drift {
    std::array<double, 3> acc_amp{1, 1, 1}, rot_amp{1, 1, 1}, acc_off{1, 1, 1};
    double cadence = 1.0;

    void apply(Rng& rng, double scale) {
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto& v : acc_amp) v *= std::max(0.2, 1.0 + scale * g(rng));
        for (auto& v : rot_amp) v *= std::max(0.2, 1.0 + scale * g(rng));
        for (auto& v : acc_off) v *= 1.0 + scale * g(rng);
        cadence *= std::max(0.5, 1.0 + 0.2 * scale * g(rng));
    }
};

}  // namespace

UserGaitParams generate_user(const GeneratorConfig& cfg, int user_index) {
    if (cfg.noise_std < 0.0 || cfg.session_drift < 0.0 || cfg.phase_drift < 0.0)
        throw InvalidInput("noise and drift scales must be non-negative");
    UserGaitParams p;
    p.seed = cfg.seed;
    p.user_id = user_index;
    p.noise_std = cfg.noise_std;
    p.session_drift = cfg.session_drift;
    p.phase_drift = cfg.phase_drift;

    Rng rng(derive_seed(cfg.seed, {seed_tag::kSynth, static_cast<std::uint64_t>(user_index)}));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    p.cadence_hz = 0.7 + 0.6 * u01(rng);
    const std::size_t harmonics = u01(rng) < 0.5 ? 2 : 3;

    // Watch orientation sets how gravity splits over the axes.
    std::normal_distribution<double> g(0.0, 1.0);
    std::array<double, 3> dir{g(rng), g(rng), g(rng)};
    const double len = std::hypot(dir[0], dir[1], dir[2]);
    for (std::size_t a = 0; a < 3; ++a) p.acc[a] = draw_axis(rng, harmonics, 1.0, 5.0, kGravity * dir[a] / len);
    for (std::size_t a = 0; a < 3; ++a) p.rot[a] = draw_axis(rng, harmonics, kRotAmpMin, kRotAmpMax, 0.0);
    return p;
}

SessionStreams generate_session_samples(const UserGaitParams& p, int phase, int session, double duration_s,
                                        double fs) {
    if (phase < 1 || phase > 2 || session < 1 || session > 2) throw InvalidInput("phase and session must be 1 or 2");
    if (!(fs > 0.0) || !(duration_s > 0.0)) throw InvalidInput("duration and rate must be positive");
    const auto uid = static_cast<std::uint64_t>(p.user_id);

    Drift drift;
    if (phase == 2) {
        Rng r(derive_seed(p.seed, {seed_tag::kSynth, uid, kDriftTag, 2}));
        drift.apply(r, p.phase_drift);
    }
    if (session == 2) {
        Rng r(derive_seed(p.seed, {seed_tag::kSynth, uid, kDriftTag, static_cast<std::uint64_t>(phase), 2}));
        drift.apply(r, p.session_drift);
    }

    Rng rng(derive_seed(p.seed, {seed_tag::kSession, uid, static_cast<std::uint64_t>(phase),
                                 static_cast<std::uint64_t>(session), kNoiseTag}));
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    // slow cadence wander, proportional to the noise level
    const double wander = 0.2 * p.noise_std;
    const double wander_period = 20.0 + 20.0 * u01(rng);
    const double wander_phase = kTwoPi * u01(rng);

    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
    SessionStreams out;
    out.acc.resize(n);
    out.rot.resize(n);
    double phi = 0.0;
    const double dt = 1.0 / fs;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        double av[3], rv[3];
        for (std::size_t a = 0; a < 3; ++a) {
            const auto& aw = p.acc[a];
            const double amp = aw.amplitude * drift.acc_amp[a];
            av[a] = aw.offset * drift.acc_off[a] + amp * unit_wave(aw, phi) / aw.norm + p.noise_std * amp * g(rng);
            const auto& rw = p.rot[a];
            const double ramp = std::max(kRotAmpMin, rw.amplitude * drift.rot_amp[a]);
            rv[a] = ramp * unit_wave(rw, phi) / rw.norm + p.noise_std * ramp * g(rng);
        }
        out.acc[i] = {t, av[0], av[1], av[2]};
        out.rot[i] = {t, rv[0], rv[1], rv[2]};
        const double cadence =
            p.cadence_hz * drift.cadence * (1.0 + wander * std::sin(kTwoPi * t / wander_period + wander_phase));
        phi += kTwoPi * cadence * dt;
    }
    return out;
}

namespace {

TimeSeries to_series(const std::vector<SensorSample>& s, SensorKind kind, double fs) {
    std::vector<double> x(s.size()), y(s.size()), z(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        x[i] = s[i].x;
        y[i] = s[i].y;
        z[i] = s[i].z;
    }
    return make_time_series(kind, fs, std::move(x), std::move(y), std::move(z));
}

}  // namespace

std::pair<TimeSeries, TimeSeries> generate_session(const UserGaitParams& p, int phase, int session, double duration_s,
                                                   double fs) {
    const auto s = generate_session_samples(p, phase, session, duration_s, fs);
    return {to_series(s.acc, SensorKind::Accelerometer, fs), to_series(s.rot, SensorKind::Gyroscope, fs)};
}

Dataset generate_dataset(const GeneratorConfig& cfg) {
    if (cfg.users < 1) throw InvalidInput("need at least one user");
    Dataset data;
    for (int u = 1; u <= cfg.users; ++u) {
        const auto p = generate_user(cfg, u);
        for (int phase = 1; phase <= 2; ++phase)
            for (int session = 1; session <= 2; ++session) {
                SessionRecording rec;
                rec.key = {u, phase, session};
                std::tie(rec.acc, rec.rot) = generate_session(p, phase, session, cfg.duration_s, cfg.fs);
                data.sessions.emplace(rec.key, std::move(rec));
            }
    }
    return data;
}

namespace {

nlohmann::json axis_json(const AxisWave& a) {
    return {{"amplitude", a.amplitude},
            {"offset", a.offset},
            {"harmonic_weights", a.harmonic_weights},
            {"harmonic_phases", a.harmonic_phases},
            {"norm", a.norm}};
}

std::vector<double> amplitude_vector(const UserGaitParams& p) {
    std::vector<double> v;
    for (const auto& a : p.acc) v.push_back(a.amplitude);
    for (const auto& a : p.rot) v.push_back(a.amplitude);
    return v;
}

}  // namespace

std::string manifest_json(const GeneratorConfig& cfg, const std::vector<UserGaitParams>& users) {
    using nlohmann::json;
    json doc{{"seed", cfg.seed},
             {"users", cfg.users},
             {"duration_s", cfg.duration_s},
             {"fs", cfg.fs},
             {"noise_std", cfg.noise_std},
             {"session_drift", cfg.session_drift},
             {"phase_drift", cfg.phase_drift}};
    json params = json::array();
    for (const auto& p : users) {
        json acc = json::array(), rot = json::array();
        for (const auto& a : p.acc) acc.push_back(axis_json(a));
        for (const auto& a : p.rot) rot.push_back(axis_json(a));
        params.push_back({{"user_id", p.user_id}, {"cadence_hz", p.cadence_hz}, {"acc", acc}, {"rot", rot}});
    }
    doc["params"] = params;
    json pairs = json::array();
    for (std::size_t i = 0; i < users.size(); ++i)
        for (std::size_t j = i + 1; j < users.size(); ++j) {
            const auto a = amplitude_vector(users[i]), b = amplitude_vector(users[j]);
            double d2 = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
            pairs.push_back({{"a", users[i].user_id},
                             {"b", users[j].user_id},
                             {"cadence_gap", std::abs(users[i].cadence_hz - users[j].cadence_hz)},
                             {"amplitude_distance", std::sqrt(d2)}});
        }
    doc["pairs"] = pairs;
    return doc.dump(1);
}

void write_dataset(const GeneratorConfig& cfg, const std::filesystem::path& root) {
    std::vector<UserGaitParams> users;
    for (int u = 1; u <= cfg.users; ++u) {
        users.push_back(generate_user(cfg, u));
        for (int phase = 1; phase <= 2; ++phase)
            for (int session = 1; session <= 2; ++session) {
                const auto s = generate_session_samples(users.back(), phase, session, cfg.duration_s, cfg.fs);
                save_recording(root, {u, phase, session}, s.acc, s.rot);
            }
    }
    write_file_atomic(root / "manifest.json", manifest_json(cfg, users));
}

}  // namespace armauth::synth
