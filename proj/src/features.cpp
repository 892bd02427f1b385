#include "armauth/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "armauth/error.hpp"
#include "armauth/simd.hpp"

namespace armauth {

namespace {

constexpr std::array<FeatureBase, 12> kAllBases{FeatureBase::API, FeatureBase::BAP, FeatureBase::ENG,
                                                FeatureBase::MED, FeatureBase::NOP, FeatureBase::RNG,
                                                FeatureBase::MDF, FeatureBase::SPE, FeatureBase::MST,
                                                FeatureBase::NMSP, FeatureBase::MRA, FeatureBase::MRR};

constexpr std::array<FeatureBase, 8> kAccBases{FeatureBase::API, FeatureBase::BAP, FeatureBase::ENG, FeatureBase::MED,
                                               FeatureBase::NOP, FeatureBase::RNG, FeatureBase::MDF, FeatureBase::SPE};

constexpr std::array<FeatureBase, 11> kRotBases{FeatureBase::API, FeatureBase::BAP, FeatureBase::ENG,
                                                FeatureBase::MED, FeatureBase::RNG, FeatureBase::MDF,
                                                FeatureBase::SPE, FeatureBase::MST, FeatureBase::NMSP,
                                                FeatureBase::MRA, FeatureBase::MRR};

template <std::size_t N>
FeatureLayout make_layout(const std::array<FeatureBase, N>& bases, Modality m) {
    std::vector<FeatureId> ids;
    ids.reserve(N * 4);
    for (auto b : bases)
        for (auto a : kAllAxes) ids.push_back({b, a, m});
    return FeatureLayout(std::move(ids));
}

}  // namespace

std::string_view base_name(FeatureBase b) noexcept {
    switch (b) {
        case FeatureBase::API: return "API";
        case FeatureBase::BAP: return "BAP";
        case FeatureBase::ENG: return "ENG";
        case FeatureBase::MED: return "MED";
        case FeatureBase::NOP: return "NOP";
        case FeatureBase::RNG: return "RNG";
        case FeatureBase::MDF: return "MDF";
        case FeatureBase::SPE: return "SPE";
        case FeatureBase::MST: return "MST";
        case FeatureBase::NMSP: return "NMSP";
        case FeatureBase::MRA: return "MRA";
        case FeatureBase::MRR: return "MRR";
    }
    return "?";
}

std::string_view modality_name(Modality m) noexcept { return m == Modality::Acc ? "acc" : "rot"; }

bool FeatureId::valid() const noexcept {
    switch (base) {
        case FeatureBase::NOP: return modality == Modality::Acc;
        case FeatureBase::MST:
        case FeatureBase::NMSP:
        case FeatureBase::MRA:
        case FeatureBase::MRR: return modality == Modality::Rot;
        default: return true;
    }
}

std::string FeatureId::name() const {
    std::string s(base_name(base));
    s += '_';
    s += axis_name(axis);
    return s;
}

std::string FeatureId::qualified_name() const {
    std::string s(modality_name(modality));
    s += '.';
    s += name();
    return s;
}

FeatureId FeatureId::parse(std::string_view name, Modality modality) {
    const auto us = name.rfind('_');
    if (us == std::string_view::npos || us + 2 != name.size())
        throw InvalidInput("malformed feature name '" + std::string(name) + "'");
    const auto base_txt = name.substr(0, us);
    const char axis_ch = name[us + 1];
    FeatureId id;
    id.modality = modality;
    bool found = false;
    for (auto b : kAllBases)
        if (base_name(b) == base_txt) {
            id.base = b;
            found = true;
        }
    if (!found) throw InvalidInput("unknown feature base '" + std::string(base_txt) + "'");
    switch (axis_ch) {
        case 'X': id.axis = Axis::X; break;
        case 'Y': id.axis = Axis::Y; break;
        case 'Z': id.axis = Axis::Z; break;
        case 'M': id.axis = Axis::M; break;
        default: throw InvalidInput("unknown axis in feature name '" + std::string(name) + "'");
    }
    if (!id.valid()) throw InvalidInput("feature '" + std::string(name) + "' does not exist for this modality");
    return id;
}

FeatureId FeatureId::parse_qualified(std::string_view text) {
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) throw InvalidInput("feature id '" + std::string(text) + "' lacks a modality");
    const auto mod = text.substr(0, dot);
    Modality m;
    if (mod == "acc")
        m = Modality::Acc;
    else if (mod == "rot")
        m = Modality::Rot;
    else
        throw InvalidInput("unknown modality '" + std::string(mod) + "'");
    return parse(text.substr(dot + 1), m);
}

std::optional<std::size_t> FeatureLayout::index_of(const FeatureId& id) const noexcept {
    const auto it = std::find(ids_->begin(), ids_->end(), id);
    if (it == ids_->end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids_->begin());
}

const FeatureLayout& acc_layout() {
    static const FeatureLayout layout = make_layout(kAccBases, Modality::Acc);
    return layout;
}

const FeatureLayout& rot_layout() {
    static const FeatureLayout layout = make_layout(kRotBases, Modality::Rot);
    return layout;
}

const FeatureLayout& fused_layout() {
    static const FeatureLayout layout = [] {
        std::vector<FeatureId> ids = acc_layout().ids();
        ids.insert(ids.end(), rot_layout().begin(), rot_layout().end());
        return FeatureLayout(std::move(ids));
    }();
    return layout;
}

const FeatureLayout& layout_for(LayoutKind kind) {
    switch (kind) {
        case LayoutKind::Acc32: return acc_layout();
        case LayoutKind::Rot44: return rot_layout();
        case LayoutKind::Fused: return fused_layout();
    }
    return fused_layout();
}

std::vector<std::size_t> projection_indices(const FeatureLayout& from, const FeatureLayout& to) {
    std::vector<std::size_t> idx;
    idx.reserve(to.size());
    for (const auto& id : to) {
        const auto pos = from.index_of(id);
        if (!pos) throw InvalidInput("feature " + id.qualified_name() + " is not present in the source layout");
        idx.push_back(*pos);
    }
    return idx;
}

FeatureVector project(const FeatureVector& fv, const FeatureLayout& subset, std::span<const std::size_t> indices) {
    FeatureVector out;
    out.layout = subset;
    out.provenance = fv.provenance;
    out.values.reserve(indices.size());
    for (auto i : indices) out.values.push_back(fv.values.at(i));
    return out;
}

FeatureVector project(const FeatureVector& fv, const FeatureLayout& subset) {
    if (fv.layout == subset) return fv;
    return project(fv, subset, projection_indices(fv.layout, subset));
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> find_peaks(std::span<const double> series, const PeakConfig& cfg) {
    const std::size_t n = series.size();
    if (n < 3) throw InvalidInput("peak detection needs at least three samples");

    std::vector<std::size_t> candidates;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (series[i] > series[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && series[j + 1] == series[i]) ++j;
            if (j + 1 < n && series[j + 1] < series[i]) {
                if (series[i] >= cfg.min_height) candidates.push_back(i);
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (cfg.min_distance <= 1 || candidates.size() < 2) return candidates;

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return series[candidates[a]] > series[candidates[b]]; });
    std::vector<bool> keep(candidates.size(), false);
    std::vector<bool> blocked(n, false);
    const std::size_t d = cfg.min_distance;
    for (auto o : order) {
        const std::size_t p = candidates[o];
        if (blocked[p]) continue;
        keep[o] = true;
        const std::size_t lo = p >= d - 1 ? p - (d - 1) : 0;
        const std::size_t hi = std::min(n - 1, p + (d - 1));
        for (std::size_t k = lo; k <= hi; ++k) blocked[k] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < candidates.size(); ++k)
        if (keep[k]) out.push_back(candidates[k]);
    return out;
}

std::vector<std::size_t> find_troughs(std::span<const double> series) {
    std::vector<std::size_t> out;
    const std::size_t n = series.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (series[i] < series[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && series[j + 1] == series[i]) ++j;
            if (j + 1 < n && series[j + 1] > series[i]) out.push_back(i);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

double median(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("median of an empty sequence");
    std::vector<double> v(values.begin(), values.end());
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

double average_peak_interval(std::span<const std::size_t> peaks, double fallback) {
    if (peaks.size() < 2) return fallback;
    // Telescoping sum of gaps.
    return static_cast<double>(peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

TimeDomainFeatures time_domain_features(std::span<const double> channel, const PeakConfig& api_peaks) {
    if (channel.size() < 3) throw InvalidInput("time-domain features need at least three samples");
    TimeDomainFeatures f;
    const auto peaks = find_peaks(channel, api_peaks);
    f.api = average_peak_interval(peaks, static_cast<double>(channel.size()));
    f.nop = static_cast<double>(peaks.size());
    f.eng = simd::sum_squares(channel);
    f.med = median(channel);
    const auto [lo, hi] = std::minmax_element(channel.begin(), channel.end());
    f.rng = *hi - *lo;
    return f;
}

double spectral_entropy(std::span<const double> power) {
    if (power.size() < 2) return 0.0;
    double total = 0.0;
    for (double p : power) total += p;
    if (!(total > 0.0)) return 0.0;
    // A flat distribution has entropy log(N) exactly; the generic sum below
    // can land an ulp away from it.
    if (std::all_of(power.begin(), power.end(), [&](double p) { return p == power[0]; })) return 1.0;
    double h = 0.0;
    for (double p : power) {
        if (p <= 0.0) continue;
        const double q = p / total;
        h -= q * std::log(q);
    }
    return std::clamp(h / std::log(static_cast<double>(power.size())), 0.0, 1.0);
}

double median_frequency(const Spectrum& spectrum) {
    if (!(spectrum.total_power > 0.0) || spectrum.power.empty()) return 0.0;
    const double half = 0.5 * spectrum.total_power;
    double cum_prev = 0.0;
    for (std::size_t k = 0; k < spectrum.power.size(); ++k) {
        const double cum = cum_prev + spectrum.power[k];
        if (cum >= half) {
            if (k == 0) return spectrum.freqs[0];
            const double u = (half - cum_prev) / (cum - cum_prev);
            return spectrum.freqs[k - 1] + u * (spectrum.freqs[k] - spectrum.freqs[k - 1]);
        }
        cum_prev = cum;
    }
    return spectrum.freqs.back();
}

FreqDomainFeatures freq_domain_features(const Spectrum& spectrum) {
    FreqDomainFeatures f;
    f.bap = spectrum.total_power;
    f.mdf = median_frequency(spectrum);
    f.spe = spectral_entropy(spectrum.power);
    return f;
}

FreqDomainFeatures freq_domain_features(std::span<const double> channel, double fs) {
    return freq_domain_features(power_spectrum(channel, fs));
}

GaitFeatures rotation_gait_features(std::span<const double> channel, const PeakConfig& mid_swing, double fs) {
    if (channel.size() < 3) throw InvalidInput("gait features need at least three samples");
    if (!(fs > 0.0)) throw InvalidInput("sample rate must be positive");
    GaitFeatures g;
    const auto ms = find_peaks(channel, mid_swing);
    g.nmsp = static_cast<double>(ms.size());

    // Initial contact: first local minimum after each mid-swing point.
    const auto troughs = find_troughs(channel);
    std::vector<std::size_t> ics;
    for (auto p : ms) {
        const auto it = std::upper_bound(troughs.begin(), troughs.end(), p);
        if (it == troughs.end()) continue;
        if (ics.empty() || ics.back() != *it) ics.push_back(*it);
    }

    const double window_s = static_cast<double>(channel.size()) / fs;
    if (ics.size() >= 2) {
        std::vector<double> gaps;
        gaps.reserve(ics.size() - 1);
        for (std::size_t k = 1; k < ics.size(); ++k) gaps.push_back(static_cast<double>(ics[k] - ics[k - 1]));
        g.mst = median(gaps) / fs;
    } else {
        g.mst = window_s;
        g.degenerate = true;
    }

    std::vector<double> segment_means;
    for (std::size_t k = 1; k < ms.size(); ++k) {
        const std::size_t a = ms[k - 1], b = ms[k];
        if (b - a < 2) continue;
        double acc = 0.0;
        for (std::size_t j = a + 1; j < b; ++j) acc += std::abs(channel[j]);
        segment_means.push_back(acc / static_cast<double>(b - a - 1));
    }
    if (!segment_means.empty()) {
        g.mrr = std::accumulate(segment_means.begin(), segment_means.end(), 0.0) /
                static_cast<double>(segment_means.size());
    } else {
        double acc = 0.0;
        for (double v : channel) acc += std::abs(v);
        g.mrr = acc / static_cast<double>(channel.size());
        g.degenerate = true;
    }
    g.mra = g.mrr * g.mst;
    return g;
}

namespace {

struct ChannelFeatures {
    std::array<double, 12> by_base{};
    bool degenerate_gait = false;

    double get(FeatureBase b) const noexcept { return by_base[static_cast<int>(b)]; }
};

ChannelFeatures channel_features(std::span<const double> ch, Modality m, const ExtractionConfig& cfg) {
    ChannelFeatures out;
    auto set = [&](FeatureBase b, double v) { out.by_base[static_cast<int>(b)] = v; };
    const auto td = time_domain_features(ch, cfg.api_peaks);
    const auto fd = freq_domain_features(ch, cfg.fs);
    set(FeatureBase::API, td.api);
    set(FeatureBase::ENG, td.eng);
    set(FeatureBase::MED, td.med);
    set(FeatureBase::NOP, td.nop);
    set(FeatureBase::RNG, td.rng);
    set(FeatureBase::BAP, fd.bap);
    set(FeatureBase::MDF, fd.mdf);
    set(FeatureBase::SPE, fd.spe);
    if (m == Modality::Rot) {
        const auto g = rotation_gait_features(ch, cfg.mid_swing, cfg.fs);
        set(FeatureBase::NMSP, g.nmsp);
        set(FeatureBase::MST, g.mst);
        set(FeatureBase::MRR, g.mrr);
        set(FeatureBase::MRA, g.mra);
        out.degenerate_gait = g.degenerate;
    }
    return out;
}

void append_modality(const Window& w, Modality m, const FeatureLayout& layout, const ExtractionConfig& cfg,
                     FeatureVector& fv) {
    std::array<ChannelFeatures, 4> per_axis;
    for (auto a : kAllAxes) {
        per_axis[static_cast<int>(a)] = channel_features(w.channel(a), m, cfg);
        fv.provenance.degenerate_gait |= per_axis[static_cast<int>(a)].degenerate_gait;
    }
    for (const auto& id : layout) fv.values.push_back(per_axis[static_cast<int>(id.axis)].get(id.base));
}

}  // namespace

FeatureVector extract_feature_vector(const Window* acc, const Window* rot, LayoutKind kind,
                                     const ExtractionConfig& cfg) {
    const bool need_acc = kind != LayoutKind::Rot44;
    const bool need_rot = kind != LayoutKind::Acc32;
    if (need_acc && !acc) throw InvalidInput("layout requires an acceleration window");
    if (need_rot && !rot) throw InvalidInput("layout requires a rotation window");
    if (need_acc && need_rot && (acc->key != rot->key || acc->start_index != rot->start_index))
        throw InvalidInput("acceleration and rotation windows describe different segments");

    FeatureVector fv;
    fv.layout = layout_for(kind);
    fv.values.reserve(fv.layout.size());
    const Window& ref = need_acc ? *acc : *rot;
    fv.provenance.key = ref.key;
    fv.provenance.window_start = ref.start_index;
    if (need_acc) append_modality(*acc, Modality::Acc, acc_layout(), cfg, fv);
    if (need_rot) append_modality(*rot, Modality::Rot, rot_layout(), cfg, fv);
    return fv;
}

}  // namespace armauth
