#pragma once

// Per-window feature extraction: 8 acceleration features and 11 rotation
// features on each of the x, y, z and magnitude channels.

#include <compare>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "armauth/signal.hpp"

namespace armauth {

enum class FeatureBase { API, BAP, ENG, MED, NOP, RNG, MDF, SPE, MST, NMSP, MRA, MRR };
enum class Modality { Acc, Rot };

std::string_view base_name(FeatureBase b) noexcept;
std::string_view modality_name(Modality m) noexcept;

struct FeatureId {
    FeatureBase base = FeatureBase::API;
    Axis axis = Axis::X;
    Modality modality = Modality::Acc;

    /// NOP exists only for acceleration; the gait features only for rotation.
    bool valid() const noexcept;
    /// `<BASE>_<AXIS>`, e.g. `MED_Y`.
    std::string name() const;
    /// `acc.MED_Y` / `rot.MRR_Z`; unique across modalities.
    std::string qualified_name() const;
    static FeatureId parse_qualified(std::string_view text);
    static FeatureId parse(std::string_view name, Modality modality);

    friend bool operator==(const FeatureId&, const FeatureId&) = default;
    friend auto operator<=>(const FeatureId&, const FeatureId&) = default;
};

/// Immutable, shared ordered list of feature ids.
class FeatureLayout {
public:
    FeatureLayout() : ids_(std::make_shared<const std::vector<FeatureId>>()) {}
    explicit FeatureLayout(std::vector<FeatureId> ids) : ids_(std::make_shared<const std::vector<FeatureId>>(std::move(ids))) {}

    std::size_t size() const noexcept { return ids_->size(); }
    bool empty() const noexcept { return ids_->empty(); }
    const FeatureId& operator[](std::size_t i) const noexcept { return (*ids_)[i]; }
    auto begin() const noexcept { return ids_->begin(); }
    auto end() const noexcept { return ids_->end(); }
    const std::vector<FeatureId>& ids() const noexcept { return *ids_; }
    std::optional<std::size_t> index_of(const FeatureId& id) const noexcept;

    friend bool operator==(const FeatureLayout& a, const FeatureLayout& b) noexcept {
        return a.ids_ == b.ids_ || *a.ids_ == *b.ids_;
    }

private:
    std::shared_ptr<const std::vector<FeatureId>> ids_;
};

enum class LayoutKind { Acc32, Rot44, Fused };

/// Feature-major order: for each base in FeatureBase order, axes X, Y, Z, M.
const FeatureLayout& acc_layout();
const FeatureLayout& rot_layout();
/// acc_layout() followed by rot_layout().
const FeatureLayout& fused_layout();
const FeatureLayout& layout_for(LayoutKind kind);

struct FeatureProvenance {
    SessionKey key;
    std::size_t window_start = 0;
    // Set when a rotation channel had too few mid-swing points or initial
    // contacts and the gait features fell back to their defaults.
    bool degenerate_gait = false;
};

struct FeatureVector {
    FeatureLayout layout;
    std::vector<double> values;
    FeatureProvenance provenance;

    std::size_t size() const noexcept { return values.size(); }
};

/// Restricts a vector to the ids of `subset`, in the subset's order.
FeatureVector project(const FeatureVector& fv, const FeatureLayout& subset);

/// Positions in `from` of each id of `to`; throws if one is missing.
std::vector<std::size_t> projection_indices(const FeatureLayout& from, const FeatureLayout& to);
/// Applies precomputed projection indices.
FeatureVector project(const FeatureVector& fv, const FeatureLayout& subset, std::span<const std::size_t> indices);

// ---------------------------------------------------------------------------
// Primitive operations

struct PeakConfig {
    std::size_t min_distance = 0;
    double min_height = -std::numeric_limits<double>::infinity();
};

/// Mid-swing detection defaults: peaks at least 10 samples apart and above 40.
inline constexpr PeakConfig kMidSwingPeaks{10, 40.0};

/// Strict local maxima (first index of a plateau that is strictly above both
/// flanks), filtered by height, then thinned greedily from the tallest peak
/// down so that no two kept peaks are closer than min_distance. Ascending.
std::vector<std::size_t> find_peaks(std::span<const double> series, const PeakConfig& cfg = {});

/// First index of each local-minimum plateau strictly below both flanks.
std::vector<std::size_t> find_troughs(std::span<const double> series);

struct Spectrum {
    std::vector<double> freqs;  // 0 .. fs/2
    std::vector<double> power;  // one-sided periodogram
    double total_power = 0.0;
};

/// One-sided periodogram, no taper, mean retained. total_power equals the
/// mean square of the input.
Spectrum power_spectrum(std::span<const double> series, double fs);

struct TimeDomainFeatures {
    double api = 0.0;
    double eng = 0.0;
    double med = 0.0;
    double nop = 0.0;
    double rng = 0.0;
};

struct FreqDomainFeatures {
    double bap = 0.0;
    double mdf = 0.0;
    double spe = 0.0;
};

struct GaitFeatures {
    double nmsp = 0.0;
    double mst = 0.0;
    double mrr = 0.0;
    double mra = 0.0;
    bool degenerate = false;
};

double median(std::span<const double> values);
/// Mean gap between consecutive peak indices; `fallback` with fewer than two.
double average_peak_interval(std::span<const std::size_t> peaks, double fallback);

TimeDomainFeatures time_domain_features(std::span<const double> channel, const PeakConfig& api_peaks = {});
FreqDomainFeatures freq_domain_features(std::span<const double> channel, double fs);
FreqDomainFeatures freq_domain_features(const Spectrum& spectrum);
/// Normalized Shannon entropy of a power distribution, in [0, 1].
double spectral_entropy(std::span<const double> power);
/// Frequency at which the cumulative power reaches half the total, linearly
/// interpolated between bins.
double median_frequency(const Spectrum& spectrum);
GaitFeatures rotation_gait_features(std::span<const double> channel, const PeakConfig& mid_swing = kMidSwingPeaks,
                                    double fs = kNominalRateHz);

struct ExtractionConfig {
    double fs = kNominalRateHz;
    PeakConfig api_peaks{};
    PeakConfig mid_swing = kMidSwingPeaks;
};

/// Computes the layout selected by `kind`. Acc32 needs `acc`, Rot44 needs
/// `rot`, Fused needs both and they must describe the same window.
FeatureVector extract_feature_vector(const Window* acc, const Window* rot, LayoutKind kind,
                                     const ExtractionConfig& cfg = {});

}  // namespace armauth
