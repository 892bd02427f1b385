#pragma once

// Raw recordings and per-window feature vectors for a population of users,
// keyed by (user, phase, session).

#include <map>
#include <span>
#include <string>
#include <vector>

#include "armauth/features.hpp"
#include "armauth/signal.hpp"

namespace armauth {

struct SplitId {
    int phase = 1;
    int session = 1;

    friend bool operator==(const SplitId&, const SplitId&) = default;
    friend auto operator<=>(const SplitId&, const SplitId&) = default;
};

std::string split_name(SplitId s);  // "P1S1"

/// One raw recording pair, before smoothing.
struct SessionRecording {
    SessionKey key;
    TimeSeries acc;
    TimeSeries rot;
};

struct Dataset {
    std::map<SessionKey, SessionRecording> sessions;

    std::vector<int> users() const;
};

/// Features of one recording; acc[i] and rot[i] come from the same window.
struct SessionFeatures {
    SessionKey key;
    std::vector<FeatureVector> acc;
    std::vector<FeatureVector> rot;

    std::size_t size() const noexcept { return acc.size(); }
    /// Concatenated acc ++ rot vector for window i (fused layout).
    FeatureVector fused(std::size_t i) const;
};

struct PipelineConfig {
    SmoothingConfig smoothing;
    WindowConfig window;
    ExtractionConfig extraction;
};

/// Smooths, segments and extracts one recording. The shorter stream bounds
/// the number of paired windows.
SessionFeatures extract_session_features(const SessionRecording& rec, const PipelineConfig& cfg);

struct FeatureCorpus {
    std::map<SessionKey, SessionFeatures> sessions;

    std::vector<int> users() const;
    const SessionFeatures* find(int user, SplitId split) const;
    bool has(int user, SplitId split) const { return find(user, split) != nullptr; }
};

FeatureCorpus build_feature_corpus(const Dataset& data, const PipelineConfig& cfg);

/// Every user's recording of one split, keyed by user id.
using SplitView = std::map<int, const SessionFeatures*>;
SplitView split_view(const FeatureCorpus& corpus, SplitId split, std::span<const int> users);

}  // namespace armauth
