#include "armauth/corpus.hpp"

#include <algorithm>
#include <set>

#include "armauth/error.hpp"

namespace armauth {

std::string split_name(SplitId s) { return "P" + std::to_string(s.phase) + "S" + std::to_string(s.session); }

std::vector<int> Dataset::users() const {
    std::set<int> ids;
    for (const auto& [key, _] : sessions) ids.insert(key.user_id);
    return {ids.begin(), ids.end()};
}

FeatureVector SessionFeatures::fused(std::size_t i) const {
    FeatureVector fv;
    fv.layout = fused_layout();
    fv.provenance = acc[i].provenance;
    fv.provenance.degenerate_gait = rot[i].provenance.degenerate_gait;
    fv.values.reserve(acc[i].size() + rot[i].size());
    fv.values.insert(fv.values.end(), acc[i].values.begin(), acc[i].values.end());
    fv.values.insert(fv.values.end(), rot[i].values.begin(), rot[i].values.end());
    return fv;
}

namespace {

TimeSeries truncated(const TimeSeries& ts, std::size_t n) {
    TimeSeries out = ts;
    for (auto& c : out.channels) c.resize(n);
    return out;
}

}  // namespace

SessionFeatures extract_session_features(const SessionRecording& rec, const PipelineConfig& cfg) {
    const std::size_t n = std::min(rec.acc.size(), rec.rot.size());
    if (n < cfg.smoothing.points)
        throw InvalidInput("recording of user " + std::to_string(rec.key.user_id) + " is too short to smooth");
    const TimeSeries acc = preprocess(rec.acc.size() == n ? rec.acc : truncated(rec.acc, n), cfg.smoothing);
    const TimeSeries rot = preprocess(rec.rot.size() == n ? rec.rot : truncated(rec.rot, n), cfg.smoothing);
    const auto acc_w = segment_windows(acc, cfg.window, rec.key);
    const auto rot_w = segment_windows(rot, cfg.window, rec.key);

    SessionFeatures sf;
    sf.key = rec.key;
    sf.acc.reserve(acc_w.size());
    sf.rot.reserve(rot_w.size());
    for (std::size_t i = 0; i < acc_w.size(); ++i) {
        sf.acc.push_back(extract_feature_vector(&acc_w[i], nullptr, LayoutKind::Acc32, cfg.extraction));
        sf.rot.push_back(extract_feature_vector(nullptr, &rot_w[i], LayoutKind::Rot44, cfg.extraction));
    }
    return sf;
}

std::vector<int> FeatureCorpus::users() const {
    std::set<int> ids;
    for (const auto& [key, _] : sessions) ids.insert(key.user_id);
    return {ids.begin(), ids.end()};
}

const SessionFeatures* FeatureCorpus::find(int user, SplitId split) const {
    const auto it = sessions.find(SessionKey{user, split.phase, split.session});
    return it == sessions.end() ? nullptr : &it->second;
}

FeatureCorpus build_feature_corpus(const Dataset& data, const PipelineConfig& cfg) {
    FeatureCorpus corpus;
    for (const auto& [key, rec] : data.sessions) {
        // Recordings shorter than one window are left out of the corpus.
        const std::size_t n = std::min(rec.acc.size(), rec.rot.size());
        if (n < cfg.smoothing.points || n - (cfg.smoothing.points - 1) < cfg.window.w_size_samples) continue;
        corpus.sessions.emplace(key, extract_session_features(rec, cfg));
    }
    return corpus;
}

SplitView split_view(const FeatureCorpus& corpus, SplitId split, std::span<const int> users) {
    SplitView view;
    for (int u : users)
        if (const auto* s = corpus.find(u, split)) view.emplace(u, s);
    return view;
}

}  // namespace armauth
