#include "armauth/auth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <json.hpp>

#include "armauth/error.hpp"
#include "armauth/io.hpp"
#include "armauth/rng.hpp"

namespace armauth {

std::string_view system_name(SystemKind s) noexcept {
    switch (s) {
        case SystemKind::AccOnly: return "Acc";
        case SystemKind::RotOnly: return "Rot";
        case SystemKind::FLF: return "FLF";
        case SystemKind::SLF: return "SLF";
    }
    return "?";
}

SystemKind parse_system(std::string_view text) {
    if (text == "acc" || text == "Acc" || text == "AccOnly") return SystemKind::AccOnly;
    if (text == "rot" || text == "Rot" || text == "RotOnly") return SystemKind::RotOnly;
    if (text == "flf" || text == "FLF") return SystemKind::FLF;
    if (text == "slf" || text == "SLF") return SystemKind::SLF;
    throw InvalidInput("unknown system '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Training sets

LabeledRows build_training_rows(int candidate, const std::map<int, std::vector<FeatureVector>>& corpus,
                                const TrainingSetSpec& spec) {
    if (spec.impostor_vectors_per_other_user == 0) throw InvalidInput("impostor count per user must be at least 1");
    const auto cand = corpus.find(candidate);
    if (cand == corpus.end()) throw InvalidInput("candidate user " + std::to_string(candidate) + " not in corpus");
    if (cand->second.empty()) throw InvalidInput("candidate user " + std::to_string(candidate) + " has no vectors");

    LabeledRows out;
    std::vector<std::vector<double>> impostors;
    for (const auto& [user, vectors] : corpus) {
        if (user == candidate) continue;
        const std::size_t take = std::min(spec.impostor_vectors_per_other_user, vectors.size());
        if (take < spec.impostor_vectors_per_other_user)
            out.warnings.push_back("user " + std::to_string(user) + " contributes only " + std::to_string(take) +
                                   " impostor vectors");
        for (std::size_t i = 0; i < take; ++i) impostors.push_back(vectors[i].values);
    }
    if (impostors.empty())
        throw InvalidInput("no impostor vectors available for user " + std::to_string(candidate));

    const auto& genuine = cand->second;
    const std::size_t target = impostors.size();
    Rng rng(derive_seed(spec.seed, {seed_tag::kBootstrap, static_cast<std::uint64_t>(candidate)}));
    std::uniform_int_distribution<std::size_t> pick(0, genuine.size() - 1);
    out.rows.reserve(2 * target);
    if (genuine.size() <= target) {
        for (const auto& g : genuine) out.rows.push_back(g.values);
        for (std::size_t i = genuine.size(); i < target; ++i) out.rows.push_back(genuine[pick(rng)].values);
    } else {
        for (std::size_t i = 0; i < target; ++i) out.rows.push_back(genuine[pick(rng)].values);
    }
    out.labels.assign(target, kGenuine);
    for (auto& r : impostors) out.rows.push_back(std::move(r));
    out.labels.resize(2 * target, kImpostor);
    return out;
}

TrainingSet build_training_set(int candidate, const std::map<int, std::vector<FeatureVector>>& corpus,
                               const TrainingSetSpec& spec, std::vector<std::string>* warnings) {
    auto rows = build_training_rows(candidate, corpus, spec);
    if (warnings) warnings->insert(warnings->end(), rows.warnings.begin(), rows.warnings.end());
    const FeatureLayout layout = corpus.at(candidate).front().layout;
    return TrainingSet::build(layout, std::move(rows.rows), std::move(rows.labels));
}

// ---------------------------------------------------------------------------
// Thresholds

double false_accept_rate(std::span<const double> impostor, double t) {
    if (impostor.empty()) return 0.0;
    const auto n = std::count_if(impostor.begin(), impostor.end(), [t](double s) { return s >= t; });
    return static_cast<double>(n) / static_cast<double>(impostor.size());
}

double false_reject_rate(std::span<const double> genuine, double t) {
    if (genuine.empty()) return 0.0;
    const auto n = std::count_if(genuine.begin(), genuine.end(), [t](double s) { return s < t; });
    return static_cast<double>(n) / static_cast<double>(genuine.size());
}

EerPoint compute_eer_threshold(const ScoreSet& scores) {
    if (scores.genuine.empty() || scores.impostor.empty())
        throw InvalidInput("EER threshold needs genuine and impostor scores");
    std::vector<double> g = scores.genuine, im = scores.impostor;
    std::sort(g.begin(), g.end());
    std::sort(im.begin(), im.end());

    std::vector<double> values;
    values.reserve(g.size() + im.size());
    std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(values));
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> candidates{0.0, 1.0};
    for (std::size_t i = 0; i + 1 < values.size(); ++i) candidates.push_back(values[i] + 0.5 * (values[i + 1] - values[i]));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // FAR = a/n and FRR = b/m are compared as exact rationals.
    const auto n = static_cast<std::int64_t>(im.size());
    const auto m = static_cast<std::int64_t>(g.size());
    std::int64_t best_gap = -1, best_sum = 0;
    EerPoint best;
    for (double t : candidates) {
        const auto a = static_cast<std::int64_t>(im.end() - std::lower_bound(im.begin(), im.end(), t));
        const auto b = static_cast<std::int64_t>(std::lower_bound(g.begin(), g.end(), t) - g.begin());
        const std::int64_t gap = std::llabs(a * m - b * n);
        const std::int64_t sum = a * m + b * n;
        if (best_gap < 0 || gap < best_gap || (gap == best_gap && sum < best_sum)) {
            best_gap = gap;
            best_sum = sum;
            best = {t, static_cast<double>(a) / static_cast<double>(n), static_cast<double>(b) / static_cast<double>(m)};
        }
    }
    return best;
}

double fuse_scores_slf(double s_acc, double s_rot, FusionWeights w) {
    if (!(w.w_acc >= 0.0 && w.w_acc <= 1.0)) throw InvalidInput("fusion weight must lie in [0, 1]");
    return std::clamp(w.w_acc * s_acc + w.w_rot() * s_rot, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Enrollment

std::vector<WindowFeatures> window_features(const SessionFeatures& s) {
    std::vector<WindowFeatures> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s.acc[i], s.rot[i]});
    return out;
}

namespace {

using Source = FeatureSource;

FeatureVector source_vector(const SessionFeatures& s, std::size_t i, Source src) {
    switch (src) {
        case Source::Acc: return s.acc[i];
        case Source::Rot: return s.rot[i];
        case Source::Fused: return s.fused(i);
    }
    return s.fused(i);
}

const FeatureLayout& source_layout(Source src) {
    switch (src) {
        case Source::Acc: return acc_layout();
        case Source::Rot: return rot_layout();
        case Source::Fused: return fused_layout();
    }
    return fused_layout();
}

// Candidate's vectors plus the leading impostor vectors of everybody else,
// projected onto `subset`.
std::map<int, std::vector<FeatureVector>> gather(int user, const SplitView& split, Source src,
                                                 const FeatureLayout& subset, std::size_t impostor_count) {
    const auto idx = projection_indices(source_layout(src), subset);
    std::map<int, std::vector<FeatureVector>> out;
    for (const auto& [u, sf] : split) {
        const std::size_t take = u == user ? sf->size() : std::min(impostor_count, sf->size());
        auto& dst = out[u];
        dst.reserve(take);
        for (std::size_t i = 0; i < take; ++i) dst.push_back(project(source_vector(*sf, i, src), subset, idx));
    }
    return out;
}

ScoreSet split_scores(std::span<const double> scores, std::span<const int> labels) {
    ScoreSet s;
    for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] == kGenuine ? s.genuine : s.impostor).push_back(scores[i]);
    return s;
}

}  // namespace

EnrolledModality enroll_modality(int user, const SplitView& training_split, FeatureSource source,
                                 const FeatureLayout& subset, const EnrollmentConfig& cfg) {
    if (subset.empty()) throw InvalidInput("empty feature subset");
    const auto corpus = gather(user, training_split, source, subset, cfg.training.impostor_vectors_per_other_user);
    std::vector<std::string> warnings;
    const TrainingSet ts = build_training_set(user, corpus, cfg.training, &warnings);
    ClassifierConfig ccfg = cfg.classifier;
    ccfg.seed = derive_seed(cfg.classifier.seed, {seed_tag::kModel, static_cast<std::uint64_t>(user)});
    Model model = train(ccfg, ts);
    std::vector<double> scores(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) scores[i] = model.score_normalized(ts.rows[i]);
    return {std::move(model), std::move(scores), ts.labels, std::move(warnings)};
}

UserTemplate assemble_slf(int user, SplitId created_from, const EnrolledModality& acc, const EnrolledModality& rot,
                          FusionWeights weights, bool refit_threshold) {
    if (acc.labels != rot.labels) throw InvalidInput("SLF modalities were trained on different rows");
    UserTemplate tpl;
    tpl.user_id = user;
    tpl.system = SystemKind::SLF;
    tpl.weights = weights;
    tpl.created_from = created_from;
    std::vector<double> fused(acc.training_scores.size());
    for (std::size_t i = 0; i < fused.size(); ++i)
        fused[i] = fuse_scores_slf(acc.training_scores[i], rot.training_scores[i], weights);
    tpl.training_eer = compute_eer_threshold(split_scores(fused, acc.labels));
    if (refit_threshold) {
        tpl.threshold = tpl.training_eer.threshold;
    } else {
        const double ta = compute_eer_threshold(split_scores(acc.training_scores, acc.labels)).threshold;
        const double tr = compute_eer_threshold(split_scores(rot.training_scores, rot.labels)).threshold;
        tpl.threshold = fuse_scores_slf(ta, tr, weights);
    }
    tpl.feature_subset = union_in_fused_order(acc.model.layout(), rot.model.layout());
    tpl.models = {acc.model, rot.model};
    return tpl;
}

UserTemplate enroll(int user, const SplitView& training_split, SystemKind system, const EnrollmentConfig& cfg) {
    const auto self = training_split.find(user);
    if (self == training_split.end())
        throw InvalidInput("user " + std::to_string(user) + " has no data in the training split");
    if (self->second->size() < 2)
        throw InvalidInput("user " + std::to_string(user) + " has fewer than two training windows");

    const SplitId from{self->second->key.phase, self->second->key.session};
    if (system == SystemKind::SLF) {
        const auto acc = enroll_modality(user, training_split, Source::Acc, cfg.subsets.acc, cfg);
        const auto rot = enroll_modality(user, training_split, Source::Rot, cfg.subsets.rot, cfg);
        return assemble_slf(user, from, acc, rot, cfg.slf_weights, cfg.slf_refit_threshold);
    }

    const Source src = system == SystemKind::AccOnly   ? Source::Acc
                       : system == SystemKind::RotOnly ? Source::Rot
                                                       : Source::Fused;
    const FeatureLayout& subset = system == SystemKind::AccOnly   ? cfg.subsets.acc
                                  : system == SystemKind::RotOnly ? cfg.subsets.rot
                                                                  : cfg.subsets.fused;
    auto fit = enroll_modality(user, training_split, src, subset, cfg);
    UserTemplate tpl;
    tpl.user_id = user;
    tpl.system = system;
    tpl.weights = cfg.slf_weights;
    tpl.created_from = from;
    tpl.training_eer = compute_eer_threshold(split_scores(fit.training_scores, fit.labels));
    tpl.threshold = tpl.training_eer.threshold;
    tpl.feature_subset = subset;
    tpl.models.push_back(std::move(fit.model));
    return tpl;
}

namespace {

FeatureVector fused_of(const WindowFeatures& w) {
    if (!(w.acc.layout == acc_layout()) || !(w.rot.layout == rot_layout()))
        throw InvalidInput("window features are not in the full acc/rot layouts");
    FeatureVector fv;
    fv.layout = fused_layout();
    fv.provenance = w.acc.provenance;
    fv.values = w.acc.values;
    fv.values.insert(fv.values.end(), w.rot.values.begin(), w.rot.values.end());
    return fv;
}

}  // namespace

double score_window(const UserTemplate& tpl, const WindowFeatures& w) {
    if (tpl.models.empty()) throw InvalidInput("template holds no model");
    switch (tpl.system) {
        case SystemKind::AccOnly: {
            const auto& m = tpl.models[0];
            return predict_genuine_probability(m, project(w.acc, m.layout()));
        }
        case SystemKind::RotOnly: {
            const auto& m = tpl.models[0];
            return predict_genuine_probability(m, project(w.rot, m.layout()));
        }
        case SystemKind::FLF: {
            const auto& m = tpl.models[0];
            return predict_genuine_probability(m, project(fused_of(w), m.layout()));
        }
        case SystemKind::SLF: {
            if (tpl.models.size() != 2) throw InvalidInput("SLF template needs two models");
            const double sa = predict_genuine_probability(tpl.models[0], project(w.acc, tpl.models[0].layout()));
            const double sr = predict_genuine_probability(tpl.models[1], project(w.rot, tpl.models[1].layout()));
            return fuse_scores_slf(sa, sr, tpl.weights);
        }
    }
    throw InvalidInput("unknown system kind");
}

std::vector<DecisionRecord> authenticate_features(const UserTemplate& tpl, std::span<const WindowFeatures> windows) {
    std::vector<DecisionRecord> out;
    out.reserve(windows.size());
    std::size_t rejects = 0;
    for (const auto& w : windows) {
        DecisionRecord rec;
        rec.user_id = tpl.user_id;
        rec.window_start = w.acc.layout.empty() ? w.rot.provenance.window_start : w.acc.provenance.window_start;
        rec.threshold = tpl.threshold;
        try {
            rec.score = score_window(tpl, w);
            rec.decision = rec.score >= tpl.threshold ? Decision::Accept : Decision::Reject;
            rejects = rec.decision == Decision::Reject ? rejects + 1 : 0;
        } catch (const InvalidInput& e) {
            rec.error = e.what();
        }
        rec.consecutive_rejects = rejects;
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

void check_window(const Window& w) {
    const std::size_t n = w.size();
    if (n < 3) throw InvalidInput("window too short");
    for (const auto& c : w.channels) {
        if (c.size() != n) throw InvalidInput("window channels differ in length");
        for (double v : c)
            if (!std::isfinite(v)) throw InvalidInput("non-finite sample in window");
    }
}

}  // namespace

std::vector<DecisionRecord> authenticate_stream(const UserTemplate& tpl, std::span<const WindowPair> windows,
                                                const ExtractionConfig& extraction) {
    const bool need_acc = tpl.system != SystemKind::RotOnly;
    const bool need_rot = tpl.system != SystemKind::AccOnly;
    std::vector<DecisionRecord> out;
    out.reserve(windows.size());
    std::size_t rejects = 0;
    for (const auto& pair : windows) {
        DecisionRecord rec;
        rec.user_id = tpl.user_id;
        rec.threshold = tpl.threshold;
        rec.window_start = pair.acc ? pair.acc->start_index : pair.rot ? pair.rot->start_index : 0;
        try {
            if (need_acc && !pair.acc) throw InvalidInput("missing acceleration window");
            if (need_rot && !pair.rot) throw InvalidInput("missing rotation window");
            WindowFeatures wf;
            if (pair.acc) {
                check_window(*pair.acc);
                wf.acc = extract_feature_vector(&*pair.acc, nullptr, LayoutKind::Acc32, extraction);
            }
            if (pair.rot) {
                check_window(*pair.rot);
                wf.rot = extract_feature_vector(nullptr, &*pair.rot, LayoutKind::Rot44, extraction);
            }
            if (!pair.acc) wf.acc.layout = acc_layout(), wf.acc.values.assign(acc_layout().size(), 0.0);
            if (!pair.rot) wf.rot.layout = rot_layout(), wf.rot.values.assign(rot_layout().size(), 0.0);
            rec.score = score_window(tpl, wf);
            rec.decision = rec.score >= tpl.threshold ? Decision::Accept : Decision::Reject;
            rejects = rec.decision == Decision::Reject ? rejects + 1 : 0;
        } catch (const InvalidInput& e) {
            rec.error = e.what();
        }
        rec.consecutive_rejects = rejects;
        out.push_back(std::move(rec));
    }
    return out;
}

UserTemplate update_template(const UserTemplate& old, const SplitView& new_split, const EnrollmentConfig& cfg) {
    return enroll(old.user_id, new_split, old.system, cfg);
}

// ---------------------------------------------------------------------------
// Template files

namespace {
constexpr int kTemplateFormatVersion = 1;
}

std::string serialize_template(const UserTemplate& tpl) {
    using nlohmann::json;
    json names = json::array();
    for (const auto& id : tpl.feature_subset) names.push_back(id.qualified_name());
    json models = json::array();
    for (const auto& m : tpl.models) models.push_back(json::parse(serialize_model(m)));
    json doc{{"format", "armauth-template"},
             {"version", kTemplateFormatVersion},
             {"user_id", tpl.user_id},
             {"system", system_name(tpl.system)},
             {"threshold", tpl.threshold},
             {"w_acc", tpl.weights.w_acc},
             {"created_from", {{"phase", tpl.created_from.phase}, {"session", tpl.created_from.session}}},
             {"training_eer", {{"threshold", tpl.training_eer.threshold}, {"far", tpl.training_eer.far}, {"frr", tpl.training_eer.frr}}},
             {"feature_subset", names},
             {"models", models}};
    return doc.dump();
}

UserTemplate deserialize_template(std::string_view text) {
    using nlohmann::json;
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != "armauth-template") throw InvalidInput("not a template file");
        if (doc.at("version").get<int>() != kTemplateFormatVersion) throw InvalidInput("unsupported template version");
        UserTemplate tpl;
        tpl.user_id = doc.at("user_id").get<int>();
        tpl.system = parse_system(doc.at("system").get<std::string>());
        tpl.threshold = doc.at("threshold").get<double>();
        tpl.weights.w_acc = doc.at("w_acc").get<double>();
        tpl.created_from = {doc.at("created_from").at("phase").get<int>(), doc.at("created_from").at("session").get<int>()};
        const auto& eer = doc.at("training_eer");
        tpl.training_eer = {eer.at("threshold").get<double>(), eer.at("far").get<double>(), eer.at("frr").get<double>()};
        std::vector<FeatureId> ids;
        for (const auto& n : doc.at("feature_subset")) ids.push_back(FeatureId::parse_qualified(n.get<std::string>()));
        tpl.feature_subset = FeatureLayout(std::move(ids));
        for (const auto& m : doc.at("models")) tpl.models.push_back(deserialize_model(m.dump()));
        if (!(tpl.threshold >= 0.0 && tpl.threshold <= 1.0)) throw InvalidInput("template threshold outside [0, 1]");
        return tpl;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed template file: ") + e.what());
    }
}

void save_template(const UserTemplate& tpl, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_template(tpl));
}

UserTemplate load_template(const std::filesystem::path& path) { return deserialize_template(read_file(path)); }

}  // namespace armauth
