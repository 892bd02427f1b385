#include <algorithm>
#include <cmath>
#include <string>

#include "armauth/error.hpp"
#include "internal.hpp"

namespace armauth {

std::string_view classifier_name(ClassifierKind k) noexcept {
    switch (k) {
        case ClassifierKind::kNNEuc: return "kNNEuc";
        case ClassifierKind::LogReg: return "LogReg";
        case ClassifierKind::MulPer: return "MulPer";
        case ClassifierKind::RanFor: return "RanFor";
    }
    return "?";
}

ClassifierKind parse_classifier(std::string_view text) {
    if (text == "knn" || text == "kNNEuc") return ClassifierKind::kNNEuc;
    if (text == "logreg" || text == "LogReg") return ClassifierKind::LogReg;
    if (text == "mlp" || text == "MulPer") return ClassifierKind::MulPer;
    if (text == "rf" || text == "RanFor") return ClassifierKind::RanFor;
    throw InvalidInput("unknown classifier '" + std::string(text) + "'");
}

NormStats NormStats::fit(std::span<const std::vector<double>> rows) {
    if (rows.empty()) throw InvalidInput("cannot fit normalization on zero rows");
    const std::size_t d = rows.front().size();
    NormStats s;
    s.mean.assign(d, 0.0);
    s.std.assign(d, 0.0);
    const auto n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        if (r.size() != d) throw InvalidInput("rows differ in dimension");
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    for (auto& m : s.mean) m /= n;
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) s.std[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
    for (std::size_t j = 0; j < d; ++j) {
        double& v = s.std[j];
        v = std::sqrt(v / n);
        // Rounding leaves a constant column with a tiny nonzero spread.
        if (!std::isfinite(v) || v <= 1e-12 * std::max(1.0, std::abs(s.mean[j]))) v = 1.0;
    }
    return s;
}

std::vector<double> NormStats::apply(std::span<const double> raw) const {
    if (raw.size() != mean.size())
        throw InvalidInput("vector of dimension " + std::to_string(raw.size()) + " does not match normalization of " +
                           std::to_string(mean.size()));
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = (raw[j] - mean[j]) / std[j];
    return out;
}

TrainingSet TrainingSet::build(FeatureLayout layout, std::vector<std::vector<double>> raw, std::vector<int> labels) {
    if (raw.size() != labels.size()) throw InvalidInput("training rows and labels differ in length");
    const bool has_genuine = std::find(labels.begin(), labels.end(), kGenuine) != labels.end();
    const bool has_impostor = std::find(labels.begin(), labels.end(), kImpostor) != labels.end();
    if (!has_genuine || !has_impostor) throw InvalidInput("training set must contain both classes");
    for (int l : labels)
        if (l != kGenuine && l != kImpostor) throw InvalidInput("training labels must be genuine or impostor");
    for (const auto& r : raw) {
        if (r.size() != layout.size()) throw InvalidInput("training row does not match layout");
        for (double v : r)
            if (!std::isfinite(v)) throw InvalidInput("non-finite training value");
    }
    TrainingSet ts;
    ts.layout = std::move(layout);
    ts.norm_stats = NormStats::fit(raw);
    ts.rows.reserve(raw.size());
    for (const auto& r : raw) ts.rows.push_back(ts.norm_stats.apply(r));
    ts.labels = std::move(labels);
    return ts;
}

Model::Model(ClassifierConfig cfg, FeatureLayout layout, NormStats norm, Params params)
    : cfg_(cfg), layout_(std::move(layout)), norm_(std::move(norm)), params_(std::move(params)) {}

double Model::score_normalized(std::span<const double> row) const {
    if (row.size() != layout_.size()) throw InvalidInput("row dimension does not match the model layout");
    struct Visitor {
        const Model& m;
        std::span<const double> row;
        double operator()(const model::Knn& p) const { return detail::score_knn(p, m.cfg_, row); }
        double operator()(const model::LogisticRegression& p) const { return detail::score_logreg(p, row); }
        double operator()(const model::Perceptron& p) const { return detail::score_mlp(p, row); }
        double operator()(const model::Forest& p) const { return detail::score_forest(p, row); }
    };
    return std::clamp(std::visit(Visitor{*this, row}, params_), 0.0, 1.0);
}

Model train(const ClassifierConfig& cfg, const TrainingSet& ts) {
    if (ts.size() == 0) throw InvalidInput("empty training set");
    const bool has_genuine = std::find(ts.labels.begin(), ts.labels.end(), kGenuine) != ts.labels.end();
    const bool has_impostor = std::find(ts.labels.begin(), ts.labels.end(), kImpostor) != ts.labels.end();
    if (!has_genuine || !has_impostor) throw InvalidInput("training set must contain both classes");
    if (cfg.k == 0) throw InvalidInput("k must be at least 1");
    if (cfg.trees == 0) throw InvalidInput("forest needs at least one tree");

    switch (cfg.kind) {
        case ClassifierKind::kNNEuc: return Model(cfg, ts.layout, ts.norm_stats, detail::train_knn(ts));
        case ClassifierKind::LogReg: return Model(cfg, ts.layout, ts.norm_stats, detail::train_logreg(cfg.logreg, ts));
        case ClassifierKind::MulPer:
            return Model(cfg, ts.layout, ts.norm_stats, detail::train_mlp(cfg.mlp, cfg.seed, ts));
        case ClassifierKind::RanFor:
            return Model(cfg, ts.layout, ts.norm_stats, detail::train_forest(cfg.trees, cfg.seed, ts));
    }
    throw InvalidInput("unknown classifier kind");
}

double predict_genuine_probability(const Model& m, const FeatureVector& fv) {
    if (!(fv.layout == m.layout())) throw InvalidInput("feature vector layout does not match the model");
    return m.score_normalized(m.norm_stats().apply(fv.values));
}

}  // namespace armauth
