#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "armauth/classifiers.hpp"
#include "armauth/error.hpp"

using namespace armauth;

namespace {

FeatureLayout layout_of(std::size_t d) {
    std::vector<FeatureId> ids(fused_layout().begin(), fused_layout().begin() + d);
    return FeatureLayout(ids);
}

struct Blobs {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
};

Blobs blobs(std::uint64_t seed, std::size_t n_per_class, std::size_t d, double sep, double spread = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, spread);
    Blobs b;
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const int label = i < n_per_class ? kGenuine : kImpostor;
        std::vector<double> r(d);
        for (std::size_t j = 0; j < d; ++j) r[j] = (label == kGenuine ? sep : -sep) * (j % 2 ? 0.5 : 1.0) + g(rng) + 3.0 * j;
        b.rows.push_back(r);
        b.labels.push_back(label);
    }
    return b;
}

FeatureVector fv_of(const FeatureLayout& l, std::vector<double> v) { return {l, std::move(v), {}}; }

double brute_knn(const TrainingSet& ts, std::span<const double> q, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double s = 0;
        for (std::size_t j = 0; j < q.size(); ++j) s += (q[j] - ts.rows[i][j]) * (q[j] - ts.rows[i][j]);
        d.emplace_back(s, i);
    }
    std::sort(d.begin(), d.end());
    std::size_t g = 0;
    for (std::size_t i = 0; i < k; ++i) g += ts.labels[d[i].second] == kGenuine;
    return static_cast<double>(g) / static_cast<double>(k);
}

}  // namespace

TEST(Norm, ConstantFeatureGetsUnitStd) {
    const std::vector<std::vector<double>> rows{{1, 0.1}, {2, 0.1}, {3, 0.1}};
    const auto s = NormStats::fit(rows);
    EXPECT_EQ(s.std[1], 1.0);
    EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
    EXPECT_NEAR(s.std[0], std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(TrainingSetTest, Validation) {
    const auto l = layout_of(2);
    EXPECT_THROW(TrainingSet::build(l, {{1, 2}, {3, 4}}, {kGenuine, kGenuine}), InvalidInput);
    EXPECT_THROW(TrainingSet::build(l, {{1, 2}, {3}}, {kGenuine, kImpostor}), InvalidInput);
    EXPECT_THROW(TrainingSet::build(l, {{1, NAN}, {3, 4}}, {kGenuine, kImpostor}), InvalidInput);
}

TEST(Knn, HoldsTrainingRows) {
    const auto b = blobs(1, 20, 3, 2.0);
    const auto ts = TrainingSet::build(layout_of(3), b.rows, b.labels);
    const auto m = train({}, ts);
    const auto& p = std::get<model::Knn>(m.params());
    ASSERT_EQ(p.rows.size(), 40u * 3u);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(p.rows[i * 3 + j], ts.rows[i][j]);
    const auto m2 = train({}, ts);
    EXPECT_EQ(std::get<model::Knn>(m2.params()).rows, p.rows);
}

TEST(Knn, DefinitionExamples) {
    const auto l = layout_of(1);
    // 6 genuine rows close to the query and 4 impostors slightly further
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 6; ++i) rows.push_back({0.01 * i}), labels.push_back(kGenuine);
    for (int i = 0; i < 4; ++i) rows.push_back({0.1 + 0.01 * i}), labels.push_back(kImpostor);
    for (int i = 0; i < 10; ++i) rows.push_back({100.0 + i}), labels.push_back(kImpostor);
    const auto ts = TrainingSet::build(l, rows, labels);
    const auto m = train({}, ts);
    EXPECT_DOUBLE_EQ(predict_genuine_probability(m, fv_of(l, {0.0})), 0.6);

    // a genuine row repeated k times
    std::vector<std::vector<double>> r2(10, std::vector<double>{5.0});
    std::vector<int> l2(10, kGenuine);
    for (int i = 0; i < 10; ++i) r2.push_back({-5.0 - i}), l2.push_back(kImpostor);
    const auto m2 = train({}, TrainingSet::build(l, r2, l2));
    EXPECT_EQ(predict_genuine_probability(m2, fv_of(l, {5.0})), 1.0);
}

TEST(Knn, MatchesBruteForce) {
    const auto b = blobs(2, 80, 6, 0.5, 1.5);
    const auto ts = TrainingSet::build(layout_of(6), b.rows, b.labels);
    const auto m = train({}, ts);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0, 2);
    for (int q = 0; q < 1000; ++q) {
        std::vector<double> row(6);
        for (auto& v : row) v = g(rng);
        EXPECT_EQ(m.score_normalized(row), brute_knn(ts, row, 10));
    }
}

TEST(Knn, AffineRescalingInvariant) {
    const auto b = blobs(3, 30, 4, 1.0);
    auto scaled = b.rows;
    for (auto& r : scaled)
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = 4.0 * r[j] - 7.0;
    const auto l = layout_of(4);
    const auto m1 = train({}, TrainingSet::build(l, b.rows, b.labels));
    const auto m2 = train({}, TrainingSet::build(l, scaled, b.labels));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0, 3);
    for (int q = 0; q < 200; ++q) {
        std::vector<double> v(4), w(4);
        for (std::size_t j = 0; j < 4; ++j) v[j] = g(rng) + 3.0 * j, w[j] = 4.0 * v[j] - 7.0;
        EXPECT_EQ(predict_genuine_probability(m1, fv_of(l, v)), predict_genuine_probability(m2, fv_of(l, w)));
    }
}

TEST(Knn, InverseDistanceWeighting) {
    const auto l = layout_of(1);
    const std::vector<std::vector<double>> rows{{0.0}, {1.0}, {3.0}};
    const auto ts = TrainingSet::build(l, rows, {kGenuine, kImpostor, kImpostor});
    ClassifierConfig cfg;
    cfg.k = 2;
    cfg.knn_weighting = KnnWeighting::InverseDistance;
    const auto m = train(cfg, ts);
    const auto q = ts.norm_stats.apply(std::vector<double>{0.25});
    const double d0 = std::abs(q[0] - ts.rows[0][0]), d1 = std::abs(q[0] - ts.rows[1][0]);
    EXPECT_NEAR(m.score_normalized(q), (1 / d0) / (1 / d0 + 1 / d1), 1e-12);
}

TEST(LogReg, SeparableBlobsFullAccuracy) {
    const auto b = blobs(4, 60, 2, 3.0, 0.5);
    const auto ts = TrainingSet::build(layout_of(2), b.rows, b.labels);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::LogReg;
    const auto m = train(cfg, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double s = m.score_normalized(ts.rows[i]);
        EXPECT_EQ(s >= 0.5 ? kGenuine : kImpostor, ts.labels[i]);
    }
}

TEST(LogReg, ZeroWeightsGiveHalf) {
    const auto l = layout_of(3);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::LogReg;
    NormStats ns{{0, 0, 0}, {1, 1, 1}};
    const Model m(cfg, l, ns, model::LogisticRegression{{0, 0, 0}, 0.0, 0, 0.0});
    EXPECT_EQ(predict_genuine_probability(m, fv_of(l, {5, -2, 100})), 0.5);
}

TEST(LogReg, DuplicatedRowsSameWeights) {
    const auto b = blobs(5, 40, 3, 0.6, 1.0);
    auto rows2 = b.rows;
    rows2.insert(rows2.end(), b.rows.begin(), b.rows.end());
    auto labels2 = b.labels;
    labels2.insert(labels2.end(), b.labels.begin(), b.labels.end());
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::LogReg;
    const auto m1 = train(cfg, TrainingSet::build(layout_of(3), b.rows, b.labels));
    const auto m2 = train(cfg, TrainingSet::build(layout_of(3), rows2, labels2));
    const auto& p1 = std::get<model::LogisticRegression>(m1.params());
    const auto& p2 = std::get<model::LogisticRegression>(m2.params());
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(p1.weights[j], p2.weights[j], 1e-8 * (1 + std::abs(p1.weights[j])));
    EXPECT_NEAR(p1.intercept, p2.intercept, 1e-8);
    EXPECT_LE(p1.gradient_norm, cfg.logreg.tolerance);
}

TEST(Mlp, SeparableAndDeterministic) {
    const auto b = blobs(6, 30, 4, 2.0, 0.7);
    const auto ts = TrainingSet::build(layout_of(4), b.rows, b.labels);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::MulPer;
    cfg.seed = 77;
    cfg.mlp.epochs = 100;
    const auto m1 = train(cfg, ts);
    const auto m2 = train(cfg, ts);
    const auto& p = std::get<model::Perceptron>(m1.params());
    EXPECT_EQ(p.hidden, 3u);  // (4 + 2) / 2
    EXPECT_EQ(p.w_hidden, std::get<model::Perceptron>(m2.params()).w_hidden);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double s = m1.score_normalized(ts.rows[i]);
        EXPECT_EQ(s, m2.score_normalized(ts.rows[i]));
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        correct += (s >= 0.5) == (ts.labels[i] == kGenuine);
    }
    EXPECT_EQ(correct, ts.size());
    cfg.seed = 78;
    const auto m3 = train(cfg, ts);
    EXPECT_NE(std::get<model::Perceptron>(m3.params()).w_hidden, p.w_hidden);
}

TEST(Forest, DeterministicOobAndRationalScores) {
    const auto b = blobs(7, 40, 5, 0.8, 1.0);
    const auto ts = TrainingSet::build(layout_of(5), b.rows, b.labels);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::RanFor;
    cfg.trees = 101;
    cfg.seed = 5;
    const auto m1 = train(cfg, ts);
    const auto m2 = train(cfg, ts);
    const auto& f1 = std::get<model::Forest>(m1.params());
    const auto& f2 = std::get<model::Forest>(m2.params());
    ASSERT_EQ(f1.trees.size(), 101u);
    EXPECT_EQ(f1.oob_scores, f2.oob_scores);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double s = m1.score_normalized(ts.rows[i]);
        EXPECT_EQ(s, m2.score_normalized(ts.rows[i]));
        const double votes = s * 101.0;
        EXPECT_NEAR(votes, std::round(votes), 1e-9);
    }
    // fully grown trees fit their own bootstrap sample, so the in-sample
    // majority is right
    for (std::size_t i = 0; i < ts.size(); ++i)
        EXPECT_EQ(m1.score_normalized(ts.rows[i]) > 0.5, ts.labels[i] == kGenuine);
}

TEST(Models, Errors) {
    const auto b = blobs(8, 10, 2, 1.0);
    const auto ts = TrainingSet::build(layout_of(2), b.rows, b.labels);
    ClassifierConfig cfg;
    cfg.k = 0;
    EXPECT_THROW(train(cfg, ts), InvalidInput);
    const auto m = train({}, ts);
    EXPECT_THROW(predict_genuine_probability(m, fv_of(layout_of(3), {1, 2, 3})), InvalidInput);
    EXPECT_THROW(parse_classifier("svm"), InvalidInput);
    EXPECT_EQ(parse_classifier("rf"), ClassifierKind::RanFor);
}

TEST(Models, SerializationRoundTripBitwise) {
    const auto b = blobs(9, 25, 4, 0.7);
    const auto l = layout_of(4);
    const auto ts = TrainingSet::build(l, b.rows, b.labels);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 3);
    for (auto kind : kAllClassifiers) {
        ClassifierConfig cfg;
        cfg.kind = kind;
        cfg.trees = 50;
        cfg.mlp.epochs = 50;
        cfg.seed = 11;
        const auto m = train(cfg, ts);
        const auto text = serialize_model(m);
        const auto back = deserialize_model(text);
        EXPECT_EQ(serialize_model(back), text);
        for (int q = 0; q < 50; ++q) {
            std::vector<double> v(4);
            for (std::size_t j = 0; j < 4; ++j) v[j] = g(rng) + 3.0 * j;
            EXPECT_EQ(predict_genuine_probability(m, fv_of(l, v)), predict_genuine_probability(back, fv_of(l, v)))
                << classifier_name(kind);
        }
        const auto path = std::filesystem::temp_directory_path() / "armauth_model_test.json";
        save_model(m, path);
        EXPECT_EQ(serialize_model(load_model(path)), text);
        std::filesystem::remove(path);
    }
    EXPECT_THROW(deserialize_model("{}"), InvalidInput);
    EXPECT_THROW(deserialize_model("not json"), InvalidInput);
}
