#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "armauth/auth.hpp"
#include "armauth/error.hpp"
#include "armauth/synth.hpp"

using namespace armauth;

namespace {

FeatureLayout two_features() {
    return FeatureLayout(std::vector<FeatureId>(acc_layout().begin(), acc_layout().begin() + 2));
}

std::map<int, std::vector<FeatureVector>> toy_corpus(int users, std::size_t per_user) {
    std::map<int, std::vector<FeatureVector>> c;
    const auto l = two_features();
    for (int u = 1; u <= users; ++u)
        for (std::size_t i = 0; i < per_user; ++i)
            c[u].push_back({l, {static_cast<double>(u), static_cast<double>(i)}, {}});
    return c;
}

// Small synthetic population shared by the enrollment tests.
const FeatureCorpus& small_corpus() {
    static const FeatureCorpus corpus = [] {
        synth::GeneratorConfig g;
        g.users = 6;
        g.duration_s = 40.0;
        return build_feature_corpus(synth::generate_dataset(g), PipelineConfig{});
    }();
    return corpus;
}

SplitView view(SplitId split) {
    const auto users = small_corpus().users();
    return split_view(small_corpus(), split, users);
}

struct Oracle {
    double t, far, frr;
};

// Exhaustive scan over every candidate threshold with the stated order.
Oracle eer_oracle(const std::vector<double>& g, const std::vector<double>& im) {
    std::vector<double> all = g;
    all.insert(all.end(), im.begin(), im.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<double> cand{0.0, 1.0};
    for (std::size_t i = 0; i + 1 < all.size(); ++i) cand.push_back(all[i] + 0.5 * (all[i + 1] - all[i]));
    std::sort(cand.begin(), cand.end());
    Oracle best{-1, 0, 0};
    long double best_gap = 0, best_sum = 0;
    for (double t : cand) {
        long double a = 0, b = 0;
        for (double s : im) a += s >= t;
        for (double s : g) b += s < t;
        const long double far = a / im.size(), frr = b / g.size();
        const long double gap = std::fabs(far - frr), sum = far + frr;
        if (best.t < 0 || gap < best_gap - 1e-15L || (std::fabs(gap - best_gap) <= 1e-15L && sum < best_sum - 1e-15L)) {
            best = {t, static_cast<double>(far), static_cast<double>(frr)};
            best_gap = gap;
            best_sum = sum;
        }
    }
    return best;
}

}  // namespace

TEST(TrainingSetSpecTest, FortyUsersEighteenVectors) {
    const auto c = toy_corpus(40, 18);
    const auto rows = build_training_rows(7, c, {});
    ASSERT_EQ(rows.rows.size(), 312u);
    EXPECT_EQ(std::count(rows.labels.begin(), rows.labels.end(), kGenuine), 156);
    EXPECT_EQ(std::count(rows.labels.begin(), rows.labels.end(), kImpostor), 156);
    // originals first, in order
    for (std::size_t i = 0; i < 18; ++i) EXPECT_EQ(rows.rows[i], (std::vector<double>{7.0, double(i)}));
    for (std::size_t i = 0; i < 156; ++i) EXPECT_EQ(rows.rows[i][0], 7.0);
    // impostors: first four of each other user, ascending ids
    std::size_t r = 156;
    for (int u = 1; u <= 40; ++u) {
        if (u == 7) continue;
        for (std::size_t i = 0; i < 4; ++i, ++r) EXPECT_EQ(rows.rows[r], (std::vector<double>{double(u), double(i)}));
    }
    EXPECT_TRUE(rows.warnings.empty());
}

TEST(TrainingSetSpecTest, TwoUsers) {
    const auto rows = build_training_rows(1, toy_corpus(2, 10), {});
    ASSERT_EQ(rows.labels.size(), 8u);
    EXPECT_EQ(std::count(rows.labels.begin(), rows.labels.end(), kGenuine), 4);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rows.rows[i][0], 1.0);
}

TEST(TrainingSetSpecTest, DeterministicAndSeeded) {
    const auto c = toy_corpus(10, 5);
    TrainingSetSpec spec;
    spec.seed = 99;
    const auto a = build_training_rows(3, c, spec), b = build_training_rows(3, c, spec);
    EXPECT_EQ(a.rows, b.rows);
    spec.seed = 100;
    const auto d = build_training_rows(3, c, spec);
    EXPECT_EQ(std::multiset<std::vector<double>>(a.rows.begin(), a.rows.begin() + 5),
              std::multiset<std::vector<double>>(d.rows.begin(), d.rows.begin() + 5));
    EXPECT_NE(a.rows, d.rows);
}

TEST(TrainingSetSpecTest, ShortUsersWarnAndStayBalanced) {
    auto c = toy_corpus(5, 6);
    c[4].resize(2);
    std::vector<std::string> warnings;
    const auto ts = build_training_set(1, c, {}, &warnings);
    EXPECT_EQ(ts.size(), 2u * 14u);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("user 4"), std::string::npos);
    EXPECT_THROW(build_training_rows(9, c, {}), InvalidInput);
    EXPECT_THROW(build_training_rows(1, toy_corpus(1, 5), {}), InvalidInput);
}

TEST(TrainingSetSpecTest, MoreGenuineThanTargetIsSubsampled) {
    auto c = toy_corpus(3, 4);
    c[1] = toy_corpus(1, 50)[1];
    const auto rows = build_training_rows(1, c, {});
    EXPECT_EQ(rows.labels.size(), 16u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(rows.rows[i][0], 1.0);
}

TEST(Eer, DisjointScores) {
    const auto p = compute_eer_threshold({{1, 1, 1}, {0, 0}});
    EXPECT_EQ(p.threshold, 0.5);
    EXPECT_EQ(p.far, 0.0);
    EXPECT_EQ(p.frr, 0.0);
}

TEST(Eer, IdenticalDistributions) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> s(50);
    for (auto& v : s) v = u(rng);
    const auto p = compute_eer_threshold({s, s});
    EXPECT_EQ(p.far, 0.5);
    EXPECT_EQ(p.frr, 0.5);
    EXPECT_GT(p.threshold, 0.0);
    EXPECT_LT(p.threshold, 1.0);
}

TEST(Eer, HandExample) {
    // |FAR - FRR| is 1/3 at t = 0.7 but 1/6 at t = 0.85, so the stated rule picks 0.85.
    const auto p = compute_eer_threshold({{0.9, 0.8}, {0.2, 0.6, 0.9}});
    EXPECT_DOUBLE_EQ(p.threshold, 0.85);
    EXPECT_DOUBLE_EQ(p.far, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(p.frr, 0.5);
    EXPECT_DOUBLE_EQ(false_accept_rate(std::vector<double>{0.2, 0.6, 0.9}, 0.7), 1.0 / 3.0);
    EXPECT_EQ(false_reject_rate(std::vector<double>{0.9, 0.8}, 0.7), 0.0);
}

TEST(Eer, EmptyThrows) {
    EXPECT_THROW(compute_eer_threshold({{}, {0.1}}), InvalidInput);
    EXPECT_THROW(compute_eer_threshold({{0.1}, {}}), InvalidInput);
}

TEST(Eer, RandomInstancesMatchOracleAndBound) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> len(1, 40);
    for (int it = 0; it < 1000; ++it) {
        std::vector<double> g(len(rng)), im(len(rng));
        const double shift = u(rng) * 0.5;
        for (auto& v : g) v = shift + (1.0 - shift) * u(rng);
        for (auto& v : im) v = u(rng);
        const auto p = compute_eer_threshold({g, im});
        const auto o = eer_oracle(g, im);
        EXPECT_EQ(p.threshold, o.t);
        EXPECT_DOUBLE_EQ(p.far, o.far);
        EXPECT_DOUBLE_EQ(p.frr, o.frr);
        EXPECT_LE(std::fabs(p.far - p.frr), 1.0 / static_cast<double>(std::min(g.size(), im.size())) + 1e-12);
        double prev_far = 2, prev_frr = -1;
        for (double t = 0; t <= 1.0; t += 0.01) {
            const double far = false_accept_rate(im, t), frr = false_reject_rate(g, t);
            EXPECT_LE(far, prev_far);
            EXPECT_GE(frr, prev_frr);
            prev_far = far;
            prev_frr = frr;
        }
    }
}

TEST(Fusion, Examples) {
    EXPECT_EQ(fuse_scores_slf(0.3, 0.9, {1.0}), 0.3);
    EXPECT_EQ(fuse_scores_slf(0.3, 0.9, {0.0}), 0.9);
    EXPECT_DOUBLE_EQ(fuse_scores_slf(0.4, 0.8, {0.5}), 0.6);
    EXPECT_THROW(fuse_scores_slf(0.4, 0.8, {1.5}), InvalidInput);
    EXPECT_THROW(fuse_scores_slf(0.4, 0.8, {-0.1}), InvalidInput);
    for (double w = 0; w <= 1.0; w += 0.05) {
        const double f = fuse_scores_slf(0.2, 0.7, {w});
        EXPECT_GE(f, 0.2);
        EXPECT_LE(f, 0.7);
    }
}

TEST(Systems, Names) {
    EXPECT_EQ(parse_system("flf"), SystemKind::FLF);
    EXPECT_EQ(parse_system(system_name(SystemKind::RotOnly)), SystemKind::RotOnly);
    EXPECT_THROW(parse_system("xyz"), InvalidInput);
}

TEST(Enroll, SubsetsFollowSystem) {
    const auto split = view({1, 1});
    EnrollmentConfig cfg;
    const auto acc = enroll(1, split, SystemKind::AccOnly, cfg);
    EXPECT_EQ(acc.feature_subset, acc_layout());
    for (const auto& id : acc.feature_subset) EXPECT_EQ(id.modality, Modality::Acc);
    cfg.subsets.fused = FeatureLayout({fused_layout()[3], fused_layout()[40], fused_layout()[70]});
    const auto flf = enroll(1, split, SystemKind::FLF, cfg);
    EXPECT_EQ(flf.feature_subset, cfg.subsets.fused);
    EXPECT_EQ(flf.models[0].layout(), cfg.subsets.fused);
    const auto slf = enroll(1, split, SystemKind::SLF, cfg);
    EXPECT_EQ(slf.models.size(), 2u);
    EXPECT_EQ(slf.feature_subset, fused_layout());
    EXPECT_EQ(slf.created_from, (SplitId{1, 1}));
}

TEST(Enroll, ThresholdIsTrainingEer) {
    const auto split = view({1, 1});
    for (auto sys : kAllSystems) {
        const auto tpl = enroll(2, split, sys, {});
        EXPECT_EQ(tpl.threshold, tpl.training_eer.threshold);
        const auto own = authenticate_features(tpl, window_features(*split.at(2)));
        std::size_t rejects = 0;
        for (const auto& r : own) {
            EXPECT_TRUE(r.error.empty());
            rejects += r.decision == Decision::Reject;
        }
        EXPECT_LE(static_cast<double>(rejects) / static_cast<double>(own.size()), 0.5);
    }
}

TEST(Enroll, Errors) {
    const auto split = view({1, 1});
    EXPECT_THROW(enroll(99, split, SystemKind::FLF, {}), InvalidInput);
    SplitView one{{1, split.at(1)}};
    EXPECT_THROW(enroll(1, one, SystemKind::FLF, {}), InvalidInput);
}

TEST(Enroll, SlfEndpointsMatchSingleModality) {
    const auto split = view({1, 1});
    const auto windows = window_features(*view({1, 2}).at(3));
    EnrollmentConfig cfg;
    cfg.slf_weights = {1.0};
    const auto slf_a = enroll(3, split, SystemKind::SLF, cfg);
    const auto acc = enroll(3, split, SystemKind::AccOnly, cfg);
    EXPECT_EQ(slf_a.threshold, acc.threshold);
    cfg.slf_weights = {0.0};
    const auto slf_r = enroll(3, split, SystemKind::SLF, cfg);
    const auto rot = enroll(3, split, SystemKind::RotOnly, cfg);
    EXPECT_EQ(slf_r.threshold, rot.threshold);
    const auto da = authenticate_features(slf_a, windows), db = authenticate_features(acc, windows);
    const auto dr = authenticate_features(slf_r, windows), ds = authenticate_features(rot, windows);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        EXPECT_EQ(da[i].score, db[i].score);
        EXPECT_EQ(da[i].decision, db[i].decision);
        EXPECT_EQ(dr[i].score, ds[i].score);
        EXPECT_EQ(dr[i].decision, ds[i].decision);
    }
}

TEST(Enroll, AverageThresholdOption) {
    EnrollmentConfig cfg;
    cfg.slf_refit_threshold = false;
    cfg.slf_weights = {0.3};
    const auto split = view({1, 1});
    const auto slf = enroll(4, split, SystemKind::SLF, cfg);
    const auto a = enroll(4, split, SystemKind::AccOnly, cfg), r = enroll(4, split, SystemKind::RotOnly, cfg);
    EXPECT_DOUBLE_EQ(slf.threshold, 0.3 * a.threshold + 0.7 * r.threshold);
}

TEST(Verify, BoundaryAccepts) {
    const auto split = view({1, 1});
    auto tpl = enroll(1, split, SystemKind::FLF, {});
    const auto windows = window_features(*view({1, 2}).at(1));
    const double s = score_window(tpl, windows[0]);
    tpl.threshold = s;
    EXPECT_EQ(authenticate_features(tpl, std::span(windows).first(1))[0].decision, Decision::Accept);
    tpl.threshold = std::nextafter(s, 2.0);
    EXPECT_EQ(authenticate_features(tpl, std::span(windows).first(1))[0].decision, Decision::Reject);
    tpl.threshold = 0.0;
    for (const auto& r : authenticate_features(tpl, windows)) EXPECT_EQ(r.decision, Decision::Accept);
}

TEST(Verify, ConsecutiveRejectCounter) {
    auto tpl = enroll(1, view({1, 1}), SystemKind::FLF, {});
    tpl.threshold = 1.5;
    const auto windows = window_features(*view({1, 2}).at(1));
    const auto recs = authenticate_features(tpl, windows);
    for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(recs[i].consecutive_rejects, i + 1);
}

TEST(Verify, StreamMatchesPrecomputedFeatures) {
    synth::GeneratorConfig g;
    g.users = 6;
    g.duration_s = 40.0;
    const auto params = synth::generate_user(g, 1);
    const auto [acc_raw, rot_raw] = synth::generate_session(params, 1, 2, g.duration_s, g.fs);
    PipelineConfig pc;
    const auto acc_w = segment_windows(preprocess(acc_raw, pc.smoothing), pc.window, {1, 1, 2});
    const auto rot_w = segment_windows(preprocess(rot_raw, pc.smoothing), pc.window, {1, 1, 2});
    ASSERT_EQ(acc_w.size(), rot_w.size());

    const auto tpl = enroll(1, view({1, 1}), SystemKind::FLF, {});
    std::vector<WindowPair> pairs;
    for (std::size_t i = 0; i < acc_w.size(); ++i) pairs.push_back({acc_w[i], rot_w[i]});
    auto bad = pairs[0];
    bad.rot->channels[2][5] = NAN;
    pairs.push_back(bad);
    auto shorty = pairs[1];
    for (auto& c : shorty.acc->channels) c.resize(2);
    pairs.push_back(shorty);
    pairs.push_back({acc_w[0], std::nullopt});

    const auto recs = authenticate_stream(tpl, pairs);
    const auto expected = authenticate_features(tpl, window_features(*view({1, 2}).at(1)));
    ASSERT_EQ(recs.size(), acc_w.size() + 3);
    for (std::size_t i = 0; i < acc_w.size(); ++i) {
        EXPECT_TRUE(recs[i].error.empty());
        EXPECT_EQ(recs[i].score, expected[i].score);
        EXPECT_EQ(recs[i].window_start, expected[i].window_start);
    }
    for (std::size_t i = acc_w.size(); i < recs.size(); ++i) EXPECT_FALSE(recs[i].error.empty());

    // a rotation-only template does not need the acceleration side
    const auto rot_tpl = enroll(1, view({1, 1}), SystemKind::RotOnly, {});
    const std::vector<WindowPair> rot_only{{std::nullopt, rot_w[0]}};
    EXPECT_TRUE(authenticate_stream(rot_tpl, rot_only)[0].error.empty());
}

TEST(Templates, RoundTripAndUpdate) {
    const auto split = view({1, 1});
    EnrollmentConfig cfg;
    cfg.classifier.kind = ClassifierKind::RanFor;
    cfg.classifier.trees = 40;
    cfg.classifier.seed = 5;
    const auto windows = window_features(*view({2, 1}).at(2));
    for (auto sys : kAllSystems) {
        const auto tpl = enroll(2, split, sys, cfg);
        const auto text = serialize_template(tpl);
        const auto back = deserialize_template(text);
        EXPECT_EQ(serialize_template(back), text);
        EXPECT_EQ(back.threshold, tpl.threshold);
        EXPECT_EQ(back.feature_subset, tpl.feature_subset);
        const auto a = authenticate_features(tpl, windows), b = authenticate_features(back, windows);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].score, b[i].score);
    }
    const auto tpl = enroll(2, split, SystemKind::FLF, cfg);
    const auto path = std::filesystem::temp_directory_path() / "armauth_tpl_test" / "t.json";
    save_template(tpl, path);
    EXPECT_EQ(serialize_template(load_template(path)), serialize_template(tpl));
    std::filesystem::remove_all(path.parent_path());
    EXPECT_THROW(deserialize_template("{\"format\":\"other\"}"), InvalidInput);

    const auto before = serialize_template(tpl);
    const auto u1 = update_template(tpl, view({2, 1}), cfg);
    const auto u2 = update_template(tpl, view({2, 1}), cfg);
    EXPECT_EQ(serialize_template(tpl), before);
    EXPECT_EQ(u1.threshold, u2.threshold);
    EXPECT_EQ(serialize_template(u1), serialize_template(u2));
    EXPECT_EQ(u1.created_from, (SplitId{2, 1}));
}
