#include <gtest/gtest.h>

#include <filesystem>

#include "armauth/error.hpp"
#include "armauth/io.hpp"
#include "armauth/synth.hpp"

using namespace armauth;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(SensorCsv, RoundTrip) {
    const std::vector<SensorSample> s{{0.0, 1.5, -2.25, 9.81}, {0.04, 0.1, 0.2, 0.30000000000000004}};
    const auto back = parse_sensor_csv(format_sensor_csv(s));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].t, 0.04);
    EXPECT_EQ(back[1].z, 0.30000000000000004);
    EXPECT_EQ(back[0].y, -2.25);
}

TEST(SensorCsv, Errors) {
    EXPECT_THROW(parse_sensor_csv("a,b,c,d\n1,2,3,4\n"), InvalidInput);
    EXPECT_THROW(parse_sensor_csv("t,x,y,z\n1,2,3\n"), InvalidInput);
    EXPECT_THROW(parse_sensor_csv("t,x,y,z\n1,2,abc,4\n"), InvalidInput);
    try {
        parse_sensor_csv("t,x,y,z\n0,1,2,3\n1,2,x,4\n", "f.csv");
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("f.csv"), std::string::npos);
    }
    EXPECT_THROW(read_sensor_csv("/nonexistent/accel.csv"), InvalidInput);
}

TEST(Dataset, WriteLoadRoundTrip) {
    TempDir dir("armauth_io_dataset");
    synth::GeneratorConfig g;
    g.users = 3;
    g.duration_s = 20.0;
    synth::write_dataset(g, dir.path);
    EXPECT_TRUE(fs::exists(dir.path / "manifest.json"));
    EXPECT_TRUE(fs::exists(dir.path / "2" / "p2s1" / "gyro.csv"));
    const auto loaded = load_dataset(dir.path);
    const auto direct = synth::generate_dataset(g);
    ASSERT_EQ(loaded.sessions.size(), 12u);
    EXPECT_EQ(loaded.users(), (std::vector<int>{1, 2, 3}));
    for (const auto& [key, rec] : direct.sessions) {
        const auto& l = loaded.sessions.at(key);
        EXPECT_EQ(l.acc.channels, rec.acc.channels);
        EXPECT_EQ(l.rot.channels, rec.rot.channels);
    }

    fs::remove(dir.path / "3" / "p1s2" / "accel.csv");
    try {
        load_dataset(dir.path);
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("p1s2"), std::string::npos);
    }
    EXPECT_THROW(load_dataset(dir.path / "missing"), InvalidInput);
}

TEST(Files, AtomicWriteCreatesParents) {
    TempDir dir("armauth_io_atomic");
    const auto p = dir.path / "a" / "b.txt";
    write_file_atomic(p, "one");
    write_file_atomic(p, "two");
    EXPECT_EQ(read_file(p), "two");
    EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
    EXPECT_THROW(read_file(dir.path / "none"), InvalidInput);
}

TEST(Subsets, ParseAndFormat) {
    const FeatureLayout l({fused_layout()[0], fused_layout()[75], fused_layout()[33]});
    const auto text = format_subset(l);
    EXPECT_EQ(parse_subset(text), l);
    EXPECT_EQ(parse_subset("# comment\n\nacc.API_X\n  rot.MRR_Z  \n").size(), 2u);
    EXPECT_THROW(parse_subset("acc.API_X\nacc.API_X\n"), InvalidInput);
    EXPECT_THROW(parse_subset("# nothing\n"), InvalidInput);
    EXPECT_THROW(parse_subset("acc.MRR_X\n"), InvalidInput);
    EXPECT_THROW(parse_subset("acc.FOO_X\n"), InvalidInput);
}

TEST(Reports, FeatureCsvColumns) {
    synth::GeneratorConfig g;
    g.users = 2;
    g.duration_s = 20.0;
    const auto corpus = build_feature_corpus(synth::generate_dataset(g), PipelineConfig{});
    const auto acc = format_feature_csv(corpus, LayoutKind::Acc32);
    const auto header = acc.substr(0, acc.find('\n'));
    EXPECT_EQ(header.rfind("user_id,phase,session,window_start,API_X,API_Y,API_Z,API_M,", 0), 0u);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 4 + 32 - 1);
    const auto rot = format_feature_csv(corpus, LayoutKind::Rot44);
    const auto rh = rot.substr(0, rot.find('\n'));
    EXPECT_EQ(std::count(rh.begin(), rh.end(), ','), 4 + 44 - 1);
    EXPECT_NE(rh.find("MRR_Z"), std::string::npos);
    // 2 users x 4 sessions x 8 windows (20 s at a 4 s slide)
    std::size_t windows = 0;
    for (const auto& [k, sf] : corpus.sessions) windows += sf.size();
    EXPECT_EQ(std::count(acc.begin(), acc.end(), '\n'), static_cast<long>(windows) + 1);
}

TEST(Reports, DecisionLog) {
    std::vector<DecisionRecord> recs(3);
    recs[0] = {4, 0, 0.75, 0.5, Decision::Accept, 0, ""};
    recs[1] = {4, 100, 0.25, 0.5, Decision::Reject, 1, ""};
    recs[2] = {4, 200, 0, 0.5, Decision::Reject, 1, "window too short"};
    EXPECT_EQ(format_decision_log(recs),
              "user_id,window_start,score,threshold,decision\n4,0,0.75,0.5,accept\n4,100,0.25,0.5,reject\n4,200,,,error\n");
}

TEST(Reports, Ranking) {
    const std::vector<RankedFeature> r{{rot_layout()[0], 1.25, 0.5}, {acc_layout()[1], 0.5, 0}};
    EXPECT_EQ(format_ranking_csv(r), "rank,feature,mean_gain,std_gain\n1,API_X,1.25,0.5\n2,API_Y,0.5,0\n");
}
