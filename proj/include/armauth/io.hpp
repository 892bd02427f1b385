#pragma once

// File formats: sensor CSVs, dataset trees, feature/ranking/subset exports
// and decision logs. Every writer goes through write_file_atomic.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "armauth/auth.hpp"
#include "armauth/corpus.hpp"
#include "armauth/selection.hpp"
#include "armauth/signal.hpp"

namespace armauth {

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Sensor CSV: header t,x,y,z.
std::vector<SensorSample> parse_sensor_csv(std::string_view text, const std::string& origin = "<memory>");
std::vector<SensorSample> read_sensor_csv(const std::filesystem::path& path);
std::string format_sensor_csv(std::span<const SensorSample> samples);

/// data/<user>/p<phase>s<session>/{accel.csv,gyro.csv}
std::filesystem::path session_dir(const std::filesystem::path& root, const SessionKey& key);

/// Loads every session directory under `root` that has both sensor files.
Dataset load_dataset(const std::filesystem::path& root, double target_hz = kNominalRateHz);
void save_recording(const std::filesystem::path& root, const SessionKey& key, std::span<const SensorSample> acc,
                    std::span<const SensorSample> rot);

/// One row per window: user_id,phase,session,window_start then the features
/// as <BASE>_<AXIS>.
std::string format_feature_csv(const FeatureCorpus& corpus, LayoutKind kind);

/// rank,feature,mean_gain,std_gain
std::string format_ranking_csv(std::span<const RankedFeature> ranking);

/// One qualified feature name per line, e.g. acc.MED_Y.
std::string format_subset(const FeatureLayout& subset);
FeatureLayout parse_subset(std::string_view text);
FeatureLayout read_subset(const std::filesystem::path& path);

/// user_id,window_start,score,threshold,decision
std::string format_decision_log(std::span<const DecisionRecord> records);

}  // namespace armauth
