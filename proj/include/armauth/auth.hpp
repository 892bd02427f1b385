#pragma once

// Enrollment (training-set construction, model training, per-user EER
// threshold), continuous verification over window streams, score-level
// fusion and template update.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "armauth/classifiers.hpp"
#include "armauth/corpus.hpp"
#include "armauth/selection.hpp"

namespace armauth {

enum class SystemKind { AccOnly, RotOnly, FLF, SLF };
inline constexpr std::array<SystemKind, 4> kAllSystems{SystemKind::AccOnly, SystemKind::RotOnly, SystemKind::FLF,
                                                       SystemKind::SLF};
std::string_view system_name(SystemKind s) noexcept;
/// Accepts acc, rot, flf, slf and the display names.
SystemKind parse_system(std::string_view text);

struct TrainingSetSpec {
    std::size_t impostor_vectors_per_other_user = 4;
    std::uint64_t seed = 0;
};

/// Candidate's vectors plus the first few consecutive vectors of every other
/// user, with the genuine class bootstrapped to the impostor count. Rows are
/// genuine first, then impostors by ascending user id.
struct LabeledRows {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<std::string> warnings;
};

/// `corpus` maps user id to that user's vectors for the training split.
LabeledRows build_training_rows(int candidate, const std::map<int, std::vector<FeatureVector>>& corpus,
                                const TrainingSetSpec& spec);

TrainingSet build_training_set(int candidate, const std::map<int, std::vector<FeatureVector>>& corpus,
                               const TrainingSetSpec& spec, std::vector<std::string>* warnings = nullptr);

struct ScoreSet {
    std::vector<double> genuine;
    std::vector<double> impostor;
};

struct EerPoint {
    double threshold = 0.5;
    double far = 0.0;
    double frr = 0.0;
};

/// Fraction of impostor scores >= t.
double false_accept_rate(std::span<const double> impostor, double t);
/// Fraction of genuine scores < t.
double false_reject_rate(std::span<const double> genuine, double t);

/// Scans 0, 1 and the midpoints between adjacent distinct scores; picks the
/// threshold minimizing |FAR - FRR|, then FAR + FRR, then the threshold.
EerPoint compute_eer_threshold(const ScoreSet& scores);

struct FusionWeights {
    double w_acc = 0.5;
    double w_rot() const noexcept { return 1.0 - w_acc; }
};

double fuse_scores_slf(double s_acc, double s_rot, FusionWeights w);

/// Feature layouts used by each system.
struct SystemSubsets {
    FeatureLayout acc = acc_layout();
    FeatureLayout rot = rot_layout();
    FeatureLayout fused = fused_layout();
};

struct EnrollmentConfig {
    ClassifierConfig classifier;
    TrainingSetSpec training;
    SystemSubsets subsets;
    FusionWeights slf_weights;
    // Refit the SLF threshold on fused training scores; otherwise average
    // the two single-modality thresholds with the same weights.
    bool slf_refit_threshold = true;
};

struct UserTemplate {
    int user_id = 0;
    SystemKind system = SystemKind::FLF;
    std::vector<Model> models;  // one, or two (acc, rot) for SLF
    double threshold = 0.5;
    FeatureLayout feature_subset;
    FusionWeights weights;
    SplitId created_from;
    EerPoint training_eer;
};

/// Paired acceleration/rotation features of one window.
struct WindowFeatures {
    FeatureVector acc;
    FeatureVector rot;
};

std::vector<WindowFeatures> window_features(const SessionFeatures& s);

/// Which per-window vector a model consumes.
enum class FeatureSource { Acc, Rot, Fused };

/// One trained model with its scores on its own training rows.
struct EnrolledModality {
    Model model;
    std::vector<double> training_scores;
    std::vector<int> labels;
    std::vector<std::string> warnings;
};

EnrolledModality enroll_modality(int user, const SplitView& training_split, FeatureSource source,
                                 const FeatureLayout& subset, const EnrollmentConfig& cfg);

/// SLF template from two enrolled modalities (acc, rot).
UserTemplate assemble_slf(int user, SplitId created_from, const EnrolledModality& acc, const EnrolledModality& rot,
                          FusionWeights weights, bool refit_threshold);

/// Enrolls `user` on the given training split (which must also hold the
/// other users that serve as impostors).
UserTemplate enroll(int user, const SplitView& training_split, SystemKind system, const EnrollmentConfig& cfg);

/// Score of one window under a template.
double score_window(const UserTemplate& tpl, const WindowFeatures& w);

enum class Decision { Accept, Reject };

struct DecisionRecord {
    int user_id = 0;
    std::size_t window_start = 0;
    double score = 0.0;
    double threshold = 0.0;
    Decision decision = Decision::Reject;
    std::size_t consecutive_rejects = 0;
    std::string error;  // non-empty: window skipped
};

/// Independent accept/reject decision per window: accept iff score >= threshold.
std::vector<DecisionRecord> authenticate_features(const UserTemplate& tpl, std::span<const WindowFeatures> windows);

/// A raw window pair; either side may be absent if the template doesn't need it.
struct WindowPair {
    std::optional<Window> acc;
    std::optional<Window> rot;
};

std::vector<DecisionRecord> authenticate_stream(const UserTemplate& tpl, std::span<const WindowPair> windows,
                                                const ExtractionConfig& extraction = {});

/// Re-enrolls on a new session; the old template is left untouched.
UserTemplate update_template(const UserTemplate& old, const SplitView& new_split, const EnrollmentConfig& cfg);

std::string serialize_template(const UserTemplate& tpl);
UserTemplate deserialize_template(std::string_view text);
void save_template(const UserTemplate& tpl, const std::filesystem::path& path);
UserTemplate load_template(const std::filesystem::path& path);

}  // namespace armauth
