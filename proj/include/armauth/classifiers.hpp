#pragma once

// Per-user binary classifiers (genuine vs impostor) that output the
// probability of the genuine class.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "armauth/features.hpp"

namespace armauth {

enum class ClassifierKind { kNNEuc, LogReg, MulPer, RanFor };
inline constexpr std::array<ClassifierKind, 4> kAllClassifiers{ClassifierKind::kNNEuc, ClassifierKind::LogReg,
                                                               ClassifierKind::MulPer, ClassifierKind::RanFor};

std::string_view classifier_name(ClassifierKind k) noexcept;
/// Accepts the display names and the CLI spellings knn, logreg, mlp, rf.
ClassifierKind parse_classifier(std::string_view text);

inline constexpr int kGenuine = 1;
inline constexpr int kImpostor = 0;

enum class KnnWeighting { Uniform, InverseDistance };

struct MlpConfig {
    std::size_t hidden_units = 0;  // 0: floor((d + 2) / 2)
    std::size_t epochs = 500;
    double learning_rate = 0.3;
    double momentum = 0.2;
    std::size_t batch_size = 1;
};

struct LogRegConfig {
    double ridge = 1e-8;
    std::size_t max_iters = 100;
    double tolerance = 1e-10;
};

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::kNNEuc;
    std::size_t k = 10;
    KnnWeighting knn_weighting = KnnWeighting::Uniform;
    std::size_t trees = 1000;
    std::uint64_t seed = 0;
    MlpConfig mlp;
    LogRegConfig logreg;
};

/// Per-feature z-score statistics; constant features get std 1.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> std;

    static NormStats fit(std::span<const std::vector<double>> rows);
    std::vector<double> apply(std::span<const double> raw) const;
};

struct TrainingSet {
    FeatureLayout layout;
    std::vector<std::vector<double>> rows;  // normalized
    std::vector<int> labels;                // kGenuine / kImpostor
    NormStats norm_stats;

    /// Fits the normalization on `raw` and stores normalized rows. Both
    /// classes must be present.
    static TrainingSet build(FeatureLayout layout, std::vector<std::vector<double>> raw, std::vector<int> labels);
    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dims() const noexcept { return layout.size(); }
};

namespace model {

struct Knn {
    std::size_t dims = 0;
    std::vector<double> rows;  // row-major, normalized
    std::vector<int> labels;
};

struct LogisticRegression {
    std::vector<double> weights;
    double intercept = 0.0;
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
};

struct Perceptron {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::vector<double> w_hidden;  // hidden x inputs
    std::vector<double> b_hidden;
    std::vector<double> w_out;
    double b_out = 0.0;
};

struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double genuine_fraction = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;
};

struct Forest {
    std::vector<Tree> trees;
    std::vector<double> oob_scores;  // per training row; -1 when never out of bag
};

}  // namespace model

class Model {
public:
    using Params = std::variant<model::Knn, model::LogisticRegression, model::Perceptron, model::Forest>;

    Model(ClassifierConfig cfg, FeatureLayout layout, NormStats norm, Params params);

    ClassifierKind kind() const noexcept { return cfg_.kind; }
    const ClassifierConfig& config() const noexcept { return cfg_; }
    const FeatureLayout& layout() const noexcept { return layout_; }
    const NormStats& norm_stats() const noexcept { return norm_; }
    const Params& params() const noexcept { return params_; }

    /// Score of an already normalized row.
    double score_normalized(std::span<const double> row) const;

private:
    ClassifierConfig cfg_;
    FeatureLayout layout_;
    NormStats norm_;
    Params params_;
};

Model train(const ClassifierConfig& cfg, const TrainingSet& ts);

/// Normalizes `fv` with the model's statistics and scores it in [0, 1].
double predict_genuine_probability(const Model& m, const FeatureVector& fv);

/// Versioned JSON model file. Scores survive a round trip bit for bit.
std::string serialize_model(const Model& m);
Model deserialize_model(std::string_view text);
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace armauth
