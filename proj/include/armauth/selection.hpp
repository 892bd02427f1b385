#pragma once

// Entropy-based feature ranking and correlation-based feature subset
// selection (best-first search over the CFS merit).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "armauth/features.hpp"

namespace armauth {

/// Column-major table of feature values with one class label per row.
class LabeledFeatureTable {
public:
    LabeledFeatureTable() = default;
    LabeledFeatureTable(FeatureLayout layout, std::vector<std::vector<double>> columns, std::vector<int> labels);
    /// All vectors must share one layout.
    static LabeledFeatureTable from_vectors(std::span<const FeatureVector> rows, std::span<const int> labels);

    const FeatureLayout& layout() const noexcept { return layout_; }
    std::size_t rows() const noexcept { return labels_.size(); }
    std::size_t features() const noexcept { return columns_.size(); }
    std::span<const double> column(std::size_t j) const noexcept { return columns_[j]; }
    std::span<const int> labels() const noexcept { return labels_; }

    /// Restricts to the given row indices.
    LabeledFeatureTable subset_rows(std::span<const std::size_t> rows) const;
    /// Restricts to the given feature ids (subset order).
    LabeledFeatureTable subset_features(const FeatureLayout& ids) const;

private:
    FeatureLayout layout_;
    std::vector<std::vector<double>> columns_;
    std::vector<int> labels_;
};

/// Equal-width binning over [min, max]; a constant column maps to bin 0.
std::vector<int> discretize(std::span<const double> column, std::size_t bins);

// Entropies in bits.
double entropy(std::span<const int> symbols);
double joint_entropy(std::span<const int> a, std::span<const int> b);
/// H(target | given), computed bin by bin.
double conditional_entropy(std::span<const int> target, std::span<const int> given);
/// H(labels) - H(labels | feature).
double information_gain(std::span<const int> feature, std::span<const int> labels);
/// 2 * I(a;b) / (H(a) + H(b)); 0 when both entropies vanish.
double symmetric_uncertainty(std::span<const int> a, std::span<const int> b);

struct RankedFeature {
    FeatureId feature;
    double mean_gain = 0.0;
    double std_gain = 0.0;
};

struct RankingConfig {
    std::size_t folds = 10;
    std::size_t bins = 10;
    std::uint64_t seed = 0;
};

/// Stratified k-fold fold assignment (fold id per row), seeded.
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed);

/// Information gain of every feature, measured on the training part of each
/// of `folds` stratified folds and reported as mean and sample standard
/// deviation, sorted by descending mean (ties keep layout order).
std::vector<RankedFeature> info_gain_rank(const LabeledFeatureTable& table, const RankingConfig& cfg = {});

enum class SubsetOrigin { CFS_Acc, CFS_Rot, SSCS, SSTF, All, Custom };
std::string_view origin_name(SubsetOrigin o) noexcept;

struct FeatureSubset {
    FeatureLayout members;
    double merit = 0.0;
    SubsetOrigin origin = SubsetOrigin::Custom;
};

/// Symmetric uncertainty of every feature with the class and between every
/// pair of features, on discretized columns.
struct CorrelationMatrix {
    std::size_t features = 0;
    std::vector<double> class_su;
    std::vector<double> pair_su;  // features x features, symmetric

    double pair(std::size_t i, std::size_t j) const noexcept { return pair_su[i * features + j]; }
};

CorrelationMatrix compute_correlations(const LabeledFeatureTable& table, std::size_t bins = 10);

/// k * mean(feature-class) / sqrt(k + k(k-1) * mean(feature-feature)).
double cfs_merit(const CorrelationMatrix& corr, std::span<const std::size_t> subset);

struct CfsConfig {
    std::size_t bins = 10;
    std::size_t max_stale = 5;
};

/// Forward best-first search from the empty set. Stops after `max_stale`
/// consecutive expansions that fail to improve the best merit.
FeatureSubset cfs_select(const LabeledFeatureTable& table, const CfsConfig& cfg = {},
                         SubsetOrigin origin = SubsetOrigin::Custom);
/// Same search on precomputed correlations; returns member indices ascending.
std::vector<std::size_t> cfs_best_first(const CorrelationMatrix& corr, std::size_t max_stale, double* merit_out = nullptr);

struct FusedSubsets {
    FeatureSubset sscs;
    FeatureSubset sstf;
};

/// SSCS is the union of the per-modality selections; SSTF reruns CFS on the
/// full fused table.
FusedSubsets build_fused_subsets(const FeatureSubset& acc_sel, const FeatureSubset& rot_sel,
                                 const LabeledFeatureTable& full_table, const CfsConfig& cfg = {});

/// Union of two subsets, ordered as in the fused layout.
FeatureLayout union_in_fused_order(const FeatureLayout& a, const FeatureLayout& b);

}  // namespace armauth
