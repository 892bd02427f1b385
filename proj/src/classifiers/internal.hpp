#pragma once

#include <cmath>

#include "armauth/classifiers.hpp"

namespace armauth::detail {

model::Knn train_knn(const TrainingSet& ts);
double score_knn(const model::Knn& m, const ClassifierConfig& cfg, std::span<const double> row);

model::LogisticRegression train_logreg(const LogRegConfig& cfg, const TrainingSet& ts);
double score_logreg(const model::LogisticRegression& m, std::span<const double> row);

model::Perceptron train_mlp(const MlpConfig& cfg, std::uint64_t seed, const TrainingSet& ts);
double score_mlp(const model::Perceptron& m, std::span<const double> row);

model::Forest train_forest(std::size_t trees, std::uint64_t seed, const TrainingSet& ts);
double score_forest(const model::Forest& m, std::span<const double> row);

inline double logistic(double z) noexcept {
    // Split on sign to avoid overflow in exp.
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace armauth::detail
