#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "armauth/selection.hpp"

namespace oracle {

inline double entropy_bits(const std::map<int, double>& counts, double n) {
    double h = 0.0;
    for (const auto& [k, c] : counts)
        if (c > 0) h -= (c / n) * std::log2(c / n);
    return h;
}

/// Exhaustive CFS: best merit over every non-empty subset, and the subsets
/// that reach it (within tol).
struct BruteForce {
    double merit = -1.0;
    std::vector<std::vector<std::size_t>> argmax;
};

inline double merit(const armauth::CorrelationMatrix& c, const std::vector<std::size_t>& s) {
    double fc = 0.0, ff = 0.0;
    for (auto i : s) fc += c.class_su[i];
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) ff += c.pair(s[a], s[b]);
    const double k = static_cast<double>(s.size());
    const double den = std::sqrt(k + 2.0 * ff);
    return den > 0 ? fc / den : 0.0;
}

inline BruteForce brute_force_cfs(const armauth::CorrelationMatrix& c, double tol = 1e-12) {
    BruteForce out;
    const std::size_t d = c.features;
    std::vector<std::pair<double, std::vector<std::size_t>>> all;
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < d; ++j)
            if (mask & (1u << j)) s.push_back(j);
        all.emplace_back(merit(c, s), s);
        out.merit = std::max(out.merit, all.back().first);
    }
    for (auto& [m, s] : all)
        if (m >= out.merit - tol) out.argmax.push_back(s);
    return out;
}

/// Crafted CFS instance: 3 classes, a few informative features with
/// different noise levels, some redundant copies and pure noise.
inline armauth::LabeledFeatureTable crafted_instance(std::uint64_t seed, std::size_t d) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> cls(0, 2);
    const std::size_t n = 300;
    std::vector<int> labels(n);
    for (auto& l : labels) l = cls(rng);
    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    std::uniform_real_distribution<double> noise_level(0.2, 3.0);
    std::vector<double> level(d);
    for (auto& l : level) l = noise_level(rng);
    for (std::size_t j = 0; j < d; ++j) {
        const int kind = static_cast<int>(j % 4);  // informative, informative, copy-ish, noise
        for (std::size_t i = 0; i < n; ++i) {
            const double c = labels[i];
            switch (kind) {
                case 0: cols[j][i] = c + level[j] * g(rng); break;
                case 1: cols[j][i] = (c == 1 ? 2.0 : 0.0) + level[j] * g(rng); break;
                case 2: cols[j][i] = cols[j - 2][i] + 0.1 * g(rng); break;
                default: cols[j][i] = g(rng); break;
            }
        }
    }
    std::vector<armauth::FeatureId> ids(armauth::acc_layout().begin(), armauth::acc_layout().begin() + d);
    return armauth::LabeledFeatureTable(armauth::FeatureLayout(ids), cols, labels);
}

}  // namespace oracle
