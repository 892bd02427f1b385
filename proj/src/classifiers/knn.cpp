#include <algorithm>
#include <numeric>

#include "armauth/simd.hpp"
#include "internal.hpp"

namespace armauth::detail {

model::Knn train_knn(const TrainingSet& ts) {
    model::Knn m;
    m.dims = ts.dims();
    m.rows.reserve(ts.size() * m.dims);
    for (const auto& r : ts.rows) m.rows.insert(m.rows.end(), r.begin(), r.end());
    m.labels = ts.labels;
    return m;
}

double score_knn(const model::Knn& m, const ClassifierConfig& cfg, std::span<const double> row) {
    const std::size_t n = m.labels.size();
    const std::size_t k = std::min(cfg.k, n);
    const auto& kern = simd::active();
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = kern.squared_distance(row.data(), m.rows.data() + i * m.dims, m.dims);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Ties in distance go to the earlier training row.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });

    if (cfg.knn_weighting == KnnWeighting::Uniform) {
        std::size_t genuine = 0;
        for (std::size_t i = 0; i < k; ++i) genuine += m.labels[order[i]] == kGenuine ? 1 : 0;
        return static_cast<double>(genuine) / static_cast<double>(k);
    }

    // Inverse-distance weighting; exact matches, if any, outvote everything.
    std::size_t exact = 0, exact_genuine = 0;
    double w_total = 0.0, w_genuine = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = dist[order[i]];
        const bool g = m.labels[order[i]] == kGenuine;
        if (d == 0.0) {
            ++exact;
            exact_genuine += g ? 1 : 0;
            continue;
        }
        const double w = 1.0 / std::sqrt(d);
        w_total += w;
        if (g) w_genuine += w;
    }
    if (exact > 0) return static_cast<double>(exact_genuine) / static_cast<double>(exact);
    return w_genuine / w_total;
}

}  // namespace armauth::detail
