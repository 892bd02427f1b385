// Random forest of fully grown entropy-split trees on bootstrap resamples.
// Each split examines floor(log2 d) + 1 randomly drawn features and keeps
// drawing when none of them separates the node.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "armauth/rng.hpp"
#include "internal.hpp"

namespace armauth::detail {
namespace {

double binary_entropy(std::size_t pos, std::size_t total) {
    if (total == 0 || pos == 0 || pos == total) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& ts, Rng& rng) : ts_(ts), rng_(rng), d_(ts.dims()) {
        candidates_ = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(d_)))) + 1;
        candidates_ = std::min(candidates_, d_);
    }

    model::Tree build(std::vector<std::size_t> rows) {
        model::Tree tree;
        struct Pending {
            int node;
            std::vector<std::size_t> rows;
        };
        std::vector<Pending> stack;
        tree.nodes.emplace_back();
        stack.push_back({0, std::move(rows)});
        while (!stack.empty()) {
            Pending cur = std::move(stack.back());
            stack.pop_back();
            std::size_t genuine = 0;
            for (auto r : cur.rows) genuine += ts_.labels[r] == kGenuine ? 1 : 0;
            auto& node = tree.nodes[static_cast<std::size_t>(cur.node)];
            node.genuine_fraction = static_cast<double>(genuine) / static_cast<double>(cur.rows.size());
            if (genuine == 0 || genuine == cur.rows.size()) continue;

            const Split split = choose_split(cur.rows, genuine);
            if (split.feature < 0) continue;

            std::vector<std::size_t> left, right;
            for (auto r : cur.rows)
                (ts_.rows[r][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right).push_back(r);
            const int left_id = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& parent = tree.nodes[static_cast<std::size_t>(cur.node)];
            parent.feature = split.feature;
            parent.threshold = split.threshold;
            parent.left = left_id;
            parent.right = left_id + 1;
            stack.push_back({left_id + 1, std::move(right)});
            stack.push_back({left_id, std::move(left)});
        }
        return tree;
    }

private:
    Split choose_split(const std::vector<std::size_t>& rows, std::size_t genuine) {
        std::vector<std::size_t> features(d_);
        std::iota(features.begin(), features.end(), std::size_t{0});
        const double parent_h = binary_entropy(genuine, rows.size());
        Split best;
        for (std::size_t pos = 0; pos < d_; ++pos) {
            std::uniform_int_distribution<std::size_t> pick(pos, d_ - 1);
            std::swap(features[pos], features[pick(rng_)]);
            evaluate(features[pos], rows, genuine, parent_h, best);
            if (pos + 1 >= candidates_ && best.feature >= 0) break;
        }
        return best;
    }

    void evaluate(std::size_t f, const std::vector<std::size_t>& rows, std::size_t genuine, double parent_h,
                  Split& best) {
        sorted_.clear();
        for (auto r : rows) sorted_.emplace_back(ts_.rows[r][f], ts_.labels[r] == kGenuine);
        std::sort(sorted_.begin(), sorted_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
        const std::size_t n = sorted_.size();
        std::size_t left_genuine = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_genuine += sorted_[i].second ? 1 : 0;
            if (!(sorted_[i].first < sorted_[i + 1].first)) continue;
            const std::size_t nl = i + 1, nr = n - nl;
            const double h = (static_cast<double>(nl) * binary_entropy(left_genuine, nl) +
                              static_cast<double>(nr) * binary_entropy(genuine - left_genuine, nr)) /
                             static_cast<double>(n);
            const double gain = parent_h - h;
            if (gain > best.gain + 1e-12) {
                double thr = sorted_[i].first + 0.5 * (sorted_[i + 1].first - sorted_[i].first);
                if (!(thr < sorted_[i + 1].first)) thr = sorted_[i].first;
                best = Split{static_cast<int>(f), thr, gain};
            }
        }
    }

    const TrainingSet& ts_;
    Rng& rng_;
    std::size_t d_;
    std::size_t candidates_ = 1;
    std::vector<std::pair<double, bool>> sorted_;
};

bool tree_votes_genuine(const model::Tree& tree, std::span<const double> row) {
    std::size_t idx = 0;
    while (tree.nodes[idx].feature >= 0) {
        const auto& node = tree.nodes[idx];
        idx = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                     : node.right);
    }
    return tree.nodes[idx].genuine_fraction > 0.5;
}

}  // namespace

model::Forest train_forest(std::size_t trees, std::uint64_t seed, const TrainingSet& ts) {
    const std::size_t n = ts.size();
    model::Forest forest;
    forest.trees.reserve(trees);
    std::vector<std::size_t> oob_votes(n, 0), oob_count(n, 0);
    std::vector<bool> in_bag(n);
    for (std::size_t t = 0; t < trees; ++t) {
        Rng rng(derive_seed(seed, {seed_tag::kModel, 0x7266, t}));
        std::uniform_int_distribution<std::size_t> draw(0, n - 1);
        std::vector<std::size_t> sample(n);
        std::fill(in_bag.begin(), in_bag.end(), false);
        for (auto& s : sample) {
            s = draw(rng);
            in_bag[s] = true;
        }
        TreeBuilder builder(ts, rng);
        forest.trees.push_back(builder.build(std::move(sample)));
        for (std::size_t i = 0; i < n; ++i) {
            if (in_bag[i]) continue;
            ++oob_count[i];
            oob_votes[i] += tree_votes_genuine(forest.trees.back(), ts.rows[i]) ? 1 : 0;
        }
    }
    forest.oob_scores.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        forest.oob_scores[i] =
            oob_count[i] ? static_cast<double>(oob_votes[i]) / static_cast<double>(oob_count[i]) : -1.0;
    return forest;
}

double score_forest(const model::Forest& m, std::span<const double> row) {
    std::size_t votes = 0;
    for (const auto& tree : m.trees) votes += tree_votes_genuine(tree, row) ? 1 : 0;
    return static_cast<double>(votes) / static_cast<double>(m.trees.size());
}

}  // namespace armauth::detail
