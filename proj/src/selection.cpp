#include "armauth/selection.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numeric>
#include <set>
#include <string>

#include "armauth/error.hpp"
#include "armauth/rng.hpp"

namespace armauth {

LabeledFeatureTable::LabeledFeatureTable(FeatureLayout layout, std::vector<std::vector<double>> columns,
                                         std::vector<int> labels)
    : layout_(std::move(layout)), columns_(std::move(columns)), labels_(std::move(labels)) {
    if (columns_.size() != layout_.size())
        throw InvalidInput("table has " + std::to_string(columns_.size()) + " columns for a layout of " +
                           std::to_string(layout_.size()));
    for (const auto& c : columns_)
        if (c.size() != labels_.size()) throw InvalidInput("column length differs from label count");
}

LabeledFeatureTable LabeledFeatureTable::from_vectors(std::span<const FeatureVector> rows, std::span<const int> labels) {
    if (rows.size() != labels.size()) throw InvalidInput("rows and labels differ in length");
    if (rows.empty()) throw InvalidInput("empty feature table");
    const FeatureLayout layout = rows.front().layout;
    std::vector<std::vector<double>> cols(layout.size(), std::vector<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].layout == layout)) throw InvalidInput("rows do not share one layout");
        for (std::size_t j = 0; j < layout.size(); ++j) cols[j][i] = rows[i].values[j];
    }
    return LabeledFeatureTable(layout, std::move(cols), std::vector<int>(labels.begin(), labels.end()));
}

LabeledFeatureTable LabeledFeatureTable::subset_rows(std::span<const std::size_t> rows) const {
    std::vector<std::vector<double>> cols(columns_.size(), std::vector<double>(rows.size()));
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        labels[i] = labels_[rows[i]];
        for (std::size_t j = 0; j < columns_.size(); ++j) cols[j][i] = columns_[j][rows[i]];
    }
    return LabeledFeatureTable(layout_, std::move(cols), std::move(labels));
}

LabeledFeatureTable LabeledFeatureTable::subset_features(const FeatureLayout& ids) const {
    std::vector<std::vector<double>> cols;
    cols.reserve(ids.size());
    for (const auto& id : ids) {
        const auto idx = layout_.index_of(id);
        if (!idx) throw InvalidInput("feature " + id.qualified_name() + " not in table");
        cols.push_back(columns_[*idx]);
    }
    return LabeledFeatureTable(ids, std::move(cols), labels_);
}

// ---------------------------------------------------------------------------

std::vector<int> discretize(std::span<const double> column, std::size_t bins) {
    if (column.empty()) throw InvalidInput("cannot discretize an empty column");
    if (bins < 2) throw InvalidInput("discretization needs at least two bins");
    const auto [lo_it, hi_it] = std::minmax_element(column.begin(), column.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<int> out(column.size(), 0);
    if (!(hi > lo)) return out;
    const double width = (hi - lo) / static_cast<double>(bins);
    const int last = static_cast<int>(bins) - 1;
    for (std::size_t i = 0; i < column.size(); ++i) {
        const int b = static_cast<int>(std::floor((column[i] - lo) / width));
        out[i] = std::clamp(b, 0, last);
    }
    return out;
}

namespace {

struct Dense {
    std::vector<int> codes;
    std::size_t k = 0;
};

Dense densify(std::span<const int> symbols) {
    std::vector<int> distinct(symbols.begin(), symbols.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    Dense d;
    d.k = distinct.size();
    d.codes.resize(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i)
        d.codes[i] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), symbols[i]) - distinct.begin());
    return d;
}

// Sums over sorted counts so the result ignores cell order (keeps SU exactly symmetric).
double entropy_of_counts(std::span<const std::size_t> cells, std::size_t n) {
    std::vector<std::size_t> counts;
    for (auto c : cells)
        if (c != 0) counts.push_back(c);
    std::sort(counts.begin(), counts.end());
    double h = 0.0;
    const auto total = static_cast<double>(n);
    for (auto c : counts) {
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

void check_same_length(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw InvalidInput("symbol sequences differ in length");
}

}  // namespace

double entropy(std::span<const int> symbols) {
    if (symbols.empty()) return 0.0;
    const Dense d = densify(symbols);
    std::vector<std::size_t> counts(d.k, 0);
    for (int c : d.codes) ++counts[static_cast<std::size_t>(c)];
    return entropy_of_counts(counts, symbols.size());
}

double joint_entropy(std::span<const int> a, std::span<const int> b) {
    check_same_length(a, b);
    if (a.empty()) return 0.0;
    const Dense da = densify(a), db = densify(b);
    std::vector<std::size_t> counts(da.k * db.k, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        ++counts[static_cast<std::size_t>(da.codes[i]) * db.k + static_cast<std::size_t>(db.codes[i])];
    return entropy_of_counts(counts, a.size());
}

double conditional_entropy(std::span<const int> target, std::span<const int> given) {
    check_same_length(target, given);
    if (target.empty()) return 0.0;
    const Dense dt = densify(target), dg = densify(given);
    std::vector<std::size_t> counts(dg.k * dt.k, 0);
    std::vector<std::size_t> given_counts(dg.k, 0);
    for (std::size_t i = 0; i < target.size(); ++i) {
        ++counts[static_cast<std::size_t>(dg.codes[i]) * dt.k + static_cast<std::size_t>(dt.codes[i])];
        ++given_counts[static_cast<std::size_t>(dg.codes[i])];
    }
    double h = 0.0;
    const auto n = static_cast<double>(target.size());
    for (std::size_t g = 0; g < dg.k; ++g) {
        if (given_counts[g] == 0) continue;
        const double weight = static_cast<double>(given_counts[g]) / n;
        h += weight * entropy_of_counts(std::span(counts).subspan(g * dt.k, dt.k), given_counts[g]);
    }
    return h;
}

double information_gain(std::span<const int> feature, std::span<const int> labels) {
    check_same_length(feature, labels);
    return std::max(0.0, entropy(labels) - conditional_entropy(labels, feature));
}

double symmetric_uncertainty(std::span<const int> a, std::span<const int> b) {
    check_same_length(a, b);
    const double ha = entropy(a), hb = entropy(b);
    const double denom = ha + hb;
    if (!(denom > 0.0)) return 0.0;
    const double mutual = ha + hb - joint_entropy(a, b);
    return std::clamp(2.0 * mutual / denom, 0.0, 1.0);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, std::uint64_t seed) {
    if (folds == 0) throw InvalidInput("need at least one fold");
    const Dense d = densify(labels);
    std::vector<std::vector<std::size_t>> by_class(d.k);
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(d.codes[i])].push_back(i);
    Rng rng(derive_seed(seed, {seed_tag::kFolds}));
    std::vector<std::size_t> assignment(labels.size(), 0);
    std::size_t next = 0;
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (auto idx : members) {
            assignment[idx] = next;
            next = (next + 1) % folds;
        }
    }
    return assignment;
}

std::vector<RankedFeature> info_gain_rank(const LabeledFeatureTable& table, const RankingConfig& cfg) {
    const std::size_t n = table.rows();
    if (n == 0) throw InvalidInput("cannot rank features of an empty table");
    const std::size_t folds = std::clamp<std::size_t>(cfg.folds, 1, n);
    const auto assignment = stratified_folds(table.labels(), folds, cfg.seed);

    std::vector<std::vector<double>> gains(table.features());
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train;
        for (std::size_t i = 0; i < n; ++i)
            if (folds == 1 || assignment[i] != f) train.push_back(i);
        std::vector<int> labels(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) labels[i] = table.labels()[train[i]];
        std::vector<double> col(train.size());
        for (std::size_t j = 0; j < table.features(); ++j) {
            const auto src = table.column(j);
            for (std::size_t i = 0; i < train.size(); ++i) col[i] = src[train[i]];
            gains[j].push_back(information_gain(discretize(col, cfg.bins), labels));
        }
    }

    std::vector<RankedFeature> ranked;
    ranked.reserve(table.features());
    for (std::size_t j = 0; j < table.features(); ++j) {
        const auto& g = gains[j];
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
        double ss = 0.0;
        for (double v : g) ss += (v - mean) * (v - mean);
        const double sd = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1)) : 0.0;
        ranked.push_back({table.layout()[j], mean, sd});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedFeature& a, const RankedFeature& b) { return a.mean_gain > b.mean_gain; });
    return ranked;
}

// ---------------------------------------------------------------------------

std::string_view origin_name(SubsetOrigin o) noexcept {
    switch (o) {
        case SubsetOrigin::CFS_Acc: return "CFS_Acc";
        case SubsetOrigin::CFS_Rot: return "CFS_Rot";
        case SubsetOrigin::SSCS: return "SSCS";
        case SubsetOrigin::SSTF: return "SSTF";
        case SubsetOrigin::All: return "All";
        case SubsetOrigin::Custom: return "Custom";
    }
    return "?";
}

CorrelationMatrix compute_correlations(const LabeledFeatureTable& table, std::size_t bins) {
    const std::size_t d = table.features();
    CorrelationMatrix corr;
    corr.features = d;
    corr.class_su.resize(d);
    corr.pair_su.assign(d * d, 0.0);
    std::vector<std::vector<int>> disc(d);
    for (std::size_t j = 0; j < d; ++j) {
        disc[j] = discretize(table.column(j), bins);
        corr.class_su[j] = symmetric_uncertainty(disc[j], table.labels());
    }
    for (std::size_t i = 0; i < d; ++i) {
        corr.pair_su[i * d + i] = 1.0;
        for (std::size_t j = i + 1; j < d; ++j) {
            const double su = symmetric_uncertainty(disc[i], disc[j]);
            corr.pair_su[i * d + j] = su;
            corr.pair_su[j * d + i] = su;
        }
    }
    return corr;
}

double cfs_merit(const CorrelationMatrix& corr, std::span<const std::size_t> subset) {
    if (subset.empty()) return 0.0;
    double fc = 0.0, ff = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
        fc += corr.class_su[subset[a]];
        for (std::size_t b = a + 1; b < subset.size(); ++b) ff += corr.pair(subset[a], subset[b]);
    }
    const auto k = static_cast<double>(subset.size());
    const double denom = std::sqrt(k + 2.0 * ff);
    return denom > 0.0 ? fc / denom : 0.0;
}

namespace {

struct Node {
    std::vector<std::size_t> members;  // ascending
    double merit = 0.0;
};

}  // namespace

std::vector<std::size_t> cfs_best_first(const CorrelationMatrix& corr, std::size_t max_stale, double* merit_out) {
    const std::size_t d = corr.features;
    // Open list kept sorted by descending merit; equal merits keep insertion
    // order, and children are generated in layout order.
    std::list<Node> open;
    std::set<std::vector<std::size_t>> visited;
    open.push_back(Node{});
    visited.insert({});
    Node best;
    std::size_t stale = 0;
    constexpr double kImprovement = 1e-12;

    while (!open.empty() && stale < max_stale) {
        Node head = std::move(open.front());
        open.pop_front();
        bool improved = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (std::binary_search(head.members.begin(), head.members.end(), j)) continue;
            Node child;
            child.members = head.members;
            child.members.insert(std::upper_bound(child.members.begin(), child.members.end(), j), j);
            if (!visited.insert(child.members).second) continue;
            child.merit = cfs_merit(corr, child.members);
            if (child.merit > best.merit + kImprovement) {
                best = child;
                improved = true;
            }
            auto pos = std::find_if(open.begin(), open.end(), [&](const Node& n) { return n.merit < child.merit; });
            open.insert(pos, std::move(child));
        }
        stale = improved ? 0 : stale + 1;
    }
    if (merit_out) *merit_out = best.merit;
    return best.members;
}

FeatureSubset cfs_select(const LabeledFeatureTable& table, const CfsConfig& cfg, SubsetOrigin origin) {
    if (table.features() < 2) throw InvalidInput("CFS needs at least two features");
    const auto corr = compute_correlations(table, cfg.bins);
    double merit = 0.0;
    auto members = cfs_best_first(corr, cfg.max_stale, &merit);
    if (members.empty()) {
        // No feature correlates with the class: fall back to the single
        // feature with the highest information gain.
        std::size_t best = 0;
        double best_gain = -1.0;
        for (std::size_t j = 0; j < table.features(); ++j) {
            const double g = information_gain(discretize(table.column(j), cfg.bins), table.labels());
            if (g > best_gain) {
                best_gain = g;
                best = j;
            }
        }
        members = {best};
        merit = corr.class_su[best];
    }
    std::vector<FeatureId> ids;
    ids.reserve(members.size());
    for (auto m : members) ids.push_back(table.layout()[m]);
    return FeatureSubset{FeatureLayout(std::move(ids)), merit, origin};
}

FeatureLayout union_in_fused_order(const FeatureLayout& a, const FeatureLayout& b) {
    std::vector<FeatureId> ids;
    for (const auto& id : fused_layout())
        if (a.index_of(id) || b.index_of(id)) ids.push_back(id);
    return FeatureLayout(std::move(ids));
}

FusedSubsets build_fused_subsets(const FeatureSubset& acc_sel, const FeatureSubset& rot_sel,
                                 const LabeledFeatureTable& full_table, const CfsConfig& cfg) {
    FusedSubsets out;
    out.sscs.members = union_in_fused_order(acc_sel.members, rot_sel.members);
    out.sscs.origin = SubsetOrigin::SSCS;
    const auto fused_corr = compute_correlations(full_table.subset_features(out.sscs.members), cfg.bins);
    std::vector<std::size_t> all(out.sscs.members.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    out.sscs.merit = cfs_merit(fused_corr, all);
    out.sstf = cfs_select(full_table, cfg, SubsetOrigin::SSTF);
    return out;
}

}  // namespace armauth
