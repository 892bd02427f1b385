#include "armauth/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <map>
#include <set>
#include <sstream>

#include "armauth/error.hpp"
#include "armauth/io.hpp"
#include "parallel.hpp"

namespace armauth {

std::string_view setup_kind_name(SetupKind k) noexcept {
    switch (k) {
        case SetupKind::IntraSession: return "intra-session";
        case SetupKind::InterSession: return "inter-session";
        case SetupKind::InterPhase: return "inter-phase";
    }
    return "?";
}

void SetupSpec::validate() const {
    switch (kind) {
        case SetupKind::IntraSession:
            if (train != test) throw InvalidInput("intra-session setup needs train == test split");
            break;
        case SetupKind::InterSession:
            if (train.phase != test.phase || train.session == test.session)
                throw InvalidInput("inter-session setup needs the same phase and different sessions");
            break;
        case SetupKind::InterPhase:
            if (train.phase != 1 || test.phase != 2) throw InvalidInput("inter-phase setup trains on phase 1, tests on phase 2");
            break;
    }
}

std::string SetupSpec::label() const { return split_name(train) + "-" + split_name(test); }

namespace {

SplitId parse_split(std::string_view s) {
    // P<phase>S<session>
    if (s.size() == 4 && (s[0] == 'P' || s[0] == 'p') && (s[2] == 'S' || s[2] == 's') && s[1] >= '1' && s[1] <= '2' &&
        s[3] >= '1' && s[3] <= '2')
        return {s[1] - '0', s[3] - '0'};
    throw InvalidInput("bad split '" + std::string(s) + "', expected e.g. P1S2");
}

}  // namespace

SetupSpec parse_setup(std::string_view text) {
    if (text == "intra") return SetupSpec::intra_session();
    if (text == "inter-session") return SetupSpec::inter_session(1);
    if (text == "inter-phase") return SetupSpec::inter_phase(1);
    if (text == "template-update") return SetupSpec::inter_session(2);
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) throw InvalidInput("unknown setup '" + std::string(text) + "'");
    SetupSpec s;
    s.train = parse_split(text.substr(0, dash));
    s.test = parse_split(text.substr(dash + 1));
    s.kind = s.train == s.test                 ? SetupKind::IntraSession
             : s.train.phase == s.test.phase ? SetupKind::InterSession
                                             : SetupKind::InterPhase;
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Metrics

EvalResult compute_metrics(std::span<const Decision> genuine, std::span<const Decision> impostor) {
    if (genuine.empty() || impostor.empty()) throw InvalidInput("metrics need genuine and impostor decisions");
    const auto fa = std::count(impostor.begin(), impostor.end(), Decision::Accept);
    const auto fr = std::count(genuine.begin(), genuine.end(), Decision::Reject);
    EvalResult r;
    r.dfar = 100.0 * static_cast<double>(fa) / static_cast<double>(impostor.size());
    r.dfrr = 100.0 * static_cast<double>(fr) / static_cast<double>(genuine.size());
    r.dac = dynamic_accuracy(r.dfar, r.dfrr);
    return r;
}

EvalResult average_users(std::vector<UserResult> per_user) {
    if (per_user.empty()) throw InvalidInput("no users to average");
    std::sort(per_user.begin(), per_user.end(), [](const auto& a, const auto& b) { return a.user_id < b.user_id; });
    EvalResult r;
    double far = 0.0, frr = 0.0;
    for (const auto& u : per_user) {
        far += u.dfar;
        frr += u.dfrr;
    }
    const auto n = static_cast<double>(per_user.size());
    r.dfar = far / n;
    r.dfrr = frr / n;
    r.dac = dynamic_accuracy(r.dfar, r.dfrr);
    r.per_user = std::move(per_user);
    return r;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

struct Population {
    std::vector<int> users;
    SplitView train;
    SplitView test;
    std::vector<std::string> warnings;
};

Population population(const SetupSpec& setup, const ExperimentConfig& cfg, const FeatureCorpus& corpus) {
    setup.validate();
    std::vector<int> candidates = cfg.users.empty() ? corpus.users() : cfg.users;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    Population p;
    for (int u : candidates) {
        const auto* tr = corpus.find(u, setup.train);
        const auto* te = corpus.find(u, setup.test);
        if (!tr || !te || tr->size() == 0 || te->size() == 0) {
            p.warnings.push_back("user " + std::to_string(u) + " lacks " + (!tr || tr->size() == 0 ? split_name(setup.train) : split_name(setup.test)) +
                                 "; excluded");
            continue;
        }
        p.users.push_back(u);
        p.train.emplace(u, tr);
        p.test.emplace(u, te);
    }
    if (p.users.size() < 2) throw InvalidInput("experiment needs at least two users with both splits");
    return p;
}

// Genuine windows of `user` and the leading test windows of every other user.
struct TestWindows {
    std::vector<WindowFeatures> genuine;
    std::vector<WindowFeatures> impostor;
};

TestWindows test_windows(int user, const Population& p, std::size_t per_user) {
    TestWindows t;
    for (const auto& [u, sf] : p.test) {
        if (u == user) {
            t.genuine = window_features(*sf);
        } else {
            const std::size_t take = std::min(per_user, sf->size());
            for (std::size_t i = 0; i < take; ++i) t.impostor.push_back({sf->acc[i], sf->rot[i]});
        }
    }
    return t;
}

UserResult evaluate_template(const UserTemplate& tpl, const TestWindows& tw) {
    std::vector<Decision> g, im;
    for (const auto& r : authenticate_features(tpl, tw.genuine))
        if (r.error.empty()) g.push_back(r.decision);
    for (const auto& r : authenticate_features(tpl, tw.impostor))
        if (r.error.empty()) im.push_back(r.decision);
    const auto m = compute_metrics(g, im);
    return {tpl.user_id, m.dfar, m.dfrr, m.dac, g.size(), im.size(), tpl.threshold};
}

}  // namespace

EvalResult run_experiment(const SetupSpec& setup, SystemKind system, const ExperimentConfig& cfg,
                          const FeatureCorpus& corpus) {
    const Population p = population(setup, cfg, corpus);
    std::vector<UserResult> results(p.users.size());
    detail::parallel_for(p.users.size(), cfg.threads, [&](std::size_t i) {
        const int u = p.users[i];
        const UserTemplate tpl = enroll(u, p.train, system, cfg.enrollment);
        results[i] = evaluate_template(tpl, test_windows(u, p, cfg.impostor_test_vectors_per_user));
    });
    EvalResult r = average_users(std::move(results));
    r.warnings = p.warnings;
    return r;
}

std::vector<ScalabilityPoint> scalability_sweep(const SetupSpec& setup, SystemKind system, const ExperimentConfig& cfg,
                                                const FeatureCorpus& corpus, std::vector<int> order) {
    if (order.empty()) order = corpus.users();
    if (order.size() < 2) throw InvalidInput("scalability sweep needs at least two users");
    std::vector<ScalabilityPoint> out;
    for (std::size_t n = 2; n <= order.size(); ++n) {
        ExperimentConfig c = cfg;
        c.users.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
        out.push_back({n, run_experiment(setup, system, c, corpus)});
    }
    return out;
}

WeightSweep slf_weight_sweep(const SetupSpec& setup, const ExperimentConfig& cfg, const FeatureCorpus& corpus,
                             std::span<const double> weights) {
    if (weights.empty()) throw InvalidInput("weight grid is empty");
    for (double w : weights)
        if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("weights must lie in [0, 1]");
    const Population p = population(setup, cfg, corpus);

    struct Fitted {
        EnrolledModality acc, rot;
        SplitId from;
    };
    std::vector<std::optional<Fitted>> fitted(p.users.size());
    std::vector<TestWindows> tests(p.users.size());
    detail::parallel_for(p.users.size(), cfg.threads, [&](std::size_t i) {
        const int u = p.users[i];
        const auto& e = cfg.enrollment;
        fitted[i] = Fitted{enroll_modality(u, p.train, FeatureSource::Acc, e.subsets.acc, e),
                           enroll_modality(u, p.train, FeatureSource::Rot, e.subsets.rot, e), setup.train};
        tests[i] = test_windows(u, p, cfg.impostor_test_vectors_per_user);
    });

    WeightSweep sweep;
    for (double w : weights) {
        std::vector<UserResult> results(p.users.size());
        detail::parallel_for(p.users.size(), cfg.threads, [&](std::size_t i) {
            const auto& f = *fitted[i];
            const UserTemplate tpl =
                assemble_slf(p.users[i], f.from, f.acc, f.rot, FusionWeights{w}, cfg.enrollment.slf_refit_threshold);
            results[i] = evaluate_template(tpl, tests[i]);
        });
        EvalResult r = average_users(std::move(results));
        r.warnings = p.warnings;
        sweep.points.push_back({w, std::move(r)});
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pt : sweep.points) {
        const double e = pt.result.dfar + pt.result.dfrr;
        if (e < best) {
            best = e;
            sweep.best_w_acc = pt.w_acc;
        }
    }
    return sweep;
}

// ---------------------------------------------------------------------------
// Selection

std::string_view subset_source_name(SubsetSource s) noexcept {
    switch (s) {
        case SubsetSource::All: return "all";
        case SubsetSource::CFS: return "cfs";
        case SubsetSource::SSCS: return "sscs";
        case SubsetSource::SSTF: return "sstf";
    }
    return "?";
}

SubsetSource parse_subset_source(std::string_view text) {
    if (text == "all") return SubsetSource::All;
    if (text == "cfs") return SubsetSource::CFS;
    if (text == "sscs") return SubsetSource::SSCS;
    if (text == "sstf") return SubsetSource::SSTF;
    throw InvalidInput("unknown subset source '" + std::string(text) + "'");
}

SelectionResult run_selection(const FeatureCorpus& corpus, const SelectionConfig& cfg, std::span<const int> users) {
    std::vector<int> scope(users.begin(), users.end());
    if (scope.empty()) scope = corpus.users();
    std::vector<FeatureVector> acc, rot, fused;
    std::vector<int> labels;
    for (int u : scope) {
        const auto* sf = corpus.find(u, cfg.split);
        if (!sf) continue;
        for (std::size_t i = 0; i < sf->size(); ++i) {
            acc.push_back(sf->acc[i]);
            rot.push_back(sf->rot[i]);
            fused.push_back(sf->fused(i));
            labels.push_back(u);
        }
    }
    if (labels.empty()) throw InvalidInput("no windows in split " + split_name(cfg.split) + " for selection");
    const auto acc_table = LabeledFeatureTable::from_vectors(acc, labels);
    const auto rot_table = LabeledFeatureTable::from_vectors(rot, labels);
    const auto fused_table = LabeledFeatureTable::from_vectors(fused, labels);

    SelectionResult r;
    if (cfg.rank) {
        r.acc_ranking = info_gain_rank(acc_table, cfg.ranking);
        r.rot_ranking = info_gain_rank(rot_table, cfg.ranking);
    }
    r.acc = cfs_select(acc_table, cfg.cfs, SubsetOrigin::CFS_Acc);
    r.rot = cfs_select(rot_table, cfg.cfs, SubsetOrigin::CFS_Rot);
    r.fused = build_fused_subsets(r.acc, r.rot, fused_table, cfg.cfs);
    return r;
}

SystemSubsets subsets_for(const SelectionResult& sel, SubsetSource source) {
    SystemSubsets s;
    if (source == SubsetSource::All) return s;
    s.acc = sel.acc.members;
    s.rot = sel.rot.members;
    s.fused = source == SubsetSource::SSTF ? sel.fused.sstf.members : sel.fused.sscs.members;
    return s;
}

EvalResult evaluate_dataset(const Dataset& data, const SetupSpec& setup, SystemKind system,
                            const PipelineEvalConfig& cfg) {
    const FeatureCorpus corpus = build_feature_corpus(data, cfg.pipeline);
    ExperimentConfig ecfg = cfg.experiment;
    if (cfg.subset_source != SubsetSource::All) {
        SelectionConfig scfg = cfg.selection;
        scfg.rank = false;
        ecfg.enrollment.subsets = subsets_for(run_selection(corpus, scfg, ecfg.users), cfg.subset_source);
    }
    return run_experiment(setup, system, ecfg, corpus);
}

std::vector<std::pair<double, double>> window_grid(std::span<const double> w_sizes_s) {
    std::vector<std::pair<double, double>> out;
    for (double w : w_sizes_s) {
        std::vector<double> slides;
        for (double s : {w, w / 2.0, 4.0, 2.0})
            if (s <= w && std::find(slides.begin(), slides.end(), s) == slides.end()) slides.push_back(s);
        for (double s : slides) out.emplace_back(w, s);
    }
    return out;
}

std::vector<WindowCell> window_parameter_sweep(const Dataset& data, const SetupSpec& setup, SystemKind system,
                                               const PipelineEvalConfig& cfg, std::span<const double> w_sizes_s) {
    std::vector<WindowCell> cells;
    for (const auto& [w, s] : window_grid(w_sizes_s)) {
        WindowCell cell{w, s, false, {}};
        PipelineEvalConfig c = cfg;
        c.pipeline.window = WindowConfig::from_seconds(w, s, cfg.pipeline.extraction.fs);
        const FeatureCorpus corpus = build_feature_corpus(data, c.pipeline);
        std::vector<int> scope = cfg.experiment.users.empty() ? data.users() : cfg.experiment.users;
        bool feasible = true;
        for (int u : scope) {
            for (SplitId split : {setup.train, setup.test}) {
                const auto* sf = corpus.find(u, split);
                if (!sf || sf->size() < 2) feasible = false;
            }
        }
        if (feasible) {
            ExperimentConfig ecfg = c.experiment;
            if (c.subset_source != SubsetSource::All) {
                SelectionConfig scfg = c.selection;
                scfg.rank = false;
                ecfg.enrollment.subsets = subsets_for(run_selection(corpus, scfg, ecfg.users), c.subset_source);
            }
            cell.result = run_experiment(setup, system, ecfg, corpus);
            cell.present = true;
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string format_summary_csv(std::span<const SummaryRow> rows) {
    std::string out = "setup,system,classifier,dfar,dfrr,dac\n";
    for (const auto& r : rows)
        out += r.setup.label() + ',' + std::string(system_name(r.system)) + ',' +
               std::string(classifier_name(r.classifier)) + ',' + fixed(r.result.dfar) + ',' + fixed(r.result.dfrr) +
               ',' + fixed(r.result.dac) + '\n';
    return out;
}

std::string format_summary_table(std::span<const SummaryRow> rows) {
    std::vector<std::string> setups;
    std::map<std::pair<int, int>, std::map<std::string, const EvalResult*>> cells;
    for (const auto& r : rows) {
        const auto label = r.setup.label();
        if (std::find(setups.begin(), setups.end(), label) == setups.end()) setups.push_back(label);
        cells[{static_cast<int>(r.system), static_cast<int>(r.classifier)}][label] = &r.result;
    }
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-6s %-8s", "system", "clf");
    out << buf;
    for (const auto& s : setups) {
        std::snprintf(buf, sizeof buf, " | %-23s", s.c_str());
        out << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "%-6s %-8s", "", "");
    out << buf;
    for (std::size_t i = 0; i < setups.size(); ++i) {
        std::snprintf(buf, sizeof buf, " | %7s %7s %7s", "DFAR", "DFRR", "DAc");
        out << buf;
    }
    out << "\n";
    for (const auto& [key, by_setup] : cells) {
        std::snprintf(buf, sizeof buf, "%-6s %-8s", std::string(system_name(static_cast<SystemKind>(key.first))).c_str(),
                      std::string(classifier_name(static_cast<ClassifierKind>(key.second))).c_str());
        out << buf;
        for (const auto& s : setups) {
            const auto it = by_setup.find(s);
            if (it == by_setup.end())
                std::snprintf(buf, sizeof buf, " | %7s %7s %7s", "-", "-", "-");
            else
                std::snprintf(buf, sizeof buf, " | %7.2f %7.2f %7.2f", it->second->dfar, it->second->dfrr,
                              it->second->dac);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

std::string format_per_user_csv(const EvalResult& r) {
    std::string out = "user_id,dfar,dfrr,dac,genuine_windows,impostor_windows,threshold\n";
    for (const auto& u : r.per_user)
        out += std::to_string(u.user_id) + ',' + fixed(u.dfar) + ',' + fixed(u.dfrr) + ',' + fixed(u.dac) + ',' +
               std::to_string(u.genuine_windows) + ',' + std::to_string(u.impostor_windows) + ',' +
               format_double(u.threshold) + '\n';
    return out;
}

std::string format_scalability_csv(std::span<const ScalabilityPoint> points) {
    std::string out = "users,dfar,dfrr,dac\n";
    for (const auto& p : points)
        out += std::to_string(p.users) + ',' + fixed(p.result.dfar) + ',' + fixed(p.result.dfrr) + ',' +
               fixed(p.result.dac) + '\n';
    return out;
}

std::string format_weight_csv(const WeightSweep& sweep) {
    std::string out = "w_acc,w_rot,far,frr,dac,best\n";
    for (const auto& p : sweep.points)
        out += fixed(p.w_acc, 3) + ',' + fixed(1.0 - p.w_acc, 3) + ',' + fixed(p.result.dfar) + ',' +
               fixed(p.result.dfrr) + ',' + fixed(p.result.dac) + ',' + (p.w_acc == sweep.best_w_acc ? "1" : "0") +
               '\n';
    return out;
}

std::string format_window_csv(std::span<const WindowCell> cells) {
    std::string out = "w_size_s,s_interval_s,present,dfar,dfrr,dac\n";
    for (const auto& c : cells) {
        out += fixed(c.w_size_s, 2) + ',' + fixed(c.s_interval_s, 2) + ',' + (c.present ? "1" : "0") + ',';
        if (c.present)
            out += fixed(c.result.dfar) + ',' + fixed(c.result.dfrr) + ',' + fixed(c.result.dac);
        else
            out += ",,";
        out += '\n';
    }
    return out;
}

std::vector<std::string> check_invariants(const EvalResult& r) {
    std::vector<std::string> bad;
    auto in_range = [&](double v, const char* what, const std::string& who) {
        if (!(v >= 0.0 && v <= 100.0)) bad.push_back(who + ": " + what + " outside [0, 100]");
    };
    auto check = [&](double far, double frr, double dac, const std::string& who) {
        in_range(far, "DFAR", who);
        in_range(frr, "DFRR", who);
        in_range(dac, "DAc", who);
        if (std::abs(dac - dynamic_accuracy(far, frr)) > 1e-9) bad.push_back(who + ": DAc identity violated");
    };
    check(r.dfar, r.dfrr, r.dac, "mean");
    for (const auto& u : r.per_user) check(u.dfar, u.dfrr, u.dac, "user " + std::to_string(u.user_id));
    return bad;
}

}  // namespace armauth
