// armauth: synth / extract / select / enroll / evaluate / sweep / report.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "armauth/auth.hpp"
#include "armauth/error.hpp"
#include "armauth/eval.hpp"
#include "armauth/io.hpp"
#include "armauth/rng.hpp"
#include "armauth/simd.hpp"
#include "armauth/synth.hpp"

namespace fs = std::filesystem;
using namespace armauth;

namespace {

struct RunConfig {
    std::string data_dir = "data";
    std::string out = "out";
    std::uint64_t seed = 42;
    double w_size_s = 10.0;
    double s_interval_s = 4.0;
    std::size_t smoothing = 5;
    std::vector<std::string> systems;
    std::vector<std::string> classifiers;
    std::vector<std::string> setups;
    std::string subset = "sscs";
    std::string weights = "0:0.1:1";
    std::size_t k = 10;
    std::size_t trees = 1000;
    std::size_t threads = 0;
    bool verbose = false;
};

PipelineEvalConfig pipeline_config(const RunConfig& rc) {
    PipelineEvalConfig c;
    c.pipeline.smoothing.points = rc.smoothing;
    c.pipeline.window = WindowConfig::from_seconds(rc.w_size_s, rc.s_interval_s);
    c.pipeline.window.validate();
    c.selection.ranking.seed = derive_seed(rc.seed, {seed_tag::kFolds});
    c.subset_source = parse_subset_source(rc.subset);
    c.experiment.enrollment.training.seed = rc.seed;
    c.experiment.enrollment.classifier.seed = rc.seed;
    c.experiment.enrollment.classifier.k = rc.k;
    c.experiment.enrollment.classifier.trees = rc.trees;
    c.experiment.threads = rc.threads;
    return c;
}

std::vector<SystemKind> systems_of(const RunConfig& rc) {
    if (rc.systems.empty()) return {kAllSystems.begin(), kAllSystems.end()};
    std::vector<SystemKind> out;
    for (const auto& s : rc.systems) out.push_back(parse_system(s));
    return out;
}

std::vector<ClassifierKind> classifiers_of(const RunConfig& rc) {
    if (rc.classifiers.empty()) return {kAllClassifiers.begin(), kAllClassifiers.end()};
    std::vector<ClassifierKind> out;
    for (const auto& s : rc.classifiers) out.push_back(parse_classifier(s));
    return out;
}

std::vector<SetupSpec> setups_of(const RunConfig& rc) {
    if (rc.setups.empty())
        return {SetupSpec::intra_session(), SetupSpec::inter_session(1), SetupSpec::inter_session(2),
                SetupSpec::inter_phase(1), SetupSpec::inter_phase(2)};
    std::vector<SetupSpec> out;
    for (const auto& s : rc.setups) out.push_back(parse_setup(s));
    return out;
}

// "a:step:b" or "a,b,c"
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto p1 = text.find(':'), p2 = text.rfind(':');
        const double a = std::stod(text.substr(0, p1)), step = std::stod(text.substr(p1 + 1, p2 - p1 - 1)),
                     b = std::stod(text.substr(p2 + 1));
        if (!(step > 0.0) || b < a) throw InvalidInput("bad grid '" + text + "'");
        const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(i == n && std::abs(a + i * step - b) < 1e-9 ? b : a + i * step);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        out.push_back(std::stod(text.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void note(const RunConfig& rc, const std::string& msg) {
    if (rc.verbose) std::cerr << msg << "\n";
}

void write(const fs::path& path, const std::string& content) {
    write_file_atomic(path, content);
    std::cout << "wrote " << path.string() << "\n";
}

Dataset load(const RunConfig& rc) { return load_dataset(rc.data_dir); }

int report_invariants(const std::string& what, const EvalResult& r, int status) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << what << ": " << w << "\n";
    const auto bad = check_invariants(r);
    for (const auto& b : bad) std::cerr << "invariant failed: " << what << ": " << b << "\n";
    return bad.empty() ? status : 1;
}

// ---------------------------------------------------------------------------

int cmd_synth(const RunConfig& rc, synth::GeneratorConfig g) {
    g.seed = rc.seed;
    synth::write_dataset(g, rc.data_dir);
    std::cout << "wrote " << g.users << " users under " << rc.data_dir << "\n";
    return 0;
}

int cmd_extract(const RunConfig& rc) {
    const auto cfg = pipeline_config(rc);
    const auto corpus = build_feature_corpus(load(rc), cfg.pipeline);
    write(fs::path(rc.out) / "features_acc.csv", format_feature_csv(corpus, LayoutKind::Acc32));
    write(fs::path(rc.out) / "features_rot.csv", format_feature_csv(corpus, LayoutKind::Rot44));
    return 0;
}

int cmd_select(const RunConfig& rc, const std::string& split) {
    auto cfg = pipeline_config(rc);
    const auto corpus = build_feature_corpus(load(rc), cfg.pipeline);
    cfg.selection.split = parse_setup(split + "-" + split).train;
    const auto sel = run_selection(corpus, cfg.selection);
    const fs::path out(rc.out);
    write(out / "ranking_acc.csv", format_ranking_csv(sel.acc_ranking));
    write(out / "ranking_rot.csv", format_ranking_csv(sel.rot_ranking));
    write(out / "subset_acc.txt", format_subset(sel.acc.members));
    write(out / "subset_rot.txt", format_subset(sel.rot.members));
    write(out / "subset_sscs.txt", format_subset(sel.fused.sscs.members));
    write(out / "subset_sstf.txt", format_subset(sel.fused.sstf.members));
    return 0;
}

SystemSubsets resolve_subsets(const PipelineEvalConfig& cfg, const FeatureCorpus& corpus) {
    if (cfg.subset_source == SubsetSource::All) return {};
    SelectionConfig scfg = cfg.selection;
    scfg.rank = false;
    return subsets_for(run_selection(corpus, scfg), cfg.subset_source);
}

int cmd_enroll(const RunConfig& rc, const std::string& split_text, const std::vector<int>& only_users,
               const std::string& verify_text) {
    auto cfg = pipeline_config(rc);
    const auto corpus = build_feature_corpus(load(rc), cfg.pipeline);
    const SplitId split = parse_setup(split_text + "-" + split_text).train;
    auto ecfg = cfg.experiment.enrollment;
    ecfg.subsets = resolve_subsets(cfg, corpus);
    const auto users = corpus.users();
    const SplitView view = split_view(corpus, split, users);
    const fs::path out(rc.out);
    for (SystemKind system : systems_of(rc)) {
        for (ClassifierKind ck : classifiers_of(rc)) {
            ecfg.classifier.kind = ck;
            for (int u : users) {
                if (!only_users.empty() && std::find(only_users.begin(), only_users.end(), u) == only_users.end())
                    continue;
                if (!view.contains(u)) throw InvalidInput("user " + std::to_string(u) + " has no " + split_name(split));
                const auto tpl = enroll(u, view, system, ecfg);
                const std::string stem = std::string(system_name(system)) + "_" + std::string(classifier_name(ck)) +
                                         "_user" + std::to_string(u);
                save_template(tpl, out / "templates" / (stem + ".json"));
                if (!verify_text.empty()) {
                    const SplitId vs = parse_setup(verify_text + "-" + verify_text).train;
                    const auto* sf = corpus.find(u, vs);
                    if (!sf) throw InvalidInput("user " + std::to_string(u) + " has no " + split_name(vs));
                    const auto windows = window_features(*sf);
                    write_file_atomic(out / "decisions" / (stem + ".csv"),
                                      format_decision_log(authenticate_features(tpl, windows)));
                }
            }
        }
    }
    std::cout << "wrote templates under " << (out / "templates").string() << "\n";
    return 0;
}

int cmd_evaluate(const RunConfig& rc) {
    auto cfg = pipeline_config(rc);
    const auto corpus = build_feature_corpus(load(rc), cfg.pipeline);
    cfg.experiment.enrollment.subsets = resolve_subsets(cfg, corpus);
    std::vector<SummaryRow> rows;
    int status = 0;
    const fs::path out(rc.out);
    for (const auto& setup : setups_of(rc)) {
        for (SystemKind system : systems_of(rc)) {
            for (ClassifierKind ck : classifiers_of(rc)) {
                auto ecfg = cfg.experiment;
                ecfg.enrollment.classifier.kind = ck;
                note(rc, setup.label() + " " + std::string(system_name(system)) + " " + std::string(classifier_name(ck)));
                SummaryRow row{setup, system, ck, run_experiment(setup, system, ecfg, corpus)};
                const std::string what = setup.label() + "/" + std::string(system_name(system)) + "/" +
                                         std::string(classifier_name(ck));
                status = report_invariants(what, row.result, status);
                write_file_atomic(out / "per_user" /
                                      (setup.label() + "_" + std::string(system_name(system)) + "_" +
                                       std::string(classifier_name(ck)) + ".csv"),
                                  format_per_user_csv(row.result));
                rows.push_back(std::move(row));
            }
        }
    }
    write(out / "summary.csv", format_summary_csv(rows));
    const auto table = format_summary_table(rows);
    write(out / "summary.txt", table);
    std::cout << table;
    return status;
}

int cmd_sweep(const RunConfig& rc, const std::string& kind, const std::string& w_sizes_text) {
    auto cfg = pipeline_config(rc);
    const auto data = load(rc);
    const auto corpus = build_feature_corpus(data, cfg.pipeline);
    cfg.experiment.enrollment.subsets = resolve_subsets(cfg, corpus);
    const auto setups = rc.setups.empty() ? std::vector<SetupSpec>{SetupSpec::inter_session(1)} : setups_of(rc);
    const auto classifiers = rc.classifiers.empty() ? std::vector<ClassifierKind>{ClassifierKind::kNNEuc}
                                                    : classifiers_of(rc);
    const auto systems = rc.systems.empty() ? std::vector<SystemKind>{SystemKind::FLF} : systems_of(rc);
    const fs::path out(rc.out);
    int status = 0;
    const bool all = kind == "all";
    if (!all && kind != "scalability" && kind != "weights" && kind != "window")
        throw InvalidInput("unknown sweep '" + kind + "'");
    for (const auto& setup : setups) {
        for (ClassifierKind ck : classifiers) {
            auto ecfg = cfg.experiment;
            ecfg.enrollment.classifier.kind = ck;
            const std::string tag = setup.label() + "_" + std::string(classifier_name(ck));
            if (all || kind == "scalability") {
                for (SystemKind system : systems) {
                    const auto curve = scalability_sweep(setup, system, ecfg, corpus);
                    for (const auto& p : curve) status = report_invariants("scalability", p.result, status);
                    write(out / ("scalability_" + tag + "_" + std::string(system_name(system)) + ".csv"),
                          format_scalability_csv(curve));
                }
            }
            if (all || kind == "weights") {
                const auto grid = parse_grid(rc.weights);
                const auto sweep = slf_weight_sweep(setup, ecfg, corpus, grid);
                for (const auto& p : sweep.points) status = report_invariants("weights", p.result, status);
                write(out / ("weights_" + tag + ".csv"), format_weight_csv(sweep));
            }
            if (all || kind == "window") {
                auto wcfg = cfg;
                wcfg.experiment = ecfg;
                const auto sizes = parse_grid(w_sizes_text);
                for (SystemKind system : systems) {
                    const auto cells = window_parameter_sweep(data, setup, system, wcfg, sizes);
                    for (const auto& c : cells)
                        if (c.present) status = report_invariants("window", c.result, status);
                    write(out / ("window_" + tag + "_" + std::string(system_name(system)) + ".csv"),
                          format_window_csv(cells));
                }
            }
        }
    }
    return status;
}

int cmd_report(const RunConfig& rc) {
    const fs::path out(rc.out);
    if (!fs::is_directory(out)) throw InvalidInput("output directory not found: " + out.string());
    std::string report = "# armauth report\n\n";
    report += "seed: " + std::to_string(rc.seed) + "\n\n";
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(out))
        if (e.is_regular_file() && (e.path().extension() == ".csv" || e.path().extension() == ".txt") &&
            e.path().filename() != "report.md")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InvalidInput("nothing to report in " + out.string());
    for (const auto& f : files) {
        report += "## " + f.filename().string() + "\n\n```\n" + read_file(f) + "```\n\n";
    }
    write(out / "report.md", report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smartwatch arm-movement continuous authentication"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI config file; keys mirror the flags");
    RunConfig rc;
    app.add_option("--data-dir", rc.data_dir, "dataset root (data/<user>/p<phase>s<session>/)");
    app.add_option("--out", rc.out, "output directory");
    app.add_option("--seed", rc.seed, "master seed");
    app.add_option("--w-size-s", rc.w_size_s, "window size in seconds");
    app.add_option("--s-interval-s", rc.s_interval_s, "slide interval in seconds");
    app.add_option("--smoothing", rc.smoothing, "moving-average points");
    app.add_option("--system", rc.systems, "acc, rot, flf, slf (repeatable; default all)");
    app.add_option("--classifier", rc.classifiers, "knn, logreg, mlp, rf (repeatable; default all)");
    app.add_option("--setup", rc.setups, "intra, inter-session, inter-phase, template-update or PaSb-PcSd");
    app.add_option("--subset", rc.subset, "all, cfs, sscs, sstf");
    app.add_option("--weights", rc.weights, "SLF weight grid, a:step:b or a,b,c");
    app.add_option("--k", rc.k, "kNN neighbours");
    app.add_option("--trees", rc.trees, "random forest size");
    app.add_option("--threads", rc.threads, "worker threads, 0 = all cores");
    app.add_flag("-v,--verbose", rc.verbose);

    synth::GeneratorConfig gen;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset into --data-dir");
    synth_cmd->add_option("--users", gen.users);
    synth_cmd->add_option("--duration-s", gen.duration_s);
    synth_cmd->add_option("--noise", gen.noise_std);
    synth_cmd->add_option("--session-drift", gen.session_drift);
    synth_cmd->add_option("--phase-drift", gen.phase_drift);

    auto* extract_cmd = app.add_subcommand("extract", "write per-window feature CSVs");

    std::string select_split = "P1S1";
    auto* select_cmd = app.add_subcommand("select", "information-gain rankings and CFS subsets");
    select_cmd->add_option("--split", select_split);

    std::string enroll_split = "P1S1", verify_split;
    std::vector<int> enroll_users;
    auto* enroll_cmd = app.add_subcommand("enroll", "train templates");
    enroll_cmd->add_option("--split", enroll_split);
    enroll_cmd->add_option("--user", enroll_users, "restrict to these users");
    enroll_cmd->add_option("--verify", verify_split, "also write decision logs for this split");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "experiment matrix and summary table");

    std::string sweep_kind = "all", w_sizes = "2:2:20";
    auto* sweep_cmd = app.add_subcommand("sweep", "scalability, SLF weight and window sweeps");
    sweep_cmd->add_option("--kind", sweep_kind, "scalability, weights, window or all");
    sweep_cmd->add_option("--w-sizes", w_sizes, "window sizes in seconds for the window sweep");

    auto* report_cmd = app.add_subcommand("report", "consolidate the CSVs in --out into report.md");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    note(rc, std::string("kernels: ") + std::string(simd::isa_name(simd::active().isa)));
    try {
        if (*synth_cmd) return cmd_synth(rc, gen);
        if (*extract_cmd) return cmd_extract(rc);
        if (*select_cmd) return cmd_select(rc, select_split);
        if (*enroll_cmd) return cmd_enroll(rc, enroll_split, enroll_users, verify_split);
        if (*evaluate_cmd) return cmd_evaluate(rc);
        if (*sweep_cmd) return cmd_sweep(rc, sweep_kind, w_sizes);
        if (*report_cmd) return cmd_report(rc);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
