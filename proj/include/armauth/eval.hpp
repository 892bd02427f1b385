#pragma once

// DFAR / DFRR / dynamic accuracy, the experiment matrix, and the
// scalability, SLF-weight and window-parameter sweeps.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "armauth/auth.hpp"
#include "armauth/corpus.hpp"
#include "armauth/selection.hpp"

namespace armauth {

enum class SetupKind { IntraSession, InterSession, InterPhase };
std::string_view setup_kind_name(SetupKind k) noexcept;

struct SetupSpec {
    SetupKind kind = SetupKind::InterSession;
    SplitId train{1, 1};
    SplitId test{1, 2};

    static SetupSpec intra_session(SplitId split = {1, 1}) { return {SetupKind::IntraSession, split, split}; }
    static SetupSpec inter_session(int phase = 1) { return {SetupKind::InterSession, {phase, 1}, {phase, 2}}; }
    static SetupSpec inter_phase(int test_session = 1) {
        return {SetupKind::InterPhase, {1, 1}, {2, test_session}};
    }

    void validate() const;
    /// "P1S1-P1S2"
    std::string label() const;
};

/// intra, inter-session, inter-phase, template-update (P2S1-P2S2), or an
/// explicit pair such as P1S1-P2S2.
SetupSpec parse_setup(std::string_view text);

struct UserResult {
    int user_id = 0;
    double dfar = 0.0;
    double dfrr = 0.0;
    double dac = 100.0;
    std::size_t genuine_windows = 0;
    std::size_t impostor_windows = 0;
    double threshold = 0.0;
};

struct EvalResult {
    double dfar = 0.0;
    double dfrr = 0.0;
    double dac = 100.0;
    std::vector<UserResult> per_user;
    std::vector<std::string> warnings;
};

inline double dynamic_accuracy(double dfar, double dfrr) noexcept { return 100.0 - (dfar + dfrr) / 2.0; }

/// Percent impostor accepts, percent genuine rejects and their DAc.
EvalResult compute_metrics(std::span<const Decision> genuine, std::span<const Decision> impostor);

/// Unweighted mean over users.
EvalResult average_users(std::vector<UserResult> per_user);

struct ExperimentConfig {
    EnrollmentConfig enrollment;
    std::size_t impostor_test_vectors_per_user = 4;
    /// Restricts the population; all corpus users when empty.
    std::vector<int> users;
    /// Worker threads for per-user work; 0 uses every core. Results do not
    /// depend on it.
    std::size_t threads = 0;
};

/// Per user: enroll on the train split, score the user's own test windows
/// and the first few test windows of every other in-scope user. Users
/// missing either split are excluded with a warning.
EvalResult run_experiment(const SetupSpec& setup, SystemKind system, const ExperimentConfig& cfg,
                          const FeatureCorpus& corpus);

struct ScalabilityPoint {
    std::size_t users = 0;
    EvalResult result;
};

/// run_experiment on the first n users of `order` (ascending ids when empty)
/// for n = 2..N.
std::vector<ScalabilityPoint> scalability_sweep(const SetupSpec& setup, SystemKind system, const ExperimentConfig& cfg,
                                                const FeatureCorpus& corpus, std::vector<int> order = {});

struct WeightPoint {
    double w_acc = 0.0;
    EvalResult result;
};

struct WeightSweep {
    std::vector<WeightPoint> points;
    double best_w_acc = 0.0;  // argmin of DFAR + DFRR, first on ties
};

/// SLF runs over a weight grid; models are trained once per user and only
/// the fusion and threshold change across points.
WeightSweep slf_weight_sweep(const SetupSpec& setup, const ExperimentConfig& cfg, const FeatureCorpus& corpus,
                             std::span<const double> weights);

// ---------------------------------------------------------------------------
// Selection and full-pipeline evaluation

enum class SubsetSource { All, CFS, SSCS, SSTF };
std::string_view subset_source_name(SubsetSource s) noexcept;
SubsetSource parse_subset_source(std::string_view text);

struct SelectionResult {
    std::vector<RankedFeature> acc_ranking;
    std::vector<RankedFeature> rot_ranking;
    FeatureSubset acc;
    FeatureSubset rot;
    FusedSubsets fused;
};

struct SelectionConfig {
    SplitId split{1, 1};
    RankingConfig ranking;
    CfsConfig cfs;
    bool rank = true;
};

/// Ranking and CFS on one split with the user id as the class.
SelectionResult run_selection(const FeatureCorpus& corpus, const SelectionConfig& cfg,
                              std::span<const int> users = {});

SystemSubsets subsets_for(const SelectionResult& sel, SubsetSource source);

struct PipelineEvalConfig {
    PipelineConfig pipeline;
    SelectionConfig selection;
    SubsetSource subset_source = SubsetSource::SSCS;
    ExperimentConfig experiment;
};

/// Extraction, selection and run_experiment in one go.
EvalResult evaluate_dataset(const Dataset& data, const SetupSpec& setup, SystemKind system,
                            const PipelineEvalConfig& cfg);

struct WindowCell {
    double w_size_s = 0.0;
    double s_interval_s = 0.0;
    bool present = false;
    EvalResult result;
};

/// Slide intervals per window size: w, w/2, 4 s and 2 s, keeping those
/// no longer than w, without duplicates.
std::vector<std::pair<double, double>> window_grid(std::span<const double> w_sizes_s);

/// A cell is absent when some in-scope user gets fewer than two windows.
std::vector<WindowCell> window_parameter_sweep(const Dataset& data, const SetupSpec& setup, SystemKind system,
                                               const PipelineEvalConfig& cfg, std::span<const double> w_sizes_s);

// ---------------------------------------------------------------------------
// Reports

struct SummaryRow {
    SetupSpec setup;
    SystemKind system = SystemKind::FLF;
    ClassifierKind classifier = ClassifierKind::kNNEuc;
    EvalResult result;
};

/// setup,system,classifier,dfar,dfrr,dac
std::string format_summary_csv(std::span<const SummaryRow> rows);
/// Wide layout: one line per (system, classifier), one column group per setup.
std::string format_summary_table(std::span<const SummaryRow> rows);
std::string format_per_user_csv(const EvalResult& r);
std::string format_scalability_csv(std::span<const ScalabilityPoint> points);
std::string format_weight_csv(const WeightSweep& sweep);
std::string format_window_csv(std::span<const WindowCell> cells);

/// Arithmetic checks on a result (ranges and the DAc identity); returns
/// human-readable failures.
std::vector<std::string> check_invariants(const EvalResult& r);

}  // namespace armauth
