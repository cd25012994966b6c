#pragma once

#include "bdnet/baglasso.hpp"
#include "bdnet/data_pipeline.hpp"
#include "bdnet/diffnet.hpp"
#include "bdnet/dnet.hpp"
#include "bdnet/metrics.hpp"
#include "bdnet/structures.hpp"
#include "bdnet/wishart_threshold.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bdnet::harness {

enum class Estimator { Bnet, Dnet };

std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct ExperimentConfig {
    std::vector<synth::StructureKind> structures{synth::kAllStructures.begin(),
                                                 synth::kAllStructures.end()};
    std::vector<Index> dims{10, 30, 100};
    std::vector<std::size_t> sample_sizes{50, 100, 200}; ///< paired with dims
    std::size_t replications = 10;
    std::vector<Estimator> estimators{Estimator::Bnet, Estimator::Dnet};

    baglasso::GibbsConfig gibbs = desk_gibbs();
    dnet::IstaConfig ista;
    double eta = 0.3;
    diffnet::CombineMode mode = diffnet::CombineMode::Union;
    double epsilon = wishart::kDefaultEpsilon;
    std::size_t wishart_draws = wishart::kDefaultDraws;
    std::vector<double> sweep_grid = wishart::default_grid();

    std::uint64_t seed = 0;
    /// Worker threads; has no effect on any output.
    std::size_t threads = 1;

    void validate() const;

    /// 40 replications, 5000 burn-in, 10000 retained.
    void apply_paper_scale();

    diffnet::BnetOptions bnet_options() const;

    static baglasso::GibbsConfig desk_gibbs();
};

/// Seed of one (structure, dim, replication) task.
std::uint64_t task_seed(std::uint64_t master, synth::StructureKind kind, Index dim,
                        std::size_t replication);

/// Seeds used inside one task, all derived from task_seed.
struct TaskSeeds {
    std::uint64_t task = 0;
    std::uint64_t structure = 0;
    std::uint64_t sample1 = 0;
    std::uint64_t sample2 = 0;
    std::uint64_t estimator = 0;
};

TaskSeeds task_seeds(std::uint64_t master, synth::StructureKind kind, Index dim,
                     std::size_t replication);

/// The data of one task: the true pair and the two samples.
struct TaskData {
    synth::ModelPair model;
    Matrix x1;
    Matrix x2;
};

TaskData make_task_data(const TaskSeeds& seeds, synth::StructureKind kind, Index dim,
                        std::size_t n);

/// Metric names in table order: six losses, then five scores.
const std::vector<std::string>& metric_names();

/// One estimator's result on one replication.
struct ReplicationRecord {
    synth::StructureKind structure = synth::StructureKind::AR1;
    Index dim = 0;
    std::size_t n = 0;
    std::size_t replication = 0;
    Estimator estimator = Estimator::Bnet;
    std::uint64_t seed = 0;
    metrics::LossReport loss;
    metrics::ClassificationScores scores;
    /// Mean-rule partial correlations of both components (B-net only), kept
    /// so the graph can be re-thresholded without rerunning the chains.
    std::optional<std::array<SymMatrix, 2>> eh;
    AdjacencyMatrix truth;

    /// Value of a metric by name; empty for an NA score.
    metrics::Score metric(std::string_view name) const;
};

/// Estimate produced by an estimator for one task.
struct Estimate {
    SymMatrix delta_hat;
    AdjacencyMatrix adjacency;
    std::optional<std::array<SymMatrix, 2>> eh;
};

/// Replaces the built-in estimators (tests inject an oracle this way).
using EstimatorFn = std::function<Estimate(Estimator, const TaskData&, const TaskSeeds&)>;

struct ResultRow {
    synth::StructureKind structure = synth::StructureKind::AR1;
    Index dim = 0;
    std::size_t n = 0;
    Estimator estimator = Estimator::Bnet;
    std::string metric;
    std::size_t replications = 0; ///< values aggregated, NA included
    std::size_t available = 0;    ///< values that were not NA
    metrics::Score median;
    metrics::Score mad;           ///< median absolute deviation from the median
    metrics::Score bootstrap_se;  ///< standard deviation of bootstrap medians
};

struct ResultsTable {
    std::vector<ResultRow> rows;
    std::vector<ReplicationRecord> records; ///< sorted by task, then estimator

    /// First row matching the key, or nullptr.
    const ResultRow* find(synth::StructureKind s, Index dim, Estimator e,
                          std::string_view metric) const;
};

inline constexpr std::size_t kBootstrapResamples = 200;

/// Standard deviation of medians over `resamples` bootstrap resamples.
double bootstrap_median_se(const std::vector<double>& values, std::size_t resamples,
                           std::uint64_t seed);

/// Rows from records; records must already be in task order.
std::vector<ResultRow> aggregate(const std::vector<ReplicationRecord>& records,
                                 std::uint64_t master_seed);

ResultsTable run_synthetic_experiment(const ExperimentConfig& cfg,
                                      const EstimatorFn& estimator = {});

enum class EdgeRuleKind { Mean, Ratio };

std::string_view to_string(EdgeRuleKind r);

struct SweepSummary {
    synth::StructureKind structure = synth::StructureKind::AR1;
    Index dim = 0;
    std::size_t n = 0;
    EdgeRuleKind rule = EdgeRuleKind::Mean;
    std::vector<double> grid;
    std::vector<double> median_sparsity_error;
    std::vector<metrics::Score> median_mcc;
    double best_eta = 0.0;           ///< maximizer of median_mcc
    metrics::Score best_mcc;
    std::vector<double> replication_best_eta;
    std::vector<metrics::Score> replication_best_mcc;
    std::vector<wishart::ThresholdReport> replications;
};

/// Per structure and dim, both rules over cfg.sweep_grid using cfg.mode to
/// combine the two components.
std::vector<SweepSummary> run_threshold_study(const ExperimentConfig& cfg);

/// Where the two compared samples come from.
struct RealAnalysisConfig {
    std::filesystem::path csv;
    data::CsvOptions csv_options;

    /// Class split: rows whose class column equals class_values[k] form sample k.
    std::optional<std::string> class_column;
    std::array<std::string, 2> class_values;

    /// Phase split over the date column: boundaries define phases, and
    /// phase_names[k] is the phase used as sample k.
    std::vector<data::Date> boundaries;
    std::vector<std::string> phase_names;
    std::array<std::string, 2> compare_phases;

    std::size_t moving_average = 0; ///< trailing window; 0 disables
    bool nonparanormal = true;
    diffnet::BnetOptions bnet;
    std::uint64_t seed = 0;
};

struct RealAnalysisResult {
    std::vector<std::string> columns;
    diffnet::DifferentialNetwork network;
    data::BoxM box_m;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t dropped_rows = 0;
    std::vector<std::string> warnings;
};

RealAnalysisResult run_real_analysis(const RealAnalysisConfig& cfg);

/// Two-sample analysis on matrices that are already prepared.
RealAnalysisResult analyze_samples(const Matrix& x1, const Matrix& x2,
                                   std::vector<std::string> columns,
                                   const diffnet::BnetOptions& opt, std::uint64_t seed);

/// One sample, one chain: posterior summaries and the mean-rule graph.
struct SampleResult {
    std::vector<std::string> columns;
    std::size_t n = 0;
    diffnet::ComponentSummaries summary;
    AdjacencyMatrix adjacency;
    double eta = 0.0;
};

SampleResult analyze_single(const Matrix& x, std::vector<std::string> columns,
                            const diffnet::BnetOptions& opt, std::uint64_t seed);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view bytes);

/// Canonical JSON text of everything in cfg that affects results.
std::string config_json(const ExperimentConfig& cfg);

/// Hex form of fnv1a64(config_json(cfg)).
std::string config_hash(const ExperimentConfig& cfg);

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// results.csv, replications.csv and manifest.json.
void emit_outputs(const ResultsTable& table, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir);

/// sweep.json and manifest.json.
void emit_outputs(const std::vector<SweepSummary>& sweeps, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir);

/// edges.txt, adjacency.csv, delta_hat.csv, theta1_mean.csv, theta2_mean.csv,
/// report.json and manifest.json.
void emit_outputs(const RealAnalysisResult& result, const RealAnalysisConfig& cfg,
                  const std::filesystem::path& dir);

/// theta_mean.csv, partial_corr_mean.csv, eh.csv, edges.txt and manifest.json.
void emit_outputs(const SampleResult& result, const diffnet::BnetOptions& opt,
                  std::uint64_t seed, const std::filesystem::path& dir);

std::string results_csv(const ResultsTable& table);
std::string sweep_json(const std::vector<SweepSummary>& sweeps);

/// Inverse of sweep_json for the summary fields (per-replication reports
/// included).
std::vector<SweepSummary> parse_sweep_json(std::string_view text);

/// Shortest round-trip decimal form; "NA" for an empty score.
std::string format_number(double v);
std::string format_score(const metrics::Score& s);

/// Runs fn(i) for i in [0, count) on `threads` workers. Exceptions are
/// collected and the one from the lowest index is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace bdnet::harness
