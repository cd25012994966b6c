#include "bdnet/config_file.hpp"
#include "bdnet/harness.hpp"

#include "printers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace bdnet;
using namespace bdnet::harness;
using synth::StructureKind;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.structures = {StructureKind::AR2, StructureKind::Cluster};
    cfg.dims = {5};
    cfg.sample_sizes = {60};
    cfg.replications = 3;
    cfg.gibbs.burn_in = 50;
    cfg.gibbs.retained = 100;
    cfg.wishart_draws = 100;
    cfg.seed = 17;
    return cfg;
}

Estimate truth_estimator(Estimator, const TaskData& d, const TaskSeeds&)
{
    return {d.model.true_delta, d.model.true_adjacency, std::nullopt};
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("bdnet_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Config, Validation)
{
    auto cfg = small_config();
    EXPECT_NO_THROW(cfg.validate());
    cfg.sample_sizes = {60, 70};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.dims = {3};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.sweep_grid = {0.3, 0.2};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);

    ExperimentConfig def;
    EXPECT_EQ(def.structures.size(), 9u);
    def.apply_paper_scale();
    EXPECT_EQ(def.replications, 40u);
    EXPECT_EQ(def.gibbs.burn_in, 5000u);
    EXPECT_EQ(def.gibbs.retained, 10000u);
    EXPECT_EQ(parse_estimator(to_string(Estimator::Dnet)), Estimator::Dnet);
}

TEST(Seeds, PairwiseDistinct)
{
    std::set<std::uint64_t> seen;
    std::size_t count = 0;
    for (auto kind : synth::kAllStructures) {
        for (Index dim : {10, 30, 100}) {
            for (std::size_t r = 0; r < 40; ++r) {
                const auto s = task_seeds(5, kind, dim, r);
                EXPECT_EQ(s.task, task_seed(5, kind, dim, r));
                for (auto v : {s.task, s.structure, s.sample1, s.sample2, s.estimator,
                               s.estimator + 1}) {
                    seen.insert(v);
                    ++count;
                }
            }
        }
    }
    EXPECT_EQ(seen.size(), count);
    EXPECT_NE(task_seed(5, StructureKind::AR1, 10, 0), task_seed(6, StructureKind::AR1, 10, 0));
}

TEST(Synthetic, TruthEstimatorScoresPerfectly)
{
    const auto table = run_synthetic_experiment(small_config(), truth_estimator);
    ASSERT_EQ(table.records.size(), 2u * 3u * 2u);
    for (const auto& r : table.records) {
        EXPECT_EQ(r.loss.l1, 0.0);
        EXPECT_EQ(r.loss.l2, 0.0);
        EXPECT_EQ(r.loss.el1, 0.0);
        EXPECT_EQ(r.scores.mcc, 1.0);
        EXPECT_EQ(r.scores.f1, 1.0);
    }
    const auto* row = table.find(StructureKind::Cluster, 5, Estimator::Bnet, "mcc");
    ASSERT_NE(row, nullptr);
    EXPECT_EQ(row->median, 1.0);
    EXPECT_EQ(row->mad, 0.0);
    EXPECT_EQ(row->bootstrap_se, 0.0);
    EXPECT_EQ(row->available, 3u);
    EXPECT_EQ(table.rows.size(), 2u * 2u * metric_names().size());
}

TEST(Synthetic, CompleteTruthGivesNaSpecificity)
{
    auto cfg = small_config();
    cfg.structures = {StructureKind::AR1};
    cfg.estimators = {Estimator::Bnet};
    const auto table = run_synthetic_experiment(cfg, truth_estimator);
    const auto* sp = table.find(StructureKind::AR1, 5, Estimator::Bnet, "sp");
    ASSERT_NE(sp, nullptr);
    EXPECT_FALSE(sp->median.has_value());
    EXPECT_EQ(sp->available, 0u);
    EXPECT_NE(results_csv(table).find(",sp,3,0,NA,NA,NA"), std::string::npos);
}

TEST(Synthetic, DeterministicAndThreadIndependent)
{
    auto cfg = small_config();
    const auto a = run_synthetic_experiment(cfg);
    const auto b = run_synthetic_experiment(cfg);
    EXPECT_EQ(results_csv(a), results_csv(b));

    const auto d1 = scratch("t1"), d3 = scratch("t3");
    emit_outputs(a, cfg, d1);
    cfg.threads = 3;
    emit_outputs(run_synthetic_experiment(cfg), cfg, d3);
    for (const char* f : {"results.csv", "replications.csv", "manifest.json"}) {
        EXPECT_EQ(slurp(d1 / f), slurp(d3 / f)) << f;
    }
    fs::remove_all(d1);
    fs::remove_all(d3);
}

TEST(Synthetic, TaskErrorsCarryContext)
{
    auto cfg = small_config();
    cfg.threads = 2;
    const EstimatorFn failing = [](Estimator, const TaskData&, const TaskSeeds&) -> Estimate {
        throw std::runtime_error("boom");
    };
    try {
        run_synthetic_experiment(cfg, failing);
        FAIL() << "expected an error";
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("structure ar2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("replication 0"), std::string::npos) << msg;
        EXPECT_NE(msg.find("boom"), std::string::npos) << msg;
    }
}

TEST(ParallelFor, RunsEveryIndexAndRethrowsLowest)
{
    std::vector<int> hits(50, 0);
    parallel_for(50, 4, [&](std::size_t i) { hits[i] += 1; });
    EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 50);
    try {
        parallel_for(20, 3, [](std::size_t i) {
            if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
        });
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "7");
    }
}

TEST(Aggregate, MatchesSortOracle)
{
    const std::vector<double> l1{0.9, 0.1, 0.5, 0.7, 0.3, 1.3};
    std::vector<ReplicationRecord> recs;
    for (std::size_t r = 0; r < l1.size(); ++r) {
        ReplicationRecord rec;
        rec.structure = StructureKind::Band;
        rec.dim = 10;
        rec.n = 100;
        rec.replication = r;
        rec.loss.l1 = l1[r];
        rec.scores.mcc = r % 2 ? metrics::Score{} : metrics::Score{0.1 * double(r)};
        recs.push_back(rec);
    }
    const auto rows = aggregate(recs, 3);
    auto row_for = [&](const std::string& m) {
        return *std::find_if(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.metric == m; });
    };

    std::vector<double> sorted = l1;
    std::sort(sorted.begin(), sorted.end());
    const double med = 0.5 * (sorted[2] + sorted[3]);
    std::vector<double> dev;
    for (double v : l1) dev.push_back(std::abs(v - med));
    std::sort(dev.begin(), dev.end());
    const auto l1_row = row_for("l1");
    EXPECT_DOUBLE_EQ(*l1_row.median, med);
    EXPECT_DOUBLE_EQ(*l1_row.mad, 0.5 * (dev[2] + dev[3]));
    EXPECT_GT(*l1_row.bootstrap_se, 0.0);
    EXPECT_EQ(l1_row.replications, 6u);

    const auto mcc_row = row_for("mcc");
    EXPECT_EQ(mcc_row.available, 3u);
    EXPECT_DOUBLE_EQ(*mcc_row.median, 0.2);

    // Replication order does not matter for the median or MAD.
    std::reverse(recs.begin(), recs.end());
    const auto rev = aggregate(recs, 3);
    const auto rev_l1 = *std::find_if(rev.begin(), rev.end(), [](const ResultRow& r) { return r.metric == "l1"; });
    EXPECT_EQ(rev_l1.median, l1_row.median);
    EXPECT_EQ(rev_l1.mad, l1_row.mad);
}

TEST(Aggregate, BootstrapEdgeCases)
{
    EXPECT_EQ(bootstrap_median_se({2.0, 2.0, 2.0}, 200, 1), 0.0);
    EXPECT_EQ(bootstrap_median_se({2.0}, 200, 1), 0.0);
    const std::vector<double> v{1, 5, 2, 8, 3};
    EXPECT_EQ(bootstrap_median_se(v, 200, 9), bootstrap_median_se(v, 200, 9));
}

TEST(Outputs, EmptyTable)
{
    const auto dir = scratch("empty");
    emit_outputs(ResultsTable{}, small_config(), dir);
    EXPECT_EQ(slurp(dir / "results.csv"),
              "structure,p,n,estimator,metric,replications,available,median,mad,bootstrap_se\n");
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
}

TEST(Outputs, UnwritableDirectory)
{
    const auto file = scratch("blocker");
    std::ofstream(file) << "x";
    EXPECT_THROW(emit_outputs(ResultsTable{}, small_config(), file / "sub"), OutputError);
    fs::remove_all(file);
}

TEST(Outputs, ResultsReadBackAsCsv)
{
    auto cfg = small_config();
    cfg.estimators = {Estimator::Dnet};
    const auto table = run_synthetic_experiment(cfg);
    const auto dir = scratch("readback");
    emit_outputs(table, cfg, dir);
    data::CsvOptions opt;
    opt.columns = {"p", "n", "replications", "available"};
    const auto ds = data::read_csv(dir / "results.csv", opt);
    EXPECT_EQ(static_cast<std::size_t>(ds.n()), table.rows.size());
    EXPECT_EQ(ds.rows(0, 0), 5.0);
    EXPECT_EQ(ds.rows(0, 2), 3.0);
    fs::remove_all(dir);
}

TEST(ConfigHash, TracksResultRelevantFields)
{
    auto a = small_config();
    auto b = small_config();
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    b.threads = 8;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.eta = 0.31;
    EXPECT_NE(config_hash(a), config_hash(b));
    b = small_config();
    b.seed = 18;
    EXPECT_NE(config_hash(a), config_hash(b));
    b = small_config();
    b.gibbs.retained = 101;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Numbers, ShortestForm)
{
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_score(std::nullopt), "NA");
}

TEST(ThresholdStudy, ShapeAndRoundTrip)
{
    auto cfg = small_config();
    cfg.structures = {StructureKind::AR2};
    cfg.replications = 2;
    const auto sweeps = run_threshold_study(cfg);
    ASSERT_EQ(sweeps.size(), 2u);
    for (const auto& s : sweeps) {
        EXPECT_EQ(s.grid.size(), 21u);
        EXPECT_EQ(s.median_mcc.size(), 21u);
        EXPECT_EQ(s.median_sparsity_error.size(), 21u);
        EXPECT_EQ(s.replications.size(), 2u);
        EXPECT_NE(std::find(s.grid.begin(), s.grid.end(), s.best_eta), s.grid.end());
    }
    EXPECT_EQ(sweeps[0].rule, EdgeRuleKind::Mean);
    EXPECT_EQ(sweeps[1].rule, EdgeRuleKind::Ratio);

    const std::string text = sweep_json(sweeps);
    EXPECT_EQ(sweep_json(parse_sweep_json(text)), text);

    const auto dir = scratch("sweep");
    emit_outputs(sweeps, cfg, dir);
    EXPECT_EQ(slurp(dir / "sweep.json"), text);
    fs::remove_all(dir);
}

TEST(RealAnalysis, IdenticalClassesGiveNoEdges)
{
    const auto dir = scratch("real");
    fs::create_directories(dir);
    const Matrix x = synth::sample_gaussian(
        synth::make_structure({StructureKind::AR1, 4}).theta1, 80, 3);
    {
        std::ofstream out(dir / "in.csv");
        out << "label,a,b,c,d\n";
        for (const char* label : {"x", "y"}) {
            for (Index r = 0; r < x.rows(); ++r) {
                out << label;
                for (Index c = 0; c < 4; ++c) out << "," << format_number(x(r, c));
                out << "\n";
            }
        }
    }
    RealAnalysisConfig cfg;
    cfg.csv = dir / "in.csv";
    cfg.class_column = "label";
    cfg.class_values = {"x", "y"};
    cfg.bnet.gibbs.burn_in = 100;
    cfg.bnet.gibbs.retained = 300;
    cfg.bnet.wishart_draws = 200;
    cfg.bnet.mode = diffnet::CombineMode::Difference;
    const auto res = run_real_analysis(cfg);
    EXPECT_EQ(res.n1, 80u);
    EXPECT_EQ(res.n2, 80u);
    EXPECT_EQ(res.columns, (std::vector<std::string>{"a", "b", "c", "d"}));
    EXPECT_EQ(res.network.adjacency.edge_count(), 0u);
    EXPECT_NEAR(res.box_m.statistic, 0.0, 1e-9);
    EXPECT_NEAR(res.box_m.p_value, 1.0, 1e-9);

    emit_outputs(res, cfg, dir / "out");
    EXPECT_EQ(slurp(dir / "out" / "edges.txt"), "");
    data::CsvOptions opt;
    opt.columns = res.columns;
    const auto delta = data::read_csv(dir / "out" / "delta_hat.csv", opt);
    EXPECT_EQ(SymMatrix::from_dense(delta.rows, 0.0), res.network.delta_hat);
    for (const char* f : {"adjacency.csv", "theta1_mean.csv", "theta2_mean.csv", "report.json",
                          "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
    }
    fs::remove_all(dir);
}

TEST(RealAnalysis, RecoversKnownDifferenceFromCsv)
{
    const auto dir = scratch("known");
    fs::create_directories(dir);
    const auto mp = synth::make_structure({StructureKind::Cluster, 6});
    const std::array<Matrix, 2> xs{synth::sample_gaussian(mp.theta1, 200, 21),
                                   synth::sample_gaussian(mp.theta2, 200, 22)};
    {
        std::ofstream out(dir / "in.csv");
        out << "v1,v2,v3,v4,v5,v6,group\n";
        for (std::size_t k = 0; k < 2; ++k) {
            for (Index r = 0; r < xs[k].rows(); ++r) {
                for (Index c = 0; c < 6; ++c) out << format_number(xs[k](r, c)) << ",";
                out << (k == 0 ? "before" : "after") << "\n";
            }
        }
    }
    RealAnalysisConfig cfg;
    cfg.csv = dir / "in.csv";
    cfg.class_column = "group";
    cfg.class_values = {"before", "after"};
    cfg.nonparanormal = false;
    cfg.bnet.gibbs.burn_in = 200;
    cfg.bnet.gibbs.retained = 500;
    cfg.bnet.wishart_draws = 300;
    const auto res = run_real_analysis(cfg);
    const auto score = metrics::mcc(metrics::confusion(res.network.adjacency, mp.true_adjacency));
    ASSERT_TRUE(score.has_value());
    EXPECT_GT(*score, 0.7);
    EXPECT_LT(res.box_m.p_value, 0.001);
    fs::remove_all(dir);
}

TEST(RealAnalysis, PhasesAndTooFewRows)
{
    const auto dir = scratch("phases");
    fs::create_directories(dir);
    const Matrix x = synth::sample_gaussian(SymMatrix::identity(3), 40, 4);
    {
        std::ofstream out(dir / "in.csv");
        out << "date,u,v,w\n";
        for (Index r = 0; r < x.rows(); ++r) {
            const data::Date d{std::chrono::sys_days{std::chrono::year{2021} / 1 / 1} +
                               std::chrono::days{static_cast<int>(r)}};
            out << data::format_date(d) << "," << x(r, 0) << "," << x(r, 1) << "," << x(r, 2) << "\n";
        }
    }
    RealAnalysisConfig cfg;
    cfg.csv = dir / "in.csv";
    cfg.csv_options.date_column = "date";
    cfg.boundaries = {std::chrono::year{2021} / 1 / 21};
    cfg.phase_names = {"early", "late"};
    cfg.compare_phases = {"early", "late"};
    cfg.bnet.gibbs.burn_in = 20;
    cfg.bnet.gibbs.retained = 50;
    cfg.bnet.wishart_draws = 50;
    const auto res = run_real_analysis(cfg);
    EXPECT_EQ(res.n1, 20u);
    EXPECT_EQ(res.n2, 20u);

    cfg.moving_average = 7;
    const auto smoothed = run_real_analysis(cfg);
    EXPECT_EQ(smoothed.n1 + smoothed.n2, 34u);

    cfg.moving_average = 0;
    cfg.compare_phases = {"early", "middle"};
    EXPECT_THROW(run_real_analysis(cfg), std::invalid_argument);

    EXPECT_THROW(analyze_samples(x.topRows(3), x.bottomRows(10), {"u", "v", "w"}, cfg.bnet, 1),
                 data::DataError);
    fs::remove_all(dir);
}

TEST(SingleSample, OutputsAndGraph)
{
    const auto mp = synth::make_structure({StructureKind::AR1, 5});
    const Matrix x = synth::sample_gaussian(mp.theta1, 100, 2);
    diffnet::BnetOptions opt;
    opt.gibbs.burn_in = 50;
    opt.gibbs.retained = 100;
    opt.wishart_draws = 100;
    const auto res = analyze_single(x, {"a", "b", "c", "d", "e"}, opt, 4);
    EXPECT_EQ(res.adjacency, wishart::edge_rule_mean(res.summary.eh, opt.eta));
    const auto dir = scratch("single");
    emit_outputs(res, opt, 4, dir);
    for (const char* f : {"theta_mean.csv", "partial_corr_mean.csv", "eh.csv", "edges.txt",
                          "manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    fs::remove_all(dir);
}

TEST(ConfigFile, ParsesSections)
{
    const auto cf = config::parse_config(R"(
[run]
seed = 42
threads = 3
[experiment]
structures = ar1, 7
dims = 10, 20
sample_sizes = 100, 150
eta = 0.25
mode = xor
[gibbs]
burn_in = 10
fixed_lambda = 1.5
[real]
class_values = spam, ham
nonparanormal = false
)");
    EXPECT_EQ(cf.run.seed, 42u);
    EXPECT_EQ(cf.run.threads, 3u);
    EXPECT_EQ(cf.experiment.structures,
              (std::vector<StructureKind>{StructureKind::AR1, StructureKind::Cluster}));
    EXPECT_EQ(cf.experiment.dims, (std::vector<Index>{10, 20}));
    EXPECT_EQ(cf.experiment.eta, 0.25);
    EXPECT_EQ(cf.experiment.mode, diffnet::CombineMode::Xor);
    EXPECT_EQ(cf.experiment.gibbs.burn_in, 10u);
    EXPECT_EQ(cf.experiment.gibbs.fixed_lambda, 1.5);
    EXPECT_EQ(cf.experiment.gibbs.retained, ExperimentConfig{}.gibbs.retained);
    EXPECT_EQ(cf.real.class_values[1], "ham");
    EXPECT_FALSE(cf.real.nonparanormal);
}

TEST(ConfigFile, Errors)
{
    EXPECT_THROW(config::parse_config("[experiment]\ncolour = red\n"), config::ConfigError);
    EXPECT_THROW(config::parse_config("[nope]\nx = 1\n"), config::ConfigError);
    EXPECT_THROW(config::parse_config("[experiment]\neta = lots\n"), config::ConfigError);
    EXPECT_THROW(config::parse_config("[run]\npaper_scale = maybe\n"), config::ConfigError);
    EXPECT_THROW(config::load_config("/nonexistent/bdnet.ini"), config::ConfigError);
    EXPECT_EQ(config::split_list(" a, b ,c"), (std::vector<std::string>{"a", "b", "c"}));
}
