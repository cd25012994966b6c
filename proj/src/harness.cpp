#include "bdnet/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace bdnet::harness {

using nlohmann::ordered_json;

std::string_view to_string(Estimator e)
{
    return e == Estimator::Bnet ? "bnet" : "dnet";
}

Estimator parse_estimator(std::string_view name)
{
    if (name == "bnet") return Estimator::Bnet;
    if (name == "dnet") return Estimator::Dnet;
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(EdgeRuleKind r)
{
    return r == EdgeRuleKind::Mean ? "mean" : "ratio";
}

baglasso::GibbsConfig ExperimentConfig::desk_gibbs()
{
    baglasso::GibbsConfig g;
    g.burn_in = 1000;
    g.retained = 2000;
    return g;
}

void ExperimentConfig::apply_paper_scale()
{
    replications = 40;
    gibbs.burn_in = 5000;
    gibbs.retained = 10000;
}

void ExperimentConfig::validate() const
{
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (dims.size() != sample_sizes.size()) {
        throw std::invalid_argument("dims and sample sizes must have the same length");
    }
    if (dims.empty()) throw std::invalid_argument("no dimensions configured");
    if (structures.empty()) throw std::invalid_argument("no structures configured");
    if (estimators.empty()) throw std::invalid_argument("no estimators configured");
    for (Index d : dims) {
        if (d < 4) throw std::invalid_argument("dimensions must be >= 4");
    }
    for (std::size_t n : sample_sizes) {
        if (n < 2) throw std::invalid_argument("sample sizes must be >= 2");
    }
    if (!(eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
    if (sweep_grid.empty()) throw std::invalid_argument("empty sweep grid");
    for (std::size_t k = 1; k < sweep_grid.size(); ++k) {
        if (!(sweep_grid[k] > sweep_grid[k - 1])) {
            throw std::invalid_argument("sweep grid must be strictly increasing");
        }
    }
    if (wishart_draws < 1) throw std::invalid_argument("wishart_draws must be >= 1");
    gibbs.validate();
    ista.validate();
}

diffnet::BnetOptions ExperimentConfig::bnet_options() const
{
    diffnet::BnetOptions o;
    o.gibbs = gibbs;
    o.eta = eta;
    o.mode = mode;
    o.epsilon = epsilon;
    o.wishart_draws = wishart_draws;
    return o;
}

std::uint64_t task_seed(std::uint64_t master, synth::StructureKind kind, Index dim,
                        std::size_t replication)
{
    return derive_seed(master, {static_cast<std::uint64_t>(synth::structure_number(kind)),
                                static_cast<std::uint64_t>(dim),
                                static_cast<std::uint64_t>(replication)});
}

TaskSeeds task_seeds(std::uint64_t master, synth::StructureKind kind, Index dim,
                     std::size_t replication)
{
    TaskSeeds s;
    s.task = task_seed(master, kind, dim, replication);
    s.structure = derive_seed(s.task, {1});
    s.sample1 = derive_seed(s.task, {2});
    s.sample2 = derive_seed(s.task, {3});
    s.estimator = derive_seed(s.task, {4});
    return s;
}

TaskData make_task_data(const TaskSeeds& seeds, synth::StructureKind kind, Index dim,
                        std::size_t n)
{
    synth::StructureSpec spec;
    spec.kind = kind;
    spec.dim = dim;
    spec.seed = seeds.structure;
    TaskData d;
    d.model = synth::make_structure(spec);
    d.x1 = synth::sample_gaussian(d.model.theta1, n, seeds.sample1);
    d.x2 = synth::sample_gaussian(d.model.theta2, n, seeds.sample2);
    return d;
}

const std::vector<std::string>& metric_names()
{
    static const std::vector<std::string> names{"l1", "l2", "el1", "el2", "maxel1", "minel1",
                                                "sp", "se", "fnr", "f1", "mcc"};
    return names;
}

metrics::Score ReplicationRecord::metric(std::string_view name) const
{
    if (name == "l1") return loss.l1;
    if (name == "l2") return loss.l2;
    if (name == "el1") return loss.el1;
    if (name == "el2") return loss.el2;
    if (name == "maxel1") return loss.maxel1;
    if (name == "minel1") return loss.minel1;
    if (name == "sp") return scores.sp;
    if (name == "se") return scores.se;
    if (name == "fnr") return scores.fnr;
    if (name == "f1") return scores.f1;
    if (name == "mcc") return scores.mcc;
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

const ResultRow* ResultsTable::find(synth::StructureKind s, Index dim, Estimator e,
                                    std::string_view metric) const
{
    for (const auto& r : rows) {
        if (r.structure == s && r.dim == dim && r.estimator == e && r.metric == metric) return &r;
    }
    return nullptr;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn)
{
    std::vector<std::exception_ptr> errors(count);
    auto guarded = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) guarded(i);
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double bootstrap_median_se(const std::vector<double>& values, std::size_t resamples,
                           std::uint64_t seed)
{
    const std::size_t n = values.size();
    if (n < 2 || resamples < 2) return 0.0;
    Rng rng(seed);
    std::vector<double> meds(resamples);
    std::vector<double> buf(n);
    for (auto& m : meds) {
        for (auto& b : buf) b = values[rng.next_u64() % n];
        m = metrics::median(buf);
    }
    double mean = 0.0;
    for (double m : meds) mean += m;
    mean /= static_cast<double>(resamples);
    double ss = 0.0;
    for (double m : meds) ss += (m - mean) * (m - mean);
    return std::sqrt(ss / static_cast<double>(resamples - 1));
}

std::vector<ResultRow> aggregate(const std::vector<ReplicationRecord>& records,
                                 std::uint64_t master_seed)
{
    using Key = std::tuple<synth::StructureKind, Index, std::size_t, Estimator>;
    std::vector<Key> order;
    std::map<Key, std::vector<const ReplicationRecord*>> groups;
    for (const auto& r : records) {
        const Key k{r.structure, r.dim, r.n, r.estimator};
        auto [it, fresh] = groups.try_emplace(k);
        if (fresh) order.push_back(k);
        it->second.push_back(&r);
    }

    std::vector<ResultRow> rows;
    const auto& names = metric_names();
    for (const Key& k : order) {
        const auto& group = groups.at(k);
        for (std::size_t m = 0; m < names.size(); ++m) {
            ResultRow row;
            std::tie(row.structure, row.dim, row.n, row.estimator) = k;
            row.metric = names[m];
            row.replications = group.size();
            std::vector<double> vals;
            for (const auto* r : group) {
                if (auto v = r->metric(names[m])) vals.push_back(*v);
            }
            row.available = vals.size();
            if (!vals.empty()) {
                const double med = metrics::median(vals);
                std::vector<double> dev;
                for (double v : vals) dev.push_back(std::abs(v - med));
                row.median = med;
                row.mad = metrics::median(dev);
                const std::uint64_t bseed = derive_seed(
                    master_seed,
                    {0x424f4f54ULL, static_cast<std::uint64_t>(synth::structure_number(row.structure)),
                     static_cast<std::uint64_t>(row.dim), static_cast<std::uint64_t>(row.estimator),
                     static_cast<std::uint64_t>(m)});
                row.bootstrap_se = bootstrap_median_se(vals, kBootstrapResamples, bseed);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

struct TaskKey {
    synth::StructureKind structure;
    Index dim;
    std::size_t n;
    std::size_t replication;
};

std::vector<TaskKey> enumerate_tasks(const ExperimentConfig& cfg)
{
    std::vector<TaskKey> tasks;
    for (auto kind : cfg.structures) {
        for (std::size_t d = 0; d < cfg.dims.size(); ++d) {
            for (std::size_t r = 0; r < cfg.replications; ++r) {
                tasks.push_back({kind, cfg.dims[d], cfg.sample_sizes[d], r});
            }
        }
    }
    return tasks;
}

std::string task_context(const TaskKey& t)
{
    return "structure " + std::string(synth::to_string(t.structure)) + ", p=" +
           std::to_string(t.dim) + ", replication " + std::to_string(t.replication);
}

Estimate builtin_estimate(const ExperimentConfig& cfg, Estimator e, const TaskData& d,
                          const TaskSeeds& seeds)
{
    Estimate est;
    if (e == Estimator::Bnet) {
        diffnet::BnetOptions opt = cfg.bnet_options();
        opt.with_eg = false;
        auto dn = diffnet::estimate_bnet(d.x1, d.x2, opt, diffnet::component_seeds(seeds.estimator));
        est.delta_hat = std::move(dn.delta_hat);
        est.adjacency = std::move(dn.adjacency);
        est.eh = std::array<SymMatrix, 2>{dn.components[0].eh, dn.components[1].eh};
    } else {
        auto dn = dnet::estimate_dnet(d.x1, d.x2, cfg.ista);
        est.delta_hat = std::move(dn.delta_hat);
        est.adjacency = std::move(dn.adjacency);
    }
    return est;
}

} // namespace

ResultsTable run_synthetic_experiment(const ExperimentConfig& cfg, const EstimatorFn& estimator)
{
    cfg.validate();
    const auto tasks = enumerate_tasks(cfg);
    std::vector<std::vector<ReplicationRecord>> per_task(tasks.size());

    parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const TaskKey& t = tasks[i];
        try {
            const TaskSeeds seeds = task_seeds(cfg.seed, t.structure, t.dim, t.replication);
            const TaskData data = make_task_data(seeds, t.structure, t.dim, t.n);
            for (Estimator e : cfg.estimators) {
                Estimate est = estimator ? estimator(e, data, seeds)
                                         : builtin_estimate(cfg, e, data, seeds);
                ReplicationRecord rec;
                rec.structure = t.structure;
                rec.dim = t.dim;
                rec.n = t.n;
                rec.replication = t.replication;
                rec.estimator = e;
                rec.seed = seeds.task;
                rec.loss = metrics::losses(est.delta_hat, data.model.true_delta);
                rec.scores = metrics::classification_scores(
                    metrics::confusion(est.adjacency, data.model.true_adjacency));
                rec.eh = std::move(est.eh);
                rec.truth = data.model.true_adjacency;
                per_task[i].push_back(std::move(rec));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(task_context(t) + ": " + e.what());
        }
    });

    ResultsTable table;
    for (auto& v : per_task) {
        for (auto& r : v) table.records.push_back(std::move(r));
    }
    table.rows = aggregate(table.records, cfg.seed);
    return table;
}

std::vector<SweepSummary> run_threshold_study(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto tasks = enumerate_tasks(cfg);
    constexpr std::array<EdgeRuleKind, 2> kRules{EdgeRuleKind::Mean, EdgeRuleKind::Ratio};
    std::vector<std::array<wishart::ThresholdReport, 2>> reports(tasks.size());

    parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const TaskKey& t = tasks[i];
        try {
            const TaskSeeds seeds = task_seeds(cfg.seed, t.structure, t.dim, t.replication);
            const TaskData data = make_task_data(seeds, t.structure, t.dim, t.n);
            diffnet::BnetOptions opt = cfg.bnet_options();
            const auto cs = diffnet::component_seeds(seeds.estimator);
            const auto c1 = diffnet::summarize_component(data.x1, opt, cs[0]);
            const auto c2 = diffnet::summarize_component(data.x2, opt, cs[1]);
            const auto& truth = data.model.true_adjacency;
            reports[i][0] = wishart::threshold_sweep(
                truth,
                [&](double eta) { return diffnet::dn_adjacency({c1.eh, c2.eh}, eta, cfg.mode); },
                cfg.sweep_grid);
            reports[i][1] = wishart::threshold_sweep(
                truth,
                [&](double eta) {
                    return diffnet::dn_adjacency_ratio({c1.rho_tilde, c2.rho_tilde},
                                                       {c1.eg, c2.eg}, eta, cfg.mode);
                },
                cfg.sweep_grid);
        } catch (const std::exception& e) {
            throw std::runtime_error(task_context(t) + ": " + e.what());
        }
    });

    std::vector<SweepSummary> out;
    for (std::size_t start = 0; start < tasks.size(); start += cfg.replications) {
        for (std::size_t k = 0; k < kRules.size(); ++k) {
            SweepSummary s;
            s.structure = tasks[start].structure;
            s.dim = tasks[start].dim;
            s.n = tasks[start].n;
            s.rule = kRules[k];
            s.grid = cfg.sweep_grid;
            for (std::size_t r = 0; r < cfg.replications; ++r) {
                const auto& rep = reports[start + r][k];
                s.replications.push_back(rep);
                s.replication_best_eta.push_back(rep.best_eta);
                s.replication_best_mcc.push_back(rep.best_mcc);
            }
            for (std::size_t g = 0; g < s.grid.size(); ++g) {
                std::vector<double> err;
                std::vector<metrics::Score> mcc;
                for (const auto& rep : s.replications) {
                    err.push_back(rep.sparsity_error[g]);
                    mcc.push_back(rep.mcc[g]);
                }
                s.median_sparsity_error.push_back(metrics::median(err));
                s.median_mcc.push_back(metrics::median(std::span<const metrics::Score>(mcc)));
            }
            const std::size_t b = wishart::best_index(s.median_mcc);
            s.best_eta = b < s.grid.size() ? s.grid[b] : s.grid.front();
            if (b < s.grid.size()) s.best_mcc = s.median_mcc[b];
            out.push_back(std::move(s));
        }
    }
    return out;
}

RealAnalysisResult analyze_samples(const Matrix& x1, const Matrix& x2,
                                   std::vector<std::string> columns,
                                   const diffnet::BnetOptions& opt, std::uint64_t seed)
{
    const auto p = x1.cols();
    for (const Matrix* x : {&x1, &x2}) {
        if (x->rows() <= p) {
            throw data::DataError("each sample needs more rows than variables (" +
                                  std::to_string(x->rows()) + " rows, " + std::to_string(p) +
                                  " variables)");
        }
    }
    RealAnalysisResult res;
    res.columns = std::move(columns);
    res.n1 = static_cast<std::size_t>(x1.rows());
    res.n2 = static_cast<std::size_t>(x2.rows());
    res.network = diffnet::estimate_bnet(x1, x2, opt, diffnet::component_seeds(seed));
    res.box_m = data::boxs_m_test(data::sample_covariance(x1), res.n1,
                                  data::sample_covariance(x2), res.n2);
    return res;
}

RealAnalysisResult run_real_analysis(const RealAnalysisConfig& cfg)
{
    std::array<Matrix, 2> x;
    std::vector<std::string> columns;
    std::vector<std::string> warnings;
    std::size_t dropped = 0;

    auto prepare = [&](data::Dataset ds) {
        if (cfg.moving_average > 0) ds = data::moving_average(ds, cfg.moving_average);
        return ds;
    };

    if (cfg.class_column) {
        for (int k = 0; k < 2; ++k) {
            data::CsvOptions opt = cfg.csv_options;
            opt.filter_column = cfg.class_column;
            opt.filter_value = cfg.class_values[static_cast<std::size_t>(k)];
            data::Dataset ds = prepare(data::read_csv(cfg.csv, opt));
            dropped += ds.dropped_rows;
            columns = ds.columns;
            x[static_cast<std::size_t>(k)] = ds.rows;
        }
    } else {
        data::Dataset ds = prepare(data::read_csv(cfg.csv, cfg.csv_options));
        dropped = ds.dropped_rows;
        columns = ds.columns;
        const data::PhaseSplit split = data::split_phases(ds, cfg.boundaries, cfg.phase_names);
        warnings = split.warnings;
        for (std::size_t k = 0; k < 2; ++k) {
            auto it = std::find_if(split.phases.begin(), split.phases.end(),
                                   [&](const data::Phase& ph) { return ph.name == cfg.compare_phases[k]; });
            if (it == split.phases.end()) {
                throw std::invalid_argument("unknown phase '" + cfg.compare_phases[k] + "'");
            }
            x[k] = data::phase_rows(ds, *it);
        }
    }

    if (cfg.nonparanormal) {
        for (auto& m : x) m = data::nonparanormal_transform(m, columns);
    }
    RealAnalysisResult res = analyze_samples(x[0], x[1], columns, cfg.bnet, cfg.seed);
    res.dropped_rows = dropped;
    res.warnings = std::move(warnings);
    return res;
}

SampleResult analyze_single(const Matrix& x, std::vector<std::string> columns,
                            const diffnet::BnetOptions& opt, std::uint64_t seed)
{
    if (x.rows() <= x.cols()) {
        throw data::DataError("the sample needs more rows than variables");
    }
    SampleResult res;
    res.columns = std::move(columns);
    res.n = static_cast<std::size_t>(x.rows());
    diffnet::BnetOptions o = opt;
    o.with_eg = false;
    res.summary = diffnet::summarize_component(x, o, seed);
    res.eta = opt.eta;
    res.adjacency = wishart::edge_rule_mean(res.summary.eh, opt.eta);
    return res;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_number(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

std::string format_score(const metrics::Score& s) { return s ? format_number(*s) : "NA"; }

namespace {

ordered_json score_json(const metrics::Score& s) { return s ? ordered_json(*s) : ordered_json(); }

metrics::Score score_from_json(const ordered_json& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

ordered_json gibbs_json(const baglasso::GibbsConfig& g)
{
    ordered_json j;
    j["burn_in"] = g.burn_in;
    j["retained"] = g.retained;
    j["r"] = g.r;
    j["s"] = g.s;
    j["lambda_diag"] = g.lambda_diag;
    j["theta_floor"] = g.theta_floor;
    j["fixed_lambda"] = g.fixed_lambda ? ordered_json(*g.fixed_lambda) : ordered_json();
    return j;
}

ordered_json config_object(const ExperimentConfig& cfg)
{
    ordered_json j;
    ordered_json structures = ordered_json::array();
    for (auto s : cfg.structures) structures.push_back(synth::to_string(s));
    j["structures"] = structures;
    j["dims"] = cfg.dims;
    j["sample_sizes"] = cfg.sample_sizes;
    j["replications"] = cfg.replications;
    ordered_json est = ordered_json::array();
    for (auto e : cfg.estimators) est.push_back(to_string(e));
    j["estimators"] = est;
    j["gibbs"] = gibbs_json(cfg.gibbs);
    ordered_json ista;
    ista["max_iters"] = cfg.ista.max_iters;
    ista["tolerance"] = cfg.ista.tolerance;
    ista["grid"] = cfg.ista.grid;
    ista["grid_size"] = cfg.ista.grid_size;
    ista["grid_low"] = cfg.ista.grid_low;
    j["ista"] = ista;
    j["eta"] = cfg.eta;
    j["mode"] = diffnet::to_string(cfg.mode);
    j["epsilon"] = cfg.epsilon;
    j["wishart_draws"] = cfg.wishart_draws;
    j["sweep_grid"] = cfg.sweep_grid;
    j["seed"] = cfg.seed;
    return j;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw OutputError("write to " + path.string() + " failed");
}

void ensure_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputError("cannot create output directory " + dir.string());
    }
}

ordered_json task_list(const ExperimentConfig& cfg)
{
    ordered_json tasks = ordered_json::array();
    for (const auto& t : enumerate_tasks(cfg)) {
        const TaskSeeds s = task_seeds(cfg.seed, t.structure, t.dim, t.replication);
        ordered_json o;
        o["structure"] = synth::to_string(t.structure);
        o["p"] = t.dim;
        o["n"] = t.n;
        o["replication"] = t.replication;
        o["task_seed"] = s.task;
        o["structure_seed"] = s.structure;
        o["sample_seeds"] = {s.sample1, s.sample2};
        const auto cs = diffnet::component_seeds(s.estimator);
        o["chain_seeds"] = {cs[0], cs[1]};
        tasks.push_back(o);
    }
    return tasks;
}

void write_manifest(const std::filesystem::path& dir, std::string_view kind,
                    const ordered_json& config, const ordered_json& seeds,
                    const std::vector<std::string>& files)
{
    ordered_json m;
    m["kind"] = kind;
    m["config_hash"] = hex64(fnv1a64(config.dump()));
    m["config"] = config;
    m["seeds"] = seeds;
    m["files"] = files;
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::string matrix_csv(const SymMatrix& m, const std::vector<std::string>& names)
{
    std::string out = "variable";
    for (const auto& n : names) out += "," + n;
    out += "\n";
    for (Index i = 0; i < m.dim(); ++i) {
        out += names[static_cast<std::size_t>(i)];
        for (Index j = 0; j < m.dim(); ++j) out += "," + format_number(m(i, j));
        out += "\n";
    }
    return out;
}

ordered_json bnet_json(const diffnet::BnetOptions& o)
{
    ordered_json j;
    j["gibbs"] = gibbs_json(o.gibbs);
    j["eta"] = o.eta;
    j["mode"] = diffnet::to_string(o.mode);
    j["epsilon"] = o.epsilon;
    j["wishart_draws"] = o.wishart_draws;
    return j;
}

} // namespace

std::string config_json(const ExperimentConfig& cfg) { return config_object(cfg).dump(); }

std::string config_hash(const ExperimentConfig& cfg) { return hex64(fnv1a64(config_json(cfg))); }

std::string results_csv(const ResultsTable& table)
{
    std::string out =
        "structure,p,n,estimator,metric,replications,available,median,mad,bootstrap_se\n";
    for (const auto& r : table.rows) {
        out += std::string(synth::to_string(r.structure)) + "," + std::to_string(r.dim) + "," +
               std::to_string(r.n) + "," + std::string(to_string(r.estimator)) + "," + r.metric +
               "," + std::to_string(r.replications) + "," + std::to_string(r.available) + "," +
               format_score(r.median) + "," + format_score(r.mad) + "," +
               format_score(r.bootstrap_se) + "\n";
    }
    return out;
}

namespace {

std::string replications_csv(const ResultsTable& table)
{
    std::string out = "structure,p,n,replication,estimator,task_seed";
    for (const auto& m : metric_names()) out += "," + m;
    out += "\n";
    for (const auto& r : table.records) {
        out += std::string(synth::to_string(r.structure)) + "," + std::to_string(r.dim) + "," +
               std::to_string(r.n) + "," + std::to_string(r.replication) + "," +
               std::string(to_string(r.estimator)) + "," + std::to_string(r.seed);
        for (const auto& m : metric_names()) out += "," + format_score(r.metric(m));
        out += "\n";
    }
    return out;
}

} // namespace

void emit_outputs(const ResultsTable& table, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir)
{
    ensure_dir(dir);
    write_text(dir / "results.csv", results_csv(table));
    write_text(dir / "replications.csv", replications_csv(table));
    write_manifest(dir, "synthetic", config_object(cfg), task_list(cfg),
                   {"results.csv", "replications.csv"});
}

std::string sweep_json(const std::vector<SweepSummary>& sweeps)
{
    ordered_json arr = ordered_json::array();
    for (const auto& s : sweeps) {
        ordered_json j;
        j["structure"] = synth::to_string(s.structure);
        j["p"] = s.dim;
        j["n"] = s.n;
        j["rule"] = to_string(s.rule);
        j["grid"] = s.grid;
        j["median_sparsity_error"] = s.median_sparsity_error;
        ordered_json mcc = ordered_json::array();
        for (const auto& m : s.median_mcc) mcc.push_back(score_json(m));
        j["median_mcc"] = mcc;
        j["best_eta"] = s.best_eta;
        j["best_mcc"] = score_json(s.best_mcc);
        ordered_json reps = ordered_json::array();
        for (const auto& r : s.replications) {
            ordered_json o;
            o["sparsity_error"] = r.sparsity_error;
            ordered_json m = ordered_json::array();
            for (const auto& v : r.mcc) m.push_back(score_json(v));
            o["mcc"] = m;
            o["best_eta"] = r.best_eta;
            o["best_mcc"] = score_json(r.best_mcc);
            reps.push_back(o);
        }
        j["replications"] = reps;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::vector<SweepSummary> parse_sweep_json(std::string_view text)
{
    const auto arr = ordered_json::parse(text);
    std::vector<SweepSummary> out;
    for (const auto& j : arr) {
        SweepSummary s;
        s.structure = synth::parse_structure(j.at("structure").get<std::string>());
        s.dim = j.at("p").get<Index>();
        s.n = j.at("n").get<std::size_t>();
        s.rule = j.at("rule").get<std::string>() == "mean" ? EdgeRuleKind::Mean : EdgeRuleKind::Ratio;
        s.grid = j.at("grid").get<std::vector<double>>();
        s.median_sparsity_error = j.at("median_sparsity_error").get<std::vector<double>>();
        for (const auto& m : j.at("median_mcc")) s.median_mcc.push_back(score_from_json(m));
        s.best_eta = j.at("best_eta").get<double>();
        s.best_mcc = score_from_json(j.at("best_mcc"));
        for (const auto& o : j.at("replications")) {
            wishart::ThresholdReport r;
            r.grid = s.grid;
            r.sparsity_error = o.at("sparsity_error").get<std::vector<double>>();
            for (const auto& m : o.at("mcc")) r.mcc.push_back(score_from_json(m));
            r.best_eta = o.at("best_eta").get<double>();
            r.best_mcc = score_from_json(o.at("best_mcc"));
            s.replication_best_eta.push_back(r.best_eta);
            s.replication_best_mcc.push_back(r.best_mcc);
            s.replications.push_back(std::move(r));
        }
        out.push_back(std::move(s));
    }
    return out;
}

void emit_outputs(const std::vector<SweepSummary>& sweeps, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir)
{
    ensure_dir(dir);
    write_text(dir / "sweep.json", sweep_json(sweeps));
    write_manifest(dir, "sweep", config_object(cfg), task_list(cfg), {"sweep.json"});
}

void emit_outputs(const RealAnalysisResult& result, const RealAnalysisConfig& cfg,
                  const std::filesystem::path& dir)
{
    ensure_dir(dir);
    const auto& dn = result.network;
    const auto& names = result.columns;

    std::string edges;
    for (auto [i, j] : dn.adjacency.edges()) {
        edges += names[static_cast<std::size_t>(i)] + "\t" + names[static_cast<std::size_t>(j)] +
                 "\t" + format_number(dn.delta_hat(i, j)) + "\n";
    }
    write_text(dir / "edges.txt", edges);

    std::string adj = "variable";
    for (const auto& n : names) adj += "," + n;
    adj += "\n";
    for (Index i = 0; i < dn.adjacency.dim(); ++i) {
        adj += names[static_cast<std::size_t>(i)];
        for (Index j = 0; j < dn.adjacency.dim(); ++j) adj += dn.adjacency(i, j) ? ",1" : ",0";
        adj += "\n";
    }
    write_text(dir / "adjacency.csv", adj);
    write_text(dir / "delta_hat.csv", matrix_csv(dn.delta_hat, names));
    write_text(dir / "theta1_mean.csv", matrix_csv(dn.components[0].theta_mean, names));
    write_text(dir / "theta2_mean.csv", matrix_csv(dn.components[1].theta_mean, names));

    ordered_json rep;
    rep["columns"] = names;
    rep["n1"] = result.n1;
    rep["n2"] = result.n2;
    rep["dropped_rows"] = result.dropped_rows;
    rep["edge_count"] = dn.adjacency.edge_count();
    rep["eta"] = dn.eta;
    rep["mode"] = diffnet::to_string(dn.mode);
    rep["box_m"] = {{"statistic", result.box_m.statistic},
                    {"p_value", result.box_m.p_value},
                    {"dof", result.box_m.dof}};
    rep["warnings"] = result.warnings;
    write_text(dir / "report.json", rep.dump(2) + "\n");

    ordered_json config;
    config["csv"] = cfg.csv.string();
    config["class_column"] = cfg.class_column ? ordered_json(*cfg.class_column) : ordered_json();
    config["class_values"] = cfg.class_values;
    ordered_json bounds = ordered_json::array();
    for (const auto& b : cfg.boundaries) bounds.push_back(data::format_date(b));
    config["boundaries"] = bounds;
    config["phase_names"] = cfg.phase_names;
    config["compare_phases"] = cfg.compare_phases;
    config["moving_average"] = cfg.moving_average;
    config["nonparanormal"] = cfg.nonparanormal;
    config["bnet"] = bnet_json(cfg.bnet);
    config["seed"] = cfg.seed;
    const auto cs = diffnet::component_seeds(cfg.seed);
    write_manifest(dir, "real", config, ordered_json{{"chain_seeds", {cs[0], cs[1]}}},
                   {"edges.txt", "adjacency.csv", "delta_hat.csv", "theta1_mean.csv",
                    "theta2_mean.csv", "report.json"});
}

void emit_outputs(const SampleResult& result, const diffnet::BnetOptions& opt,
                  std::uint64_t seed, const std::filesystem::path& dir)
{
    ensure_dir(dir);
    const auto& names = result.columns;
    write_text(dir / "theta_mean.csv", matrix_csv(result.summary.theta_mean, names));
    write_text(dir / "partial_corr_mean.csv", matrix_csv(result.summary.rho_tilde, names));
    write_text(dir / "eh.csv", matrix_csv(result.summary.eh, names));
    std::string edges;
    for (auto [i, j] : result.adjacency.edges()) {
        edges += names[static_cast<std::size_t>(i)] + "\t" + names[static_cast<std::size_t>(j)] +
                 "\t" + format_number(result.summary.eh(i, j)) + "\n";
    }
    write_text(dir / "edges.txt", edges);
    ordered_json config = bnet_json(opt);
    config["n"] = result.n;
    config["columns"] = names;
    config["seed"] = seed;
    write_manifest(dir, "sample", config, ordered_json{{"chain_seed", seed}},
                   {"theta_mean.csv", "partial_corr_mean.csv", "eh.csv", "edges.txt"});
}

} // namespace bdnet::harness
