// bdnet: command line front end for the differential network experiments.

#include "bdnet/config_file.hpp"
#include "bdnet/harness.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace bdnet;

enum ExitCode {
    kOk = 0,
    kUsage = 2,
    kConfig = 3,
    kData = 4,
    kNumerical = 5,
    kOutput = 6,
    kInternal = 10,
};

// Flag values; an empty optional means "not given on the command line".
struct Flags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
    bool paper_scale = false;

    std::optional<std::string> structures;
    std::optional<std::string> dims;
    std::optional<std::string> sample_sizes;
    std::optional<std::size_t> replications;
    std::optional<std::string> estimators;
    std::optional<std::size_t> burn_in;
    std::optional<std::size_t> retained;
    std::optional<double> eta;
    std::optional<std::string> mode;
    std::optional<std::string> grid;

    std::optional<std::string> csv;
    std::optional<std::string> date_column;
    std::optional<std::string> columns;
    std::optional<std::string> class_column;
    std::optional<std::string> classes;
    std::optional<std::string> boundaries;
    std::optional<std::string> phase_names;
    std::optional<std::string> compare;
    std::optional<std::size_t> moving_average;
    std::optional<bool> nonparanormal;
};

template <class T>
std::vector<T> numbers(const std::string& text)
{
    std::vector<T> out;
    for (const auto& item : config::split_list(text)) {
        out.push_back(static_cast<T>(std::stod(item)));
    }
    return out;
}

std::array<std::string, 2> pair_of(const std::string& what, const std::string& text)
{
    auto items = config::split_list(text);
    if (items.size() != 2) throw config::ConfigError(what + " needs exactly two comma separated values");
    return {items[0], items[1]};
}

config::ConfigFile resolve(const Flags& f)
{
    config::ConfigFile cf;
    if (f.config) cf = config::load_config(*f.config);

    auto& e = cf.experiment;
    if (f.paper_scale || cf.run.paper_scale) e.apply_paper_scale();
    if (f.structures) {
        e.structures.clear();
        for (const auto& s : config::split_list(*f.structures)) e.structures.push_back(synth::parse_structure(s));
    }
    if (f.dims) e.dims = numbers<Index>(*f.dims);
    if (f.sample_sizes) e.sample_sizes = numbers<std::size_t>(*f.sample_sizes);
    if (f.replications) e.replications = *f.replications;
    if (f.estimators) {
        e.estimators.clear();
        for (const auto& s : config::split_list(*f.estimators)) e.estimators.push_back(harness::parse_estimator(s));
    }
    if (f.burn_in) e.gibbs.burn_in = *f.burn_in;
    if (f.retained) e.gibbs.retained = *f.retained;
    if (f.eta) e.eta = *f.eta;
    if (f.mode) e.mode = diffnet::parse_combine_mode(*f.mode);
    if (f.grid) e.sweep_grid = numbers<double>(*f.grid);

    if (f.seed) cf.run.seed = f.seed;
    if (f.threads) cf.run.threads = f.threads;
    if (f.out) cf.run.out = f.out;
    e.seed = cf.run.seed.value_or(0);
    e.threads = cf.run.threads.value_or(1);

    auto& r = cf.real;
    if (f.csv) r.csv = *f.csv;
    if (f.date_column) r.csv_options.date_column = *f.date_column;
    if (f.columns) r.csv_options.columns = config::split_list(*f.columns);
    if (f.class_column) r.class_column = *f.class_column;
    if (f.classes) r.class_values = pair_of("--classes", *f.classes);
    if (f.boundaries) {
        r.boundaries.clear();
        for (const auto& d : config::split_list(*f.boundaries)) r.boundaries.push_back(data::parse_date(d));
    }
    if (f.phase_names) r.phase_names = config::split_list(*f.phase_names);
    if (f.compare) r.compare_phases = pair_of("--compare", *f.compare);
    if (f.moving_average) r.moving_average = *f.moving_average;
    if (f.nonparanormal) r.nonparanormal = *f.nonparanormal;
    r.bnet = e.bnet_options();
    r.seed = e.seed;
    return cf;
}

std::string out_dir(const config::ConfigFile& cf)
{
    return cf.run.out.value_or("bdnet-out");
}

void add_experiment_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--structures", f.structures, "Comma separated structure names or numbers 1-9");
    sub->add_option("--dims", f.dims, "Comma separated dimensions");
    sub->add_option("--sample-sizes", f.sample_sizes, "Comma separated sample sizes, one per dimension");
    sub->add_option("--replications", f.replications, "Replications per structure and dimension");
}

void add_bnet_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--burn-in", f.burn_in, "Gibbs burn-in sweeps");
    sub->add_option("--retained", f.retained, "Gibbs sweeps kept after burn-in");
    sub->add_option("--eta", f.eta, "Edge threshold on posterior partial correlations");
    sub->add_option("--mode", f.mode, "How the two graphs combine: difference, xor or union");
    sub->add_flag("--paper-scale", f.paper_scale, "40 replications, 5000 burn-in, 10000 retained");
}

void add_csv_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--csv", f.csv, "Input CSV file");
    sub->add_option("--date-column", f.date_column, "Name of the ISO date column");
    sub->add_option("--columns", f.columns, "Numeric columns to use, comma separated");
    sub->add_option("--nonparanormal", f.nonparanormal, "Apply the nonparanormal transform (true/false)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bayesian differential network estimation"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--config", f.config, "INI config file; flags override it");
    app.add_option("--seed", f.seed, "Master seed");
    app.add_option("--out", f.out, "Output directory");
    app.add_option("--threads", f.threads, "Worker threads (does not change any output)");

    auto* synthetic = app.add_subcommand("synthetic", "Loss and classification tables on the synthetic structures");
    add_experiment_flags(synthetic, f);
    add_bnet_flags(synthetic, f);
    synthetic->add_option("--estimators", f.estimators, "bnet, dnet or both");

    auto* sweep = app.add_subcommand("sweep", "Threshold sweep for both edge rules");
    add_experiment_flags(sweep, f);
    add_bnet_flags(sweep, f);
    sweep->add_option("--grid", f.grid, "Comma separated thresholds, increasing");

    auto* real = app.add_subcommand("real", "Differential network between two classes or two phases of a CSV");
    add_csv_flags(real, f);
    add_bnet_flags(real, f);
    real->add_option("--class-column", f.class_column, "Column that labels the two classes");
    real->add_option("--classes", f.classes, "The two class values, comma separated");
    real->add_option("--boundaries", f.boundaries, "Phase boundary dates, comma separated");
    real->add_option("--phase-names", f.phase_names, "Names of the phases, comma separated");
    real->add_option("--compare", f.compare, "The two phases to compare, comma separated");
    real->add_option("--moving-average", f.moving_average, "Trailing moving-average window (0 disables)");

    auto* sample = app.add_subcommand("sample", "Run one Gibbs chain on one CSV");
    add_csv_flags(sample, f);
    add_bnet_flags(sample, f);

    for (auto* sub : {synthetic, sweep, real, sample}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const config::ConfigFile cf = resolve(f);
        const std::string dir = out_dir(cf);
        if (synthetic->parsed()) {
            const auto table = harness::run_synthetic_experiment(cf.experiment);
            harness::emit_outputs(table, cf.experiment, dir);
            std::cout << "wrote " << table.rows.size() << " rows to " << dir << "/results.csv\n";
        } else if (sweep->parsed()) {
            const auto sweeps = harness::run_threshold_study(cf.experiment);
            harness::emit_outputs(sweeps, cf.experiment, dir);
            for (const auto& s : sweeps) {
                std::cout << synth::to_string(s.structure) << " p=" << s.dim << " "
                          << harness::to_string(s.rule) << ": best eta "
                          << harness::format_number(s.best_eta) << ", median MCC "
                          << harness::format_score(s.best_mcc) << "\n";
            }
        } else if (real->parsed()) {
            if (cf.real.csv.empty()) throw config::ConfigError("real: no --csv given");
            const auto res = harness::run_real_analysis(cf.real);
            harness::emit_outputs(res, cf.real, dir);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << res.network.adjacency.edge_count() << " edges, Box's M p-value "
                      << harness::format_number(res.box_m.p_value) << "; wrote " << dir << "\n";
        } else if (sample->parsed()) {
            if (cf.real.csv.empty()) throw config::ConfigError("sample: no --csv given");
            const auto ds = data::read_csv(cf.real.csv, cf.real.csv_options);
            Matrix x = ds.rows;
            if (f.nonparanormal.value_or(false)) x = data::nonparanormal_transform(x, ds.columns);
            const auto opt = cf.experiment.bnet_options();
            const auto res = harness::analyze_single(x, ds.columns, opt, cf.experiment.seed);
            harness::emit_outputs(res, opt, cf.experiment.seed, dir);
            std::cout << res.adjacency.edge_count() << " edges from " << res.n << " rows; wrote "
                      << dir << "\n";
        }
    } catch (const config::ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kConfig;
    } catch (const data::DataError& e) {
        std::cerr << "error (data): " << e.what() << "\n";
        return kData;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "error (numerical): " << e.what() << "\n";
        return kNumerical;
    } catch (const harness::OutputError& e) {
        std::cerr << "error (output): " << e.what() << "\n";
        return kOutput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
