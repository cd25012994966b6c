#include "bdnet/config_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bdnet::config {

namespace pt = boost::property_tree;

std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.remove_prefix(1);
        while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.remove_suffix(1);
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T v{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("'" + key + "': cannot parse '" + text + "' as a number");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + text + "'");
}

template <class T>
std::vector<T> parse_numbers(const std::string& key, const std::string& text)
{
    std::vector<T> out;
    for (const auto& item : split_list(text)) out.push_back(parse_number<T>(key, item));
    return out;
}

template <class T, std::size_t N>
std::array<T, N> parse_pair(const std::string& key, const std::string& text)
{
    auto items = split_list(text);
    if (items.size() != N) {
        throw ConfigError("'" + key + "': expected " + std::to_string(N) + " values");
    }
    std::array<T, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = items[i];
    return out;
}

using Setter = std::function<void(ConfigFile&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters()
{
    using K = const std::string&;
    static const std::map<std::string, Setter> table{
        {"run.seed", [](ConfigFile& c, K k, K v) { c.run.seed = parse_number<std::uint64_t>(k, v); }},
        {"run.threads", [](ConfigFile& c, K k, K v) { c.run.threads = parse_number<std::size_t>(k, v); }},
        {"run.out", [](ConfigFile& c, K, K v) { c.run.out = v; }},
        {"run.paper_scale", [](ConfigFile& c, K k, K v) { c.run.paper_scale = parse_bool(k, v); }},

        {"experiment.structures", [](ConfigFile& c, K, K v) {
             c.experiment.structures.clear();
             for (const auto& s : split_list(v)) c.experiment.structures.push_back(synth::parse_structure(s));
         }},
        {"experiment.dims", [](ConfigFile& c, K k, K v) { c.experiment.dims = parse_numbers<Index>(k, v); }},
        {"experiment.sample_sizes", [](ConfigFile& c, K k, K v) {
             c.experiment.sample_sizes = parse_numbers<std::size_t>(k, v);
         }},
        {"experiment.replications", [](ConfigFile& c, K k, K v) {
             c.experiment.replications = parse_number<std::size_t>(k, v);
         }},
        {"experiment.estimators", [](ConfigFile& c, K, K v) {
             c.experiment.estimators.clear();
             for (const auto& s : split_list(v)) c.experiment.estimators.push_back(harness::parse_estimator(s));
         }},
        {"experiment.eta", [](ConfigFile& c, K k, K v) { c.experiment.eta = parse_number<double>(k, v); }},
        {"experiment.mode", [](ConfigFile& c, K, K v) { c.experiment.mode = diffnet::parse_combine_mode(v); }},
        {"experiment.epsilon", [](ConfigFile& c, K k, K v) { c.experiment.epsilon = parse_number<double>(k, v); }},
        {"experiment.wishart_draws", [](ConfigFile& c, K k, K v) {
             c.experiment.wishart_draws = parse_number<std::size_t>(k, v);
         }},
        {"experiment.sweep_grid", [](ConfigFile& c, K k, K v) {
             c.experiment.sweep_grid = parse_numbers<double>(k, v);
         }},

        {"gibbs.burn_in", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.burn_in = parse_number<std::size_t>(k, v); }},
        {"gibbs.retained", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.retained = parse_number<std::size_t>(k, v); }},
        {"gibbs.r", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.r = parse_number<double>(k, v); }},
        {"gibbs.s", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.s = parse_number<double>(k, v); }},
        {"gibbs.lambda_diag", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.lambda_diag = parse_number<double>(k, v); }},
        {"gibbs.theta_floor", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.theta_floor = parse_number<double>(k, v); }},
        {"gibbs.fixed_lambda", [](ConfigFile& c, K k, K v) { c.experiment.gibbs.fixed_lambda = parse_number<double>(k, v); }},

        {"ista.max_iters", [](ConfigFile& c, K k, K v) { c.experiment.ista.max_iters = parse_number<std::size_t>(k, v); }},
        {"ista.tolerance", [](ConfigFile& c, K k, K v) { c.experiment.ista.tolerance = parse_number<double>(k, v); }},
        {"ista.grid", [](ConfigFile& c, K k, K v) { c.experiment.ista.grid = parse_numbers<double>(k, v); }},
        {"ista.grid_size", [](ConfigFile& c, K k, K v) { c.experiment.ista.grid_size = parse_number<std::size_t>(k, v); }},
        {"ista.grid_low", [](ConfigFile& c, K k, K v) { c.experiment.ista.grid_low = parse_number<double>(k, v); }},

        {"real.csv", [](ConfigFile& c, K, K v) { c.real.csv = v; }},
        {"real.date_column", [](ConfigFile& c, K, K v) { c.real.csv_options.date_column = v; }},
        {"real.columns", [](ConfigFile& c, K, K v) { c.real.csv_options.columns = split_list(v); }},
        {"real.class_column", [](ConfigFile& c, K, K v) { c.real.class_column = v; }},
        {"real.class_values", [](ConfigFile& c, K k, K v) { c.real.class_values = parse_pair<std::string, 2>(k, v); }},
        {"real.boundaries", [](ConfigFile& c, K, K v) {
             c.real.boundaries.clear();
             for (const auto& d : split_list(v)) c.real.boundaries.push_back(data::parse_date(d));
         }},
        {"real.phase_names", [](ConfigFile& c, K, K v) { c.real.phase_names = split_list(v); }},
        {"real.compare_phases", [](ConfigFile& c, K k, K v) { c.real.compare_phases = parse_pair<std::string, 2>(k, v); }},
        {"real.moving_average", [](ConfigFile& c, K k, K v) { c.real.moving_average = parse_number<std::size_t>(k, v); }},
        {"real.nonparanormal", [](ConfigFile& c, K k, K v) { c.real.nonparanormal = parse_bool(k, v); }},
    };
    return table;
}

} // namespace

ConfigFile parse_config(std::string_view text, ConfigFile base)
{
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ConfigError("key '" + section + "' must be inside a section");
        }
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            auto it = setters().find(full);
            if (it == setters().end()) throw ConfigError("unknown config key '" + full + "'");
            try {
                it->second(base, full, value.get_value<std::string>());
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw ConfigError("'" + full + "': " + e.what());
            }
        }
    }
    return base;
}

ConfigFile load_config(const std::filesystem::path& path, ConfigFile base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

} // namespace bdnet::config
