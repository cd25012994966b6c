#pragma once

#include "bdnet/harness.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bdnet::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Settings that live outside the experiment itself.
struct RunSettings {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::string> out;
    bool paper_scale = false;
};

/// Everything one config file can set. Sections:
///   [run]        seed, threads, out, paper_scale
///   [experiment] structures, dims, sample_sizes, replications, estimators,
///                eta, mode, epsilon, wishart_draws, sweep_grid
///   [gibbs]      burn_in, retained, r, s, lambda_diag, theta_floor, fixed_lambda
///   [ista]       max_iters, tolerance, grid, grid_size, grid_low
///   [real]       csv, date_column, columns, class_column, class_values,
///                boundaries, phase_names, compare_phases, moving_average,
///                nonparanormal
/// Lists are comma separated. Unknown sections or keys are errors.
struct ConfigFile {
    RunSettings run;
    harness::ExperimentConfig experiment;
    harness::RealAnalysisConfig real;
};

/// Applies the INI text on top of `base`.
ConfigFile parse_config(std::string_view text, ConfigFile base = {});
ConfigFile load_config(const std::filesystem::path& path, ConfigFile base = {});

std::vector<std::string> split_list(std::string_view text);

} // namespace bdnet::config
