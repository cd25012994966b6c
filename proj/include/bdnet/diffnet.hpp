#pragma once

#include "bdnet/adjacency.hpp"
#include "bdnet/baglasso.hpp"
#include "bdnet/matrix_core.hpp"
#include "bdnet/wishart_threshold.hpp"

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>

namespace bdnet::diffnet {

/// How the two per-sample partial correlation summaries become one graph.
///  - difference: edge iff |E2_ij - E1_ij| > eta
///  - xor:        edge iff exactly one component clears eta
///  - union:      edge iff either component clears eta
enum class CombineMode { Difference, Xor, Union };

std::string_view to_string(CombineMode mode);
CombineMode parse_combine_mode(std::string_view name);

struct ComponentSummaries {
    SymMatrix theta_mean;   ///< BAGLASSO posterior mean
    SymMatrix rho_tilde;    ///< BAGLASSO posterior mean partial correlation
    SymMatrix eh;           ///< Wishart W(3, eps I) posterior mean partial correlation
    SymMatrix eg;           ///< Wishart W(3, I) posterior mean partial correlation
};

struct DifferentialNetwork {
    SymMatrix delta_hat;
    std::array<ComponentSummaries, 2> components;
    AdjacencyMatrix adjacency;
    double eta = 0.0;
    CombineMode mode = CombineMode::Union;
};

struct BnetOptions {
    baglasso::GibbsConfig gibbs;
    double eta = 0.3;
    CombineMode mode = CombineMode::Union;
    double epsilon = wishart::kDefaultEpsilon;
    std::size_t wishart_draws = wishart::kDefaultDraws;
    /// Also estimate E_g (needed only by the ratio rule).
    bool with_eg = true;
};

/// Seeds used for the two component chains: seed and seed + 1.
std::array<std::uint64_t, 2> component_seeds(std::uint64_t seed);

/// Summaries for one sample; `seed` drives both the chain and the Wishart draws.
ComponentSummaries summarize_component(const Matrix& x, const BnetOptions& opt,
                                       std::uint64_t seed);

/// Runs the two component chains with seeds (seed, seed + 1) and returns
/// delta_hat = mean2 - mean1 with its thresholded graph.
DifferentialNetwork estimate_bnet(const Matrix& x1, const Matrix& x2, const BnetOptions& opt);

/// Same, with explicit per-component seeds.
DifferentialNetwork estimate_bnet(const Matrix& x1, const Matrix& x2, const BnetOptions& opt,
                                  std::array<std::uint64_t, 2> seeds);

/// Combination of the mean rule applied to each component's E_h.
AdjacencyMatrix dn_adjacency(const std::array<SymMatrix, 2>& partials, double eta,
                             CombineMode mode);

/// Same combinations with the ratio rule. In difference mode the signed
/// ratios rho_tilde / max(|E_g|, floor) are differenced.
AdjacencyMatrix dn_adjacency_ratio(const std::array<SymMatrix, 2>& rho_tilde,
                                   const std::array<SymMatrix, 2>& eg, double eta,
                                   CombineMode mode);

} // namespace bdnet::diffnet
