#pragma once

#include "bdnet/adjacency.hpp"
#include "bdnet/matrix_core.hpp"
#include "bdnet/metrics.hpp"
#include "bdnet/random.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace bdnet::wishart {

/// Wishart W(dof, scale); the mean is dof * scale.
struct WishartSpec {
    double dof = 0.0;
    SymMatrix scale;

    void validate() const;
};

inline constexpr double kDefaultEpsilon = 1e-3;
inline constexpr std::size_t kDefaultDraws = 1000;

/// Posterior under the W(3, eps I) prior: W(3 + n, (S + eps I)^-1).
WishartSpec posterior_h(const SymMatrix& scatter, std::size_t n, double eps = kDefaultEpsilon);

/// Posterior under the W(3, I) prior: W(3 + n, (S + I)^-1).
WishartSpec posterior_g(const SymMatrix& scatter, std::size_t n);

/// Bartlett decomposition: W = L A Aᵀ Lᵀ, L = chol(scale), A lower triangular
/// with A_ii^2 ~ chi2(dof - i) and standard normal below the diagonal.
SymMatrix sample_wishart(const WishartSpec& spec, Rng& rng);
std::vector<SymMatrix> sample_wishart(const WishartSpec& spec, std::size_t count, Rng& rng);

/// Monte Carlo mean of the partial correlation matrix under `spec`.
SymMatrix posterior_partial_corr_mean(const WishartSpec& spec, std::size_t count, Rng& rng);

/// Edge iff |Eh_ij| > eta.
AdjacencyMatrix edge_rule_mean(const SymMatrix& eh, double eta);

inline constexpr double kRatioFloor = 1e-8;

/// Edge iff |rho_tilde_ij| / max(|Eg_ij|, 1e-8) > eta.
AdjacencyMatrix edge_rule_ratio(const SymMatrix& rho_tilde, const SymMatrix& eg, double eta);

struct ThresholdReport {
    std::vector<double> grid;
    std::vector<double> sparsity_error;      ///< |#edges(est) - #edges(truth)|
    std::vector<metrics::Score> mcc;
    double best_eta = 0.0;
    metrics::Score best_mcc;
};

/// 0.20, 0.22, ..., 0.60.
std::vector<double> default_grid();

using EdgeRule = std::function<AdjacencyMatrix(double eta)>;

/// Scores `rule` at each grid value. best_eta maximizes MCC over the
/// available scores, ties going to the smallest eta.
ThresholdReport threshold_sweep(const AdjacencyMatrix& truth, const EdgeRule& rule,
                                const std::vector<double>& grid);

/// Index of the largest available score, ties to the smallest index.
/// Returns grid-size when no score is available.
std::size_t best_index(const std::vector<metrics::Score>& scores);

} // namespace bdnet::wishart
