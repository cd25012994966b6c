#pragma once

#include "bdnet/matrix_core.hpp"
#include "bdnet/random.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace bdnet::baglasso {

/// Settings for the block Gibbs sampler of the Bayesian adaptive graphical
/// lasso. Defaults are the full-length run (5000 burn-in, 10000 retained).
struct GibbsConfig {
    std::size_t burn_in = 5000;
    std::size_t retained = 10000;
    double r = 1e-2;            ///< gamma shape hyperparameter of each lambda_ij
    double s = 1e-6;            ///< gamma rate hyperparameter of each lambda_ij
    double lambda_diag = 1.0;   ///< fixed penalty on the diagonal
    std::uint64_t seed = 0;
    double theta_floor = 1e-12; ///< lower bound on |theta_ij| inside the IG mean

    /// When set, every off-diagonal lambda_ij is held at this value instead of
    /// being resampled (the non-adaptive Bayesian graphical lasso).
    std::optional<double> fixed_lambda;

    /// Keep every retained draw in GibbsChain::draws. Running means are
    /// always accumulated.
    bool store_draws = true;

    void validate() const;
};

/// Current sampler position. Single owner; the update functions mutate it.
struct SamplerState {
    SymMatrix theta;   ///< current precision matrix, PD
    SymMatrix tau;     ///< latent scales, zero diagonal
    SymMatrix lambda;  ///< per-entry penalties; diagonal holds lambda_diag
    SymMatrix scatter; ///< S = XᵀX
    std::size_t n = 0;

    /// Theta = I, tau_ij = 1, lambda_ij = 1 (or the fixed lambda).
    static SamplerState initial(const SymMatrix& scatter, std::size_t n, const GibbsConfig& cfg);
};

/// Parameters of the (beta, gamma) conditional for one column.
struct ColumnConditional {
    SymMatrix theta11_inv;
    SymMatrix c;       ///< covariance of beta
    Vector mean;       ///< -C s21
    double gamma_shape = 0.0;
    double gamma_rate = 0.0;
    Partition theta_part;
};

ColumnConditional column_conditional(const SamplerState& state, Index col, const GibbsConfig& cfg);

/// Redraws row/column `col` of theta. Only that row and column change.
void update_column(SamplerState& state, Index col, Rng& rng, const GibbsConfig& cfg);

/// Redraws every lambda_ij (unless fixed) and then every tau_ij.
void update_hyperparameters(SamplerState& state, Rng& rng, const GibbsConfig& cfg);

/// One full sweep: every column in order, then the hyperparameters.
void sweep(SamplerState& state, Rng& rng, const GibbsConfig& cfg);

struct GibbsChain {
    std::vector<SymMatrix> draws; ///< retained theta draws (empty unless store_draws)
    SymMatrix theta_mean;
    SymMatrix partial_corr_mean;
    std::size_t retained = 0;
    GibbsConfig config;
    SamplerState final_state;
};

/// Called after every full sweep with the zero-based sweep index.
using SweepObserver = std::function<void(std::size_t, const SamplerState&)>;

GibbsChain run_chain(const SymMatrix& scatter, std::size_t n, const GibbsConfig& cfg,
                     const SweepObserver& observer = {});

/// Entrywise average of the retained draws.
SymMatrix posterior_mean(const GibbsChain& chain);

/// Entrywise average of partial_correlation over the retained draws.
SymMatrix posterior_partial_corr_mean(const GibbsChain& chain);

/// XᵀX for an n×p data matrix.
SymMatrix scatter_matrix(const Matrix& x);

} // namespace bdnet::baglasso
