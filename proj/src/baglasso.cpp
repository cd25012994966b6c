#include "bdnet/baglasso.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdnet::baglasso {

void GibbsConfig::validate() const
{
    if (retained < 1) throw std::invalid_argument("GibbsConfig: retained must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("GibbsConfig: r must be > 0");
    if (!(s > 0.0)) throw std::invalid_argument("GibbsConfig: s must be > 0");
    if (!(lambda_diag > 0.0)) throw std::invalid_argument("GibbsConfig: lambda_diag must be > 0");
    if (!(theta_floor > 0.0)) throw std::invalid_argument("GibbsConfig: theta_floor must be > 0");
    if (fixed_lambda && !(*fixed_lambda > 0.0)) {
        throw std::invalid_argument("GibbsConfig: fixed_lambda must be > 0");
    }
}

SamplerState SamplerState::initial(const SymMatrix& scatter, std::size_t n, const GibbsConfig& cfg)
{
    const Index p = scatter.dim();
    if (p < 2) throw std::invalid_argument("sampler needs at least two variables");
    if (n < 1) throw std::invalid_argument("sampler needs at least one observation");

    SamplerState st;
    st.theta = SymMatrix::identity(p);
    st.tau = SymMatrix(p, 1.0);
    st.lambda = SymMatrix(p, cfg.fixed_lambda.value_or(1.0));
    for (Index i = 0; i < p; ++i) {
        st.tau.set(i, i, 0.0);
        st.lambda.set(i, i, cfg.lambda_diag);
    }
    st.scatter = scatter;
    st.n = n;
    return st;
}

ColumnConditional column_conditional(const SamplerState& state, Index col, const GibbsConfig& cfg)
{
    ColumnConditional cc;
    cc.theta_part = partition_last(state.theta, col);
    const Partition s_part = partition_last(state.scatter, col);
    const Partition t_part = partition_last(state.tau, col);

    cc.theta11_inv = invert_pd(cc.theta_part.m11);
    const double a = s_part.m22 + cfg.lambda_diag;
    cc.gamma_shape = 0.5 * static_cast<double>(state.n) + 1.0;
    cc.gamma_rate = 0.5 * a;

    SymMatrix c_inv = cc.theta11_inv * a;
    for (Index k = 0; k < c_inv.dim(); ++k) c_inv.add(k, k, 1.0 / t_part.m12(k));
    cc.c = invert_pd(c_inv, 0.0);
    cc.mean = -(cc.c.dense() * s_part.m12);
    return cc;
}

void update_column(SamplerState& state, Index col, Rng& rng, const GibbsConfig& cfg)
{
    const Index p = state.theta.dim();
    const Partition th = partition_last(state.theta, col);
    const Partition sp = partition_last(state.scatter, col);
    const Partition tp = partition_last(state.tau, col);

    const SymMatrix theta11_inv = invert_pd(th.m11);
    const double a = sp.m22 + cfg.lambda_diag;

    const double gamma = rng.gamma(0.5 * static_cast<double>(state.n) + 1.0, 0.5 * a);

    // beta ~ N(-C s21, C) with C^-1 = a Theta11^-1 + D_tau^-1 = L Lᵀ.
    SymMatrix c_inv = theta11_inv * a;
    for (Index k = 0; k < p - 1; ++k) c_inv.add(k, k, 1.0 / tp.m12(k));
    // The D_tau^-1 diagonal can dwarf the rest when theta_ij is near zero.
    const PDFactor f = cholesky_pd(c_inv, 0.0);
    Vector z(p - 1);
    for (Index k = 0; k < p - 1; ++k) z(k) = rng.normal();
    const Vector mean = -f.solve(sp.m12);
    const Vector beta =
        mean + f.lower.transpose().triangularView<Eigen::Upper>().solve(z);

    const double quad = beta.dot(theta11_inv.dense() * beta);
    for (Index k = 0; k < p - 1; ++k) state.theta.set(th.rest[static_cast<std::size_t>(k)], col, beta(k));
    state.theta.set(col, col, gamma + quad);
}

void update_hyperparameters(SamplerState& state, Rng& rng, const GibbsConfig& cfg)
{
    const Index p = state.theta.dim();
    for (Index j = 0; j < p; ++j) {
        for (Index i = j + 1; i < p; ++i) {
            const double abs_theta = std::abs(state.theta(i, j));
            double lam;
            if (cfg.fixed_lambda) {
                lam = *cfg.fixed_lambda;
            } else {
                lam = rng.gamma(1.0 + cfg.r, abs_theta + cfg.s);
            }
            state.lambda.set(i, j, lam);
            const double mu = lam / std::max(abs_theta, cfg.theta_floor);
            const double delta = rng.inverse_gaussian(mu, lam * lam);
            state.tau.set(i, j, 1.0 / delta);
        }
    }
}

void sweep(SamplerState& state, Rng& rng, const GibbsConfig& cfg)
{
    for (Index col = 0; col < state.theta.dim(); ++col) update_column(state, col, rng, cfg);
    update_hyperparameters(state, rng, cfg);
}

GibbsChain run_chain(const SymMatrix& scatter, std::size_t n, const GibbsConfig& cfg,
                     const SweepObserver& observer)
{
    cfg.validate();
    const Index p = scatter.dim();
    for (Index i = 0; i < p; ++i) {
        if (!(scatter(i, i) >= 0.0)) {
            throw std::invalid_argument("scatter matrix has a negative diagonal entry");
        }
    }

    GibbsChain chain;
    chain.config = cfg;
    chain.theta_mean = SymMatrix(p);
    chain.partial_corr_mean = SymMatrix(p);
    if (cfg.store_draws) chain.draws.reserve(cfg.retained);

    Rng rng(cfg.seed);
    SamplerState state = SamplerState::initial(scatter, n, cfg);
    const std::size_t total = cfg.burn_in + cfg.retained;
    for (std::size_t it = 0; it < total; ++it) {
        try {
            sweep(state, rng, cfg);
            // Explicit PD check so a breakdown is reported at the sweep where it happened.
            (void)cholesky_pd(state.theta);
        } catch (const NotPositiveDefinite& e) {
            throw NotPositiveDefinite(e.minor(), "Gibbs sweep " + std::to_string(it));
        }
        if (observer) observer(it, state);
        if (it < cfg.burn_in) continue;
        chain.theta_mean += state.theta;
        chain.partial_corr_mean += partial_correlation(state.theta);
        if (cfg.store_draws) chain.draws.push_back(state.theta);
    }
    const double inv = 1.0 / static_cast<double>(cfg.retained);
    chain.theta_mean *= inv;
    chain.partial_corr_mean *= inv;
    chain.retained = cfg.retained;
    chain.final_state = std::move(state);
    return chain;
}

SymMatrix posterior_mean(const GibbsChain& chain)
{
    if (!chain.draws.empty()) {
        SymMatrix acc(chain.draws.front().dim());
        for (const auto& d : chain.draws) acc += d;
        return acc * (1.0 / static_cast<double>(chain.draws.size()));
    }
    if (chain.retained == 0) throw std::invalid_argument("posterior_mean: empty chain");
    return chain.theta_mean;
}

SymMatrix posterior_partial_corr_mean(const GibbsChain& chain)
{
    if (!chain.draws.empty()) {
        SymMatrix acc(chain.draws.front().dim());
        for (const auto& d : chain.draws) acc += partial_correlation(d);
        return acc * (1.0 / static_cast<double>(chain.draws.size()));
    }
    if (chain.retained == 0) throw std::invalid_argument("posterior_partial_corr_mean: empty chain");
    return chain.partial_corr_mean;
}

SymMatrix scatter_matrix(const Matrix& x)
{
    if (x.cols() < 1) throw std::invalid_argument("scatter_matrix: no columns");
    Matrix s = Matrix::Zero(x.cols(), x.cols());
    s.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    return SymMatrix::from_lower(s);
}

} // namespace bdnet::baglasso
