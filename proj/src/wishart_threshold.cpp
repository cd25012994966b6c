#include "bdnet/wishart_threshold.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdnet::wishart {

void WishartSpec::validate() const
{
    if (scale.dim() < 1) throw std::invalid_argument("WishartSpec: empty scale matrix");
    if (!(dof >= static_cast<double>(scale.dim()))) {
        throw std::invalid_argument("WishartSpec: dof " + std::to_string(dof) +
                                    " below dimension " + std::to_string(scale.dim()));
    }
    (void)cholesky_pd(scale);
}

namespace {

WishartSpec conjugate_posterior(const SymMatrix& scatter, std::size_t n, double ridge)
{
    SymMatrix m = scatter;
    for (Index i = 0; i < m.dim(); ++i) m.add(i, i, ridge);
    return {3.0 + static_cast<double>(n), invert_pd(m)};
}

} // namespace

WishartSpec posterior_h(const SymMatrix& scatter, std::size_t n, double eps)
{
    if (!(eps > 0.0)) throw std::invalid_argument("posterior_h: epsilon must be > 0");
    return conjugate_posterior(scatter, n, eps);
}

WishartSpec posterior_g(const SymMatrix& scatter, std::size_t n)
{
    return conjugate_posterior(scatter, n, 1.0);
}

namespace {

SymMatrix bartlett_draw(const Matrix& chol_scale, double dof, Rng& rng)
{
    const Index p = chol_scale.rows();
    Matrix a = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) {
        a(i, i) = std::sqrt(rng.chi_square(dof - static_cast<double>(i)));
        for (Index j = 0; j < i; ++j) a(i, j) = rng.normal();
    }
    const Matrix la = chol_scale * a.triangularView<Eigen::Lower>();
    return SymMatrix::from_lower(la * la.transpose());
}

} // namespace

SymMatrix sample_wishart(const WishartSpec& spec, Rng& rng)
{
    spec.validate();
    return bartlett_draw(cholesky_pd(spec.scale).lower, spec.dof, rng);
}

std::vector<SymMatrix> sample_wishart(const WishartSpec& spec, std::size_t count, Rng& rng)
{
    spec.validate();
    const Matrix l = cholesky_pd(spec.scale).lower;
    std::vector<SymMatrix> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(bartlett_draw(l, spec.dof, rng));
    return out;
}

SymMatrix posterior_partial_corr_mean(const WishartSpec& spec, std::size_t count, Rng& rng)
{
    if (count < 1) throw std::invalid_argument("posterior_partial_corr_mean: count must be >= 1");
    spec.validate();
    const Matrix l = cholesky_pd(spec.scale).lower;
    SymMatrix acc(spec.scale.dim());
    for (std::size_t k = 0; k < count; ++k) {
        acc += partial_correlation(bartlett_draw(l, spec.dof, rng));
    }
    acc *= 1.0 / static_cast<double>(count);
    return acc;
}

AdjacencyMatrix edge_rule_mean(const SymMatrix& eh, double eta)
{
    AdjacencyMatrix a(eh.dim());
    for (Index i = 0; i < eh.dim(); ++i) {
        for (Index j = i + 1; j < eh.dim(); ++j) a.set(i, j, std::abs(eh(i, j)) > eta);
    }
    return a;
}

AdjacencyMatrix edge_rule_ratio(const SymMatrix& rho_tilde, const SymMatrix& eg, double eta)
{
    require_same_dim(rho_tilde, eg, "edge_rule_ratio");
    AdjacencyMatrix a(eg.dim());
    for (Index i = 0; i < eg.dim(); ++i) {
        for (Index j = i + 1; j < eg.dim(); ++j) {
            const double den = std::max(std::abs(eg(i, j)), kRatioFloor);
            a.set(i, j, std::abs(rho_tilde(i, j)) / den > eta);
        }
    }
    return a;
}

std::vector<double> default_grid()
{
    std::vector<double> g;
    for (int k = 0; k <= 20; ++k) g.push_back(0.2 + 0.02 * k);
    return g;
}

std::size_t best_index(const std::vector<metrics::Score>& scores)
{
    std::size_t best = scores.size();
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (!scores[k]) continue;
        if (best == scores.size() || *scores[k] > *scores[best]) best = k;
    }
    return best;
}

ThresholdReport threshold_sweep(const AdjacencyMatrix& truth, const EdgeRule& rule,
                                const std::vector<double>& grid)
{
    if (grid.empty()) throw std::invalid_argument("threshold_sweep: empty grid");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) {
            throw std::invalid_argument("threshold_sweep: grid must be strictly increasing");
        }
    }
    ThresholdReport rep;
    rep.grid = grid;
    const double true_edges = static_cast<double>(truth.edge_count());
    for (double eta : grid) {
        const AdjacencyMatrix est = rule(eta);
        rep.sparsity_error.push_back(std::abs(static_cast<double>(est.edge_count()) - true_edges));
        rep.mcc.push_back(metrics::mcc(metrics::confusion(est, truth)));
    }
    const std::size_t b = best_index(rep.mcc);
    rep.best_eta = b < grid.size() ? grid[b] : grid.front();
    rep.best_mcc = b < grid.size() ? rep.mcc[b] : std::nullopt;
    return rep;
}

} // namespace bdnet::wishart
