#include "bdnet/dnet.hpp"

#include "bdnet/baglasso.hpp"
#include "bdnet/structures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdnet::dnet {

void IstaConfig::validate() const
{
    if (max_iters < 1) throw std::invalid_argument("IstaConfig: max_iters must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("IstaConfig: tolerance must be > 0");
    for (double g : grid) {
        if (!(g > 0.0)) throw std::invalid_argument("IstaConfig: penalties must be > 0");
    }
    if (grid.empty() && grid_size < 1) throw std::invalid_argument("IstaConfig: empty grid");
    if (!(grid_low > 0.0 && grid_low <= 1.0)) {
        throw std::invalid_argument("IstaConfig: grid_low must be in (0, 1]");
    }
}

double dnet_loss(const SymMatrix& delta, const SymMatrix& s1, const SymMatrix& s2)
{
    require_same_dim(delta, s1, "dnet_loss");
    require_same_dim(delta, s2, "dnet_loss");
    const Matrix& d = delta.dense();
    const double quad = (d.transpose() * s1.dense() * d * s2.dense()).trace();
    const double lin = (d * (s1.dense() - s2.dense())).trace();
    return 0.5 * quad - lin;
}

SymMatrix dnet_gradient(const SymMatrix& delta, const SymMatrix& s1, const SymMatrix& s2)
{
    require_same_dim(delta, s1, "dnet_gradient");
    require_same_dim(delta, s2, "dnet_gradient");
    const Matrix a = s1.dense() * delta.dense() * s2.dense();
    return SymMatrix::from_lower(0.5 * (a + a.transpose()) - (s1.dense() - s2.dense()));
}

double soft_threshold(double x, double t)
{
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double l1_norm(const SymMatrix& m) { return m.dense().cwiseAbs().sum(); }

IstaResult ista_solve(const SymMatrix& s1, const SymMatrix& s2, double lambda,
                      const IstaConfig& cfg)
{
    cfg.validate();
    require_same_dim(s1, s2, "ista_solve");
    if (!(lambda > 0.0)) throw std::invalid_argument("ista_solve: lambda must be > 0");

    const double lip = eigenvalues_sym(s1).maxCoeff() * eigenvalues_sym(s2).maxCoeff();
    if (!(lip > 0.0)) throw std::invalid_argument("ista_solve: covariance matrices are zero");
    const double step = 1.0 / lip;
    const Index p = s1.dim();

    IstaResult res;
    res.delta = SymMatrix(p);
    auto objective = [&](const SymMatrix& d) { return dnet_loss(d, s1, s2) + lambda * l1_norm(d); };
    double obj = objective(res.delta);
    if (cfg.record_objective) res.objective_trace.push_back(obj);

    SymMatrix next(p);
    for (res.iterations = 0; res.iterations < cfg.max_iters;) {
        const SymMatrix g = dnet_gradient(res.delta, s1, s2);
        for (Index j = 0; j < p; ++j) {
            for (Index i = j; i < p; ++i) {
                next.set(i, j, soft_threshold(res.delta(i, j) - step * g(i, j), step * lambda));
            }
        }
        const double next_obj = objective(next);
        ++res.iterations;
        const double drop = obj - next_obj;
        std::swap(res.delta, next);
        obj = next_obj;
        if (cfg.record_objective) res.objective_trace.push_back(obj);
        if (drop <= cfg.tolerance * std::max(1.0, std::abs(obj))) {
            res.converged = true;
            break;
        }
    }
    res.objective = obj;
    return res;
}

double kkt_residual(const SymMatrix& delta, const SymMatrix& s1, const SymMatrix& s2,
                    double lambda)
{
    const SymMatrix g = dnet_gradient(delta, s1, s2);
    double worst = 0.0;
    for (Index j = 0; j < delta.dim(); ++j) {
        for (Index i = j; i < delta.dim(); ++i) {
            const double d = delta(i, j);
            const double r = d != 0.0 ? std::abs(g(i, j) + lambda * (d > 0 ? 1.0 : -1.0))
                                      : std::max(0.0, std::abs(g(i, j)) - lambda);
            worst = std::max(worst, r);
        }
    }
    return worst;
}

std::vector<double> default_grid(const SymMatrix& s1, const SymMatrix& s2, const IstaConfig& cfg)
{
    if (!cfg.grid.empty()) return cfg.grid;
    const double top = (s1.dense() - s2.dense()).cwiseAbs().maxCoeff();
    if (!(top > 0.0)) return {1e-8};
    std::vector<double> g;
    const std::size_t m = cfg.grid_size;
    for (std::size_t k = 0; k < m; ++k) {
        const double frac = m == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(m - 1);
        g.push_back(top * std::pow(cfg.grid_low, frac));
    }
    return g;
}

std::size_t degrees_of_freedom(const SymMatrix& delta)
{
    std::size_t df = 0;
    for (Index j = 0; j < delta.dim(); ++j) {
        for (Index i = j; i < delta.dim(); ++i) df += delta(i, j) != 0.0 ? 1 : 0;
    }
    return df;
}

const SymMatrix& bic_select(SolutionPath& path, const SymMatrix& s1, const SymMatrix& s2,
                            std::size_t n1, std::size_t n2)
{
    if (path.points.empty()) throw std::invalid_argument("bic_select: empty solution path");
    const double n = static_cast<double>(n1 + n2);
    std::size_t best = 0;
    for (std::size_t k = 0; k < path.points.size(); ++k) {
        PathPoint& pt = path.points[k];
        pt.df = degrees_of_freedom(pt.delta);
        pt.bic = n * dnet_loss(pt.delta, s1, s2) + std::log(n) * static_cast<double>(pt.df);
        const PathPoint& cur = path.points[best];
        if (pt.bic < cur.bic || (pt.bic == cur.bic && pt.lambda > cur.lambda)) best = k;
    }
    path.selected = best;
    return path.points[best].delta;
}

SolutionPath solve_path(const SymMatrix& s1, const SymMatrix& s2, std::size_t n1, std::size_t n2,
                        const IstaConfig& cfg)
{
    SolutionPath path;
    for (double lambda : default_grid(s1, s2, cfg)) {
        const IstaResult r = ista_solve(s1, s2, lambda, cfg);
        PathPoint pt;
        pt.lambda = lambda;
        pt.delta = r.delta;
        pt.objective = r.objective;
        pt.iterations = r.iterations;
        pt.converged = r.converged;
        path.points.push_back(std::move(pt));
    }
    bic_select(path, s1, s2, n1, n2);
    return path;
}

DnetEstimate estimate_dnet(const Matrix& x1, const Matrix& x2, const IstaConfig& cfg)
{
    if (x1.cols() != x2.cols()) throw DimensionMismatch("estimate_dnet: samples differ in width");
    const auto n1 = static_cast<std::size_t>(x1.rows());
    const auto n2 = static_cast<std::size_t>(x2.rows());
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("estimate_dnet: need at least two rows");
    const SymMatrix s1 = baglasso::scatter_matrix(x1) * (1.0 / static_cast<double>(n1));
    const SymMatrix s2 = baglasso::scatter_matrix(x2) * (1.0 / static_cast<double>(n2));

    DnetEstimate est;
    est.path = solve_path(s1, s2, n1, n2, cfg);
    const PathPoint& sel = est.path.points[est.path.selected];
    est.delta_hat = sel.delta;
    est.lambda = sel.lambda;
    est.adjacency = synth::support(est.delta_hat, 0.0);
    return est;
}

} // namespace bdnet::dnet
