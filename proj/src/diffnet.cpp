#include "bdnet/diffnet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdnet::diffnet {

std::string_view to_string(CombineMode mode)
{
    switch (mode) {
    case CombineMode::Difference: return "difference";
    case CombineMode::Xor: return "xor";
    case CombineMode::Union: return "union";
    }
    return "?";
}

CombineMode parse_combine_mode(std::string_view name)
{
    if (name == "difference") return CombineMode::Difference;
    if (name == "xor") return CombineMode::Xor;
    if (name == "union") return CombineMode::Union;
    throw std::invalid_argument("unknown combine mode '" + std::string(name) + "'");
}

std::array<std::uint64_t, 2> component_seeds(std::uint64_t seed) { return {seed, seed + 1}; }

ComponentSummaries summarize_component(const Matrix& x, const BnetOptions& opt,
                                       std::uint64_t seed)
{
    if (x.rows() < 2) throw std::invalid_argument("each sample needs at least two rows");
    const SymMatrix s = baglasso::scatter_matrix(x);
    const auto n = static_cast<std::size_t>(x.rows());

    baglasso::GibbsConfig cfg = opt.gibbs;
    cfg.seed = seed;
    cfg.store_draws = false;
    const baglasso::GibbsChain chain = baglasso::run_chain(s, n, cfg);

    ComponentSummaries c;
    c.theta_mean = baglasso::posterior_mean(chain);
    c.rho_tilde = baglasso::posterior_partial_corr_mean(chain);

    Rng rng(derive_seed(seed, {0x57495348ULL}));
    c.eh = wishart::posterior_partial_corr_mean(wishart::posterior_h(s, n, opt.epsilon),
                                                opt.wishart_draws, rng);
    if (opt.with_eg) {
        c.eg = wishart::posterior_partial_corr_mean(wishart::posterior_g(s, n),
                                                    opt.wishart_draws, rng);
    }
    return c;
}

DifferentialNetwork estimate_bnet(const Matrix& x1, const Matrix& x2, const BnetOptions& opt)
{
    return estimate_bnet(x1, x2, opt, component_seeds(opt.gibbs.seed));
}

DifferentialNetwork estimate_bnet(const Matrix& x1, const Matrix& x2, const BnetOptions& opt,
                                  std::array<std::uint64_t, 2> seeds)
{
    if (x1.cols() != x2.cols()) {
        throw DimensionMismatch("samples have " + std::to_string(x1.cols()) + " and " +
                                std::to_string(x2.cols()) + " variables");
    }
    DifferentialNetwork dn;
    dn.components[0] = summarize_component(x1, opt, seeds[0]);
    dn.components[1] = summarize_component(x2, opt, seeds[1]);
    dn.delta_hat = dn.components[1].theta_mean - dn.components[0].theta_mean;
    dn.eta = opt.eta;
    dn.mode = opt.mode;
    dn.adjacency =
        dn_adjacency({dn.components[0].eh, dn.components[1].eh}, opt.eta, opt.mode);
    return dn;
}

namespace {

template <class Score>
AdjacencyMatrix combine(Index p, double eta, CombineMode mode, Score score)
{
    AdjacencyMatrix a(p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            const auto [s1, s2] = score(i, j);
            bool edge = false;
            switch (mode) {
            case CombineMode::Difference: edge = std::abs(s2 - s1) > eta; break;
            case CombineMode::Xor: edge = (std::abs(s1) > eta) != (std::abs(s2) > eta); break;
            case CombineMode::Union: edge = std::abs(s1) > eta || std::abs(s2) > eta; break;
            }
            a.set(i, j, edge);
        }
    }
    return a;
}

} // namespace

AdjacencyMatrix dn_adjacency(const std::array<SymMatrix, 2>& partials, double eta,
                             CombineMode mode)
{
    require_same_dim(partials[0], partials[1], "dn_adjacency");
    return combine(partials[0].dim(), eta, mode, [&](Index i, Index j) {
        return std::pair{partials[0](i, j), partials[1](i, j)};
    });
}

AdjacencyMatrix dn_adjacency_ratio(const std::array<SymMatrix, 2>& rho_tilde,
                                   const std::array<SymMatrix, 2>& eg, double eta,
                                   CombineMode mode)
{
    require_same_dim(rho_tilde[0], rho_tilde[1], "dn_adjacency_ratio");
    require_same_dim(rho_tilde[0], eg[0], "dn_adjacency_ratio");
    require_same_dim(eg[0], eg[1], "dn_adjacency_ratio");
    auto ratio = [&](int k, Index i, Index j) {
        return rho_tilde[k](i, j) / std::max(std::abs(eg[k](i, j)), wishart::kRatioFloor);
    };
    return combine(eg[0].dim(), eta, mode, [&](Index i, Index j) {
        return std::pair{ratio(0, i, j), ratio(1, i, j)};
    });
}

} // namespace bdnet::diffnet
