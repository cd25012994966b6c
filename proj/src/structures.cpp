#include "bdnet/structures.hpp"

#include "bdnet/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bdnet::synth {

namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "ar1", "ar2", "sparse80", "sparse40", "scalefree", "band", "cluster", "star", "circle"};

} // namespace

std::string_view to_string(StructureKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

StructureKind parse_structure(std::string_view name)
{
    for (std::size_t k = 0; k < kNames.size(); ++k) {
        if (kNames[k] == name) return static_cast<StructureKind>(k);
    }
    // Also accept the structure number.
    if (name.size() == 1 && name[0] >= '1' && name[0] <= '9') {
        return static_cast<StructureKind>(name[0] - '1');
    }
    throw std::invalid_argument("unknown structure '" + std::string(name) + "'");
}

int structure_number(StructureKind kind) { return static_cast<int>(kind) + 1; }

bool is_random(StructureKind kind)
{
    return kind == StructureKind::Sparse80 || kind == StructureKind::Sparse40 ||
           kind == StructureKind::ScaleFree;
}

void StructureSpec::validate() const
{
    if (dim < 4) throw std::invalid_argument("structure dimension must be >= 4");
    if (is_random(kind) && !seed) {
        throw std::invalid_argument("structure '" + std::string(to_string(kind)) +
                                    "' requires a seed");
    }
    if (!(repair_margin > 0.0)) throw std::invalid_argument("repair margin must be > 0");
}

SymMatrix pd_repair(const SymMatrix& m, double margin)
{
    const double lmin = eigenvalues_sym(m)(0);
    if (lmin > margin) return m;
    SymMatrix out = m;
    for (Index i = 0; i < m.dim(); ++i) out.add(i, i, margin - lmin);
    return out;
}

AdjacencyMatrix support(const SymMatrix& m, double tol)
{
    AdjacencyMatrix a(m.dim());
    for (Index i = 0; i < m.dim(); ++i) {
        for (Index j = i + 1; j < m.dim(); ++j) a.set(i, j, std::abs(m(i, j)) > tol);
    }
    return a;
}

namespace {

using Pair = std::pair<SymMatrix, SymMatrix>;

SymMatrix banded(Index p, double diag, double lag1, double lag2)
{
    SymMatrix m(p);
    for (Index i = 0; i < p; ++i) {
        m.set(i, i, diag);
        if (i >= 1) m.set(i, i - 1, lag1);
        if (i >= 2) m.set(i, i - 2, lag2);
    }
    return m;
}

SymMatrix power_decay(Index p, double base)
{
    SymMatrix m(p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j <= i; ++j) m.set(i, j, std::pow(base, static_cast<double>(i - j)));
    }
    return m;
}

/// Unit diagonal, `first` on pairs inside the first p/2 indices, `second`
/// on pairs inside the remaining ones.
SymMatrix two_blocks(Index p, double first, double second)
{
    const Index half = p / 2;
    SymMatrix m = SymMatrix::identity(p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < i; ++j) {
            if (i < half) m.set(i, j, first);
            else if (j >= half) m.set(i, j, second);
        }
    }
    return m;
}

SymMatrix star(Index p, double hub)
{
    SymMatrix m = SymMatrix::identity(p);
    for (Index i = 1; i < p; ++i) m.set(0, i, hub);
    return m;
}

SymMatrix circle(Index p, double diag, double neighbour, double corner)
{
    SymMatrix m = banded(p, diag, neighbour, 0.0);
    m.set(0, p - 1, corner);
    return m;
}

Pair random_sparse(Index p, double zero_fraction, Rng& rng)
{
    std::vector<std::pair<Index, Index>> slots;
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) slots.emplace_back(i, j);
    }
    // Fisher-Yates with our own generator keeps the mask reproducible.
    for (std::size_t k = slots.size(); k > 1; --k) {
        const auto r = static_cast<std::size_t>(rng.next_u64() % k);
        std::swap(slots[k - 1], slots[r]);
    }
    const auto zeroed =
        static_cast<std::size_t>(std::floor(zero_fraction * static_cast<double>(slots.size())));

    SymMatrix t1 = SymMatrix::identity(p);
    SymMatrix t2 = SymMatrix::identity(p);
    for (std::size_t k = zeroed; k < slots.size(); ++k) {
        const double mag = 0.2 + 0.4 * rng.uniform();
        const double v = rng.uniform() < 0.5 ? -mag : mag;
        t1.set(slots[k].first, slots[k].second, v);
        t2.set(slots[k].first, slots[k].second, 1.5 * v);
    }
    return {t1, t2};
}

/// Preferential attachment with one edge per new node.
SymMatrix scale_free(Index p, double weight, Rng& rng)
{
    SymMatrix m = SymMatrix::identity(p);
    std::vector<Index> endpoints = {0, 1};
    m.set(0, 1, weight);
    for (Index k = 2; k < p; ++k) {
        const Index target = endpoints[rng.next_u64() % endpoints.size()];
        m.set(k, target, weight);
        endpoints.push_back(k);
        endpoints.push_back(target);
    }
    return m;
}

} // namespace

ModelPair make_structure(const StructureSpec& spec)
{
    spec.validate();
    const Index p = spec.dim;
    Rng rng(spec.seed.value_or(0));

    Pair raw;
    switch (spec.kind) {
    case StructureKind::AR1:
        raw = {power_decay(p, 0.7), power_decay(p, 0.75)};
        break;
    case StructureKind::AR2:
        raw = {banded(p, 0.1, 0.05, 0.025), banded(p, 1.0, 0.5, 0.25)};
        break;
    case StructureKind::Sparse80:
        raw = random_sparse(p, 0.8, rng);
        break;
    case StructureKind::Sparse40:
        raw = random_sparse(p, 0.4, rng);
        break;
    case StructureKind::ScaleFree: {
        SymMatrix base = scale_free(p, spec.scale_free_weight, rng);
        raw = {base, base * spec.scale_free_multiplier};
        break;
    }
    case StructureKind::Band:
        raw = {two_blocks(p, 0.2, 0.5), two_blocks(p, 0.7, 0.9)};
        break;
    case StructureKind::Cluster:
        raw = {two_blocks(p, 0.5, 0.5), two_blocks(p, 0.9, 0.9)};
        break;
    case StructureKind::Star:
        raw = {star(p, 0.1), star(p, 2.1)};
        break;
    case StructureKind::Circle:
        raw = {circle(p, 2.0, 1.0, 0.45), circle(p, 4.0, 2.0, 0.95)};
        break;
    }

    ModelPair mp;
    mp.raw_theta1 = raw.first;
    mp.raw_theta2 = raw.second;
    mp.theta1 = pd_repair(raw.first, spec.repair_margin * raw.first.max_abs_diag());
    if (spec.kind == StructureKind::ScaleFree) {
        // Keep the second component an exact multiple of the repaired first.
        mp.theta2 = mp.theta1 * spec.scale_free_multiplier;
    } else {
        mp.theta2 = pd_repair(raw.second, spec.repair_margin * raw.second.max_abs_diag());
    }
    mp.true_delta = mp.theta2 - mp.theta1;
    mp.true_adjacency = support(mp.true_delta);
    return mp;
}

Matrix sample_gaussian(const SymMatrix& theta, std::size_t n, std::uint64_t seed)
{
    const PDFactor f = cholesky_pd(theta);
    const Index p = theta.dim();
    Rng rng(seed);
    Matrix z(p, static_cast<Index>(n));
    for (Index c = 0; c < z.cols(); ++c) {
        for (Index r = 0; r < p; ++r) z(r, c) = rng.normal();
    }
    // theta = L Lᵀ, so x = L^-ᵀ z has covariance theta^-1.
    const Matrix x = f.lower.transpose().triangularView<Eigen::Upper>().solve(z);
    return x.transpose();
}

} // namespace bdnet::synth
