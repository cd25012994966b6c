#include "bdnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdnet::metrics {

MatrixLosses matrix_losses(const SymMatrix& est, const SymMatrix& truth)
{
    require_same_dim(est, truth, "matrix_losses");
    const Matrix d = est.dense() - truth.dense();
    return {d.cwiseAbs().colwise().sum().maxCoeff(), d.norm()};
}

EigenLosses eigen_losses(const SymMatrix& est, const SymMatrix& truth)
{
    require_same_dim(est, truth, "eigen_losses");
    const Vector ge = eigenvalues_sym(est);
    const Vector gt = eigenvalues_sym(truth);
    const Vector d = ge - gt;
    const double p = static_cast<double>(d.size());
    const Index last = d.size() - 1;
    return {d.cwiseAbs().sum() / p, d.squaredNorm() / p, std::abs(d(last)), std::abs(d(0))};
}

LossReport losses(const SymMatrix& est, const SymMatrix& truth)
{
    const MatrixLosses m = matrix_losses(est, truth);
    const EigenLosses e = eigen_losses(est, truth);
    return {m.l1, m.l2, e.el1, e.el2, e.maxel1, e.minel1};
}

ConfusionCounts confusion(const AdjacencyMatrix& est, const AdjacencyMatrix& truth)
{
    if (est.dim() != truth.dim()) throw DimensionMismatch("confusion: adjacency dimensions differ");
    ConfusionCounts c;
    for (Index i = 0; i < est.dim(); ++i) {
        for (Index j = i + 1; j < est.dim(); ++j) {
            const bool e = est(i, j);
            const bool t = truth(i, j);
            if (e && t) ++c.tp;
            else if (!e && !t) ++c.tn;
            else if (e) ++c.fp;
            else ++c.fn;
        }
    }
    return c;
}

namespace {

Score ratio(double num, double den)
{
    if (den == 0.0) return std::nullopt;
    return num / den;
}

} // namespace

Score mcc(const ConfusionCounts& c)
{
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (den == 0.0) return std::nullopt;
    return (tp * tn - fp * fn) / std::sqrt(den);
}

ClassificationScores classification_scores(const ConfusionCounts& c)
{
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    return {ratio(tn, tn + fp), ratio(tp, tp + fn), ratio(fn, fn + tp),
            ratio(tp, tp + 0.5 * (fp + fn)), mcc(c)};
}

double median(std::span<const double> values)
{
    if (values.empty()) throw std::invalid_argument("median of an empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Score median(std::span<const Score> values)
{
    std::vector<double> v;
    for (const Score& s : values) {
        if (s) v.push_back(*s);
    }
    if (v.empty()) return std::nullopt;
    return median(std::span<const double>(v));
}

} // namespace bdnet::metrics
