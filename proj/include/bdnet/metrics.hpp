#pragma once

#include "bdnet/adjacency.hpp"
#include "bdnet/matrix_core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bdnet::metrics {

/// A ratio score; empty when its denominator class is empty ("NA").
using Score = std::optional<double>;

struct LossReport {
    double l1 = 0.0;     ///< max column absolute sum of the difference
    double l2 = 0.0;     ///< Frobenius norm of the difference
    double el1 = 0.0;    ///< mean absolute eigenvalue difference
    double el2 = 0.0;    ///< mean squared eigenvalue difference
    double maxel1 = 0.0; ///< |largest eigenvalue difference|
    double minel1 = 0.0; ///< |smallest eigenvalue difference|
};

struct MatrixLosses {
    double l1 = 0.0;
    double l2 = 0.0;
};

struct EigenLosses {
    double el1 = 0.0;
    double el2 = 0.0;
    double maxel1 = 0.0;
    double minel1 = 0.0;
};

MatrixLosses matrix_losses(const SymMatrix& est, const SymMatrix& truth);

/// Eigenvalues of both matrices are paired after ascending sort.
EigenLosses eigen_losses(const SymMatrix& est, const SymMatrix& truth);

LossReport losses(const SymMatrix& est, const SymMatrix& truth);

/// Counts over the strict upper triangle only.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
};

ConfusionCounts confusion(const AdjacencyMatrix& est, const AdjacencyMatrix& truth);

struct ClassificationScores {
    Score sp;  ///< tn / (tn + fp)
    Score se;  ///< tp / (tp + fn)
    Score fnr; ///< fn / (fn + tp)
    Score f1;  ///< tp / (tp + (fp + fn) / 2)
    Score mcc;
};

ClassificationScores classification_scores(const ConfusionCounts& c);

Score mcc(const ConfusionCounts& c);

/// Median of a sample (mean of the two middle values for even sizes).
double median(std::span<const double> values);

/// Median of the available scores; empty when none are available.
Score median(std::span<const Score> values);

} // namespace bdnet::metrics
