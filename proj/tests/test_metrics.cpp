#include "bdnet/metrics.hpp"

#include "oracles.hpp"
#include "printers.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace bdnet;
using namespace bdnet::metrics;

namespace {

AdjacencyMatrix random_graph(Index p, std::mt19937_64& gen, double density = 0.5)
{
    std::bernoulli_distribution coin(density);
    AdjacencyMatrix a(p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) a.set(i, j, coin(gen));
    }
    return a;
}

// Counts and scores by the textbook formulas, written out independently.
struct NaiveScores {
    long tp = 0, tn = 0, fp = 0, fn = 0;
};

NaiveScores naive_counts(const AdjacencyMatrix& est, const AdjacencyMatrix& truth)
{
    NaiveScores c;
    for (Index i = 0; i < est.dim(); ++i) {
        for (Index j = 0; j < est.dim(); ++j) {
            if (j <= i) continue;
            const bool e = est(i, j), t = truth(i, j);
            c.tp += e && t;
            c.tn += !e && !t;
            c.fp += e && !t;
            c.fn += !e && t;
        }
    }
    return c;
}

} // namespace

TEST(MatrixLosses, Examples)
{
    const SymMatrix a = SymMatrix::identity(3) * 1.5;
    const auto z = matrix_losses(a, a);
    EXPECT_EQ(z.l1, 0.0);
    EXPECT_EQ(z.l2, 0.0);

    SymMatrix est = SymMatrix::identity(2);
    est.set(0, 1, 1.0);
    const auto m = matrix_losses(est, SymMatrix::identity(2));
    EXPECT_DOUBLE_EQ(m.l1, 1.0);
    EXPECT_DOUBLE_EQ(m.l2, std::sqrt(2.0));
}

TEST(MatrixLosses, DimensionMismatch)
{
    EXPECT_THROW(matrix_losses(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionMismatch);
    EXPECT_THROW(eigen_losses(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionMismatch);
    EXPECT_THROW(confusion(AdjacencyMatrix(2), AdjacencyMatrix(3)), DimensionMismatch);
}

TEST(EigenLosses, Examples)
{
    const auto e = eigen_losses(SymMatrix::identity(2) * 2.0, SymMatrix::identity(2));
    EXPECT_DOUBLE_EQ(e.el1, 1.0);
    EXPECT_DOUBLE_EQ(e.el2, 1.0);
    EXPECT_DOUBLE_EQ(e.maxel1, 1.0);
    EXPECT_DOUBLE_EQ(e.minel1, 1.0);

    const SymMatrix a = SymMatrix::from_lower(oracle::random_spd(5, 3));
    const auto z = losses(a, a);
    EXPECT_EQ(z.l1 + z.l2 + z.el1 + z.el2 + z.maxel1 + z.minel1, 0.0);
}

TEST(Oracle, LossesOnRandomPairs)
{
    for (unsigned k = 0; k < 100; ++k) {
        const int p = 2 + static_cast<int>(k % 5); // 2..6
        const Matrix a = oracle::random_symmetric(p, 2 * k + 1);
        const Matrix b = oracle::random_symmetric(p, 2 * k + 2);
        const auto m = matrix_losses(SymMatrix::from_lower(a), SymMatrix::from_lower(b));
        EXPECT_NEAR(m.l1, oracle::naive_l1(a - b), 1e-14);
        EXPECT_NEAR(m.l2, oracle::naive_frobenius(a - b), 1e-14);

        if (p > 4) continue;
        const auto ea = oracle::charpoly_eigenvalues(a);
        const auto eb = oracle::charpoly_eigenvalues(b);
        double l1 = 0.0, l2 = 0.0;
        for (int i = 0; i < p; ++i) {
            l1 += std::abs(ea[i] - eb[i]);
            l2 += (ea[i] - eb[i]) * (ea[i] - eb[i]);
        }
        const auto e = eigen_losses(SymMatrix::from_lower(a), SymMatrix::from_lower(b));
        EXPECT_NEAR(e.el1, l1 / p, 1e-8);
        EXPECT_NEAR(e.el2, l2 / p, 1e-8);
        EXPECT_NEAR(e.maxel1, std::abs(ea.back() - eb.back()), 1e-8);
        EXPECT_NEAR(e.minel1, std::abs(ea.front() - eb.front()), 1e-8);
    }
}

TEST(Confusion, Examples)
{
    const auto full = AdjacencyMatrix::complete(4);
    const auto c = confusion(full, full);
    EXPECT_EQ(c.tp, 6);
    EXPECT_EQ(c.tn + c.fp + c.fn, 0);

    const auto e = confusion(AdjacencyMatrix(4), full);
    EXPECT_EQ(e.fn, 6);
    EXPECT_EQ(e.tp + e.tn + e.fp, 0);

    std::mt19937_64 gen(5);
    EXPECT_EQ(confusion(random_graph(5, gen), random_graph(5, gen)).total(), 10);
}

TEST(Scores, Examples)
{
    const auto perfect = classification_scores({2, 2, 0, 0});
    EXPECT_EQ(perfect.mcc, 1.0);
    EXPECT_EQ(perfect.f1, 1.0);
    EXPECT_EQ(perfect.se, 1.0);
    EXPECT_EQ(perfect.sp, 1.0);
    EXPECT_EQ(perfect.fnr, 0.0);

    const auto chance = classification_scores({1, 1, 1, 1});
    EXPECT_EQ(chance.f1, 0.5);
    EXPECT_EQ(chance.mcc, 0.0);

    const auto all_pos = classification_scores({3, 0, 0, 3});
    EXPECT_FALSE(all_pos.sp.has_value());
    EXPECT_FALSE(all_pos.mcc.has_value());
    EXPECT_EQ(all_pos.se, 0.5);
}

TEST(Scores, NaWhenDenominatorEmpty)
{
    const auto none = classification_scores({0, 0, 0, 0});
    EXPECT_FALSE(none.sp);
    EXPECT_FALSE(none.se);
    EXPECT_FALSE(none.fnr);
    EXPECT_FALSE(none.f1);
    EXPECT_FALSE(none.mcc);

    const auto no_truth = classification_scores({0, 6, 0, 0});
    EXPECT_EQ(no_truth.sp, 1.0);
    EXPECT_FALSE(no_truth.se);
    EXPECT_FALSE(no_truth.f1);
}

TEST(Oracle, CountsAndScoresOnRandomGraphs)
{
    std::mt19937_64 gen(11);
    for (int k = 0; k < 100; ++k) {
        const Index p = 2 + k % 5;
        const auto est = random_graph(p, gen, 0.3 + 0.004 * k);
        const auto truth = random_graph(p, gen, 0.5);
        const auto n = naive_counts(est, truth);
        const auto c = confusion(est, truth);
        ASSERT_EQ(c.tp, n.tp);
        ASSERT_EQ(c.tn, n.tn);
        ASSERT_EQ(c.fp, n.fp);
        ASSERT_EQ(c.fn, n.fn);
        EXPECT_EQ(c.total(), p * (p - 1) / 2);

        const double tp = n.tp, tn = n.tn, fp = n.fp, fn = n.fn;
        const auto s = classification_scores(c);
        if (tn + fp > 0) EXPECT_DOUBLE_EQ(*s.sp, tn / (tn + fp)); else EXPECT_FALSE(s.sp);
        if (tp + fn > 0) {
            EXPECT_DOUBLE_EQ(*s.se, tp / (tp + fn));
            EXPECT_DOUBLE_EQ(*s.fnr, fn / (fn + tp));
        } else {
            EXPECT_FALSE(s.se);
            EXPECT_FALSE(s.fnr);
        }
        const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
        if (den > 0) {
            EXPECT_NEAR(*s.mcc, (tp * tn - fp * fn) / std::sqrt(den), 1e-14);
        } else {
            EXPECT_FALSE(s.mcc);
        }
    }
}

TEST(Properties, ScoreRangesAndMccSymmetry)
{
    for (std::int64_t tp = 0; tp < 6; ++tp) {
        for (std::int64_t tn = 0; tn < 6; ++tn) {
            for (std::int64_t fp = 0; fp < 6; ++fp) {
                for (std::int64_t fn = 0; fn < 6; ++fn) {
                    const ConfusionCounts c{tp, tn, fp, fn};
                    const auto s = classification_scores(c);
                    if (s.mcc) {
                        EXPECT_GE(*s.mcc, -1.0 - 1e-15);
                        EXPECT_LE(*s.mcc, 1.0 + 1e-15);
                    }
                    if (s.f1) {
                        EXPECT_GE(*s.f1, 0.0);
                        EXPECT_LE(*s.f1, 1.0);
                    }
                    EXPECT_EQ(mcc(c), mcc({tp, tn, fn, fp}));
                }
            }
        }
    }
}

TEST(Properties, LossesZeroOnlyAtTruth)
{
    const SymMatrix a = SymMatrix::from_lower(oracle::random_spd(4, 8));
    SymMatrix b = a;
    b.add(1, 2, 1e-3);
    const auto l = losses(b, a);
    EXPECT_GT(l.l1, 0.0);
    EXPECT_GT(l.l2, 0.0);
    EXPECT_NEAR(l.l2 * l.l2, 2e-6, 1e-15);
}

TEST(Median, ExamplesAndPermutationInvariance)
{
    const std::vector<double> odd{3, 1, 2};
    const std::vector<double> even{4, 1, 3, 2};
    EXPECT_EQ(median(odd), 2.0);
    EXPECT_EQ(median(even), 2.5);

    std::vector<double> v{0.3, 0.9, -1.2, 4.4, 0.0, 2.5, 0.7};
    const double m = median(v);
    std::mt19937_64 gen(2);
    for (int k = 0; k < 20; ++k) {
        std::shuffle(v.begin(), v.end(), gen);
        EXPECT_EQ(median(v), m);
    }

    const std::vector<Score> scores{0.5, std::nullopt, 0.1, 0.9};
    EXPECT_EQ(median(scores), 0.5);
    const std::vector<Score> nas{std::nullopt, std::nullopt};
    EXPECT_FALSE(median(nas).has_value());
}
