#pragma once

#include "bdnet/adjacency.hpp"
#include "bdnet/matrix_core.hpp"

#include <cstddef>
#include <vector>

namespace bdnet::dnet {

// Direct differential network estimate: minimizes
//   L(D) = 1/2 tr(Dᵀ S1 D S2) - tr(D (S1 - S2)) + lambda * sum_ij |D_ij|
// by proximal gradient (ISTA) with a fixed step 1 / (lmax(S1) lmax(S2)).
// The unpenalized minimizer is S2^-1 - S1^-1.

struct IstaConfig {
    std::size_t max_iters = 20000;
    double tolerance = 1e-12;     ///< stop when the objective drops by less (relative)
    std::vector<double> grid;     ///< explicit penalties; empty means default_grid()
    std::size_t grid_size = 20;
    double grid_low = 0.01;       ///< fraction of max|S1 - S2| at the small end
    bool record_objective = false;

    void validate() const;
};

double dnet_loss(const SymMatrix& delta, const SymMatrix& s1, const SymMatrix& s2);

/// 1/2 (S1 D S2 + S2 D S1) - (S1 - S2).
SymMatrix dnet_gradient(const SymMatrix& delta, const SymMatrix& s1, const SymMatrix& s2);

double soft_threshold(double x, double t);

double l1_norm(const SymMatrix& m);

struct IstaResult {
    SymMatrix delta;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; ///< filled when record_objective; index 0 is the start
};

IstaResult ista_solve(const SymMatrix& s1, const SymMatrix& s2, double lambda,
                      const IstaConfig& cfg);

/// Largest violation of the subgradient optimality conditions.
double kkt_residual(const SymMatrix& delta, const SymMatrix& s1, const SymMatrix& s2,
                    double lambda);

struct PathPoint {
    double lambda = 0.0;
    SymMatrix delta;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double bic = 0.0;
    std::size_t df = 0;
};

struct SolutionPath {
    std::vector<PathPoint> points;
    std::size_t selected = 0;
};

/// `grid_size` log-spaced values over [grid_low, 1] * max|S1 - S2|, descending.
std::vector<double> default_grid(const SymMatrix& s1, const SymMatrix& s2, const IstaConfig& cfg);

/// Nonzero entries with i <= j.
std::size_t degrees_of_freedom(const SymMatrix& delta);

/// bic = (n1 + n2) L(D) + log(n1 + n2) df. Sets path.selected to the minimizer,
/// ties going to the larger penalty, and returns the selected estimate.
const SymMatrix& bic_select(SolutionPath& path, const SymMatrix& s1, const SymMatrix& s2,
                            std::size_t n1, std::size_t n2);

SolutionPath solve_path(const SymMatrix& s1, const SymMatrix& s2, std::size_t n1, std::size_t n2,
                        const IstaConfig& cfg);

struct DnetEstimate {
    SymMatrix delta_hat;
    AdjacencyMatrix adjacency;
    double lambda = 0.0;
    SolutionPath path;
};

/// Sample covariances XᵀX / n of both samples, solution path, BIC choice.
DnetEstimate estimate_dnet(const Matrix& x1, const Matrix& x2, const IstaConfig& cfg);

} // namespace bdnet::dnet
