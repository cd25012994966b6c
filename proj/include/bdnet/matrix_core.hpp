#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace bdnet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when a Cholesky pivot falls at or below the scale-aware tolerance.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(Index minor, const std::string& context = {});

    /// Zero-based index of the first leading minor that failed.
    Index minor() const noexcept { return minor_; }

private:
    Index minor_;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense symmetric matrix. Every write goes to both (i,j) and (j,i), so the
/// stored matrix is exactly symmetric at all times.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(Index dim, double fill = 0.0);

    static SymMatrix identity(Index dim);
    static SymMatrix diagonal(const Vector& d);

    /// Accepts a dense matrix that is symmetric up to `rel_tol` (relative to
    /// its largest entry) and keeps the lower triangle, mirrored. Throws
    /// std::invalid_argument when the asymmetry is larger.
    static SymMatrix from_dense(const Matrix& m, double rel_tol = 1e-9);

    /// Takes the lower triangle of `m` unconditionally.
    static SymMatrix from_lower(const Matrix& m);

    Index dim() const noexcept { return data_.rows(); }
    double operator()(Index i, Index j) const { return data_(i, j); }
    void set(Index i, Index j, double v)
    {
        data_(i, j) = v;
        data_(j, i) = v;
    }
    void add(Index i, Index j, double v)
    {
        data_(i, j) += v;
        if (i != j) data_(j, i) += v;
    }

    const Matrix& dense() const noexcept { return data_; }

    SymMatrix operator+(const SymMatrix& o) const;
    SymMatrix operator-(const SymMatrix& o) const;
    SymMatrix operator*(double s) const;
    SymMatrix& operator+=(const SymMatrix& o);
    SymMatrix& operator*=(double s);
    SymMatrix operator-() const;

    double trace() const { return data_.trace(); }
    double max_abs_diag() const;

    bool operator==(const SymMatrix& o) const
    {
        return dim() == o.dim() && data_ == o.data_;
    }

private:
    Matrix data_;
};

inline SymMatrix operator*(double s, const SymMatrix& m) { return m * s; }

/// Lower-triangular Cholesky factor with its log-determinant.
struct PDFactor {
    Matrix lower;
    double log_det = 0.0;

    Index dim() const noexcept { return lower.rows(); }
    Matrix reconstruct() const { return lower * lower.transpose(); }
    /// Solves (L Lᵀ) x = b.
    Vector solve(const Vector& b) const;
};

inline constexpr double kPivotRelTol = 1e-12;

/// Accepts the matrix iff every pivot exceeds rel_tol times the largest
/// diagonal entry. rel_tol = 0 only requires strictly positive pivots, which
/// suits matrices whose diagonal spans many orders of magnitude.
PDFactor cholesky_pd(const SymMatrix& m, double rel_tol = kPivotRelTol);

SymMatrix invert_pd(const SymMatrix& m, double rel_tol = kPivotRelTol);

/// rho_ij = -theta_ij / sqrt(theta_ii theta_jj), unit diagonal.
SymMatrix partial_correlation(const SymMatrix& theta);

struct Partition {
    SymMatrix m11;
    Vector m12;
    double m22 = 0.0;
    /// Original indices of the rows of m11, in order.
    std::vector<Index> rest;
};

/// Moves `col` to the last position and splits into blocks.
Partition partition_last(const SymMatrix& m, Index col);

/// Inverse of partition_last.
SymMatrix reassemble(const Partition& part, Index col);

/// Ascending eigenvalues.
Vector eigenvalues_sym(const SymMatrix& m);

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what);

} // namespace bdnet
