#include "bdnet/matrix_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bdnet {

NotPositiveDefinite::NotPositiveDefinite(Index minor, const std::string& context)
    : std::runtime_error("matrix is not positive definite (leading minor " +
                         std::to_string(minor + 1) + ")" +
                         (context.empty() ? std::string{} : ": " + context)),
      minor_(minor)
{
}

SymMatrix::SymMatrix(Index dim, double fill) : data_(Matrix::Constant(dim, dim, fill))
{
    if (dim < 1) throw std::invalid_argument("SymMatrix dimension must be positive");
}

SymMatrix SymMatrix::identity(Index dim)
{
    SymMatrix m(dim);
    m.data_.setIdentity();
    return m;
}

SymMatrix SymMatrix::diagonal(const Vector& d)
{
    SymMatrix m(d.size());
    m.data_.diagonal() = d;
    return m;
}

SymMatrix SymMatrix::from_lower(const Matrix& m)
{
    if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix requires a square matrix");
    SymMatrix out(m.rows());
    out.data_.triangularView<Eigen::Lower>() = m.triangularView<Eigen::Lower>();
    out.data_.triangularView<Eigen::StrictlyUpper>() =
        m.transpose().triangularView<Eigen::StrictlyUpper>();
    return out;
}

SymMatrix SymMatrix::from_dense(const Matrix& m, double rel_tol)
{
    if (m.rows() != m.cols()) throw DimensionMismatch("SymMatrix requires a square matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= rel_tol * scale)) {
        throw std::invalid_argument("matrix is not symmetric (max asymmetry " +
                                    std::to_string(asym) + ")");
    }
    return from_lower(m);
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const
{
    SymMatrix r = *this;
    r += o;
    return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const
{
    require_same_dim(*this, o, "SymMatrix subtraction");
    SymMatrix r = *this;
    r.data_ -= o.data_;
    return r;
}

SymMatrix SymMatrix::operator*(double s) const
{
    SymMatrix r = *this;
    r *= s;
    return r;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o)
{
    require_same_dim(*this, o, "SymMatrix addition");
    data_ += o.data_;
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s)
{
    data_ *= s;
    return *this;
}

SymMatrix SymMatrix::operator-() const { return *this * -1.0; }

double SymMatrix::max_abs_diag() const { return data_.diagonal().cwiseAbs().maxCoeff(); }

Vector PDFactor::solve(const Vector& b) const
{
    Vector y = lower.triangularView<Eigen::Lower>().solve(b);
    return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

PDFactor cholesky_pd(const SymMatrix& m, double rel_tol)
{
    const Index p = m.dim();
    const Matrix& a = m.dense();
    const double tol = rel_tol * a.diagonal().cwiseAbs().maxCoeff();

    PDFactor f;
    f.lower = Matrix::Zero(p, p);
    Matrix& l = f.lower;
    for (Index j = 0; j < p; ++j) {
        double d = a(j, j);
        for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > tol)) throw NotPositiveDefinite(j);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Index i = j + 1; i < p; ++i) {
            double s = a(i, j);
            for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
        f.log_det += 2.0 * std::log(ljj);
    }
    return f;
}

SymMatrix invert_pd(const SymMatrix& m, double rel_tol)
{
    const PDFactor f = cholesky_pd(m, rel_tol);
    const Index p = m.dim();
    Matrix linv = f.lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));
    return SymMatrix::from_lower(linv.transpose() * linv);
}

SymMatrix partial_correlation(const SymMatrix& theta)
{
    const Index p = theta.dim();
    for (Index i = 0; i < p; ++i) {
        if (!(theta(i, i) > 0.0)) throw NotPositiveDefinite(i, "non-positive diagonal");
    }
    SymMatrix rho = SymMatrix::identity(p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = j + 1; i < p; ++i) {
            rho.set(i, j, -theta(i, j) / std::sqrt(theta(i, i) * theta(j, j)));
        }
    }
    return rho;
}

Partition partition_last(const SymMatrix& m, Index col)
{
    const Index p = m.dim();
    if (col < 0 || col >= p) {
        throw std::out_of_range("partition column " + std::to_string(col) + " out of range");
    }
    Partition part;
    part.rest.reserve(static_cast<std::size_t>(p - 1));
    for (Index i = 0; i < p; ++i) {
        if (i != col) part.rest.push_back(i);
    }
    part.m22 = m(col, col);
    if (p == 1) return part;

    part.m11 = SymMatrix::from_lower(m.dense()(part.rest, part.rest));
    part.m12 = m.dense()(part.rest, col);
    return part;
}

SymMatrix reassemble(const Partition& part, Index col)
{
    const Index p = static_cast<Index>(part.rest.size()) + 1;
    SymMatrix m(p);
    for (Index a = 0; a < p - 1; ++a) {
        const Index ia = part.rest[static_cast<std::size_t>(a)];
        for (Index b = 0; b <= a; ++b) {
            m.set(ia, part.rest[static_cast<std::size_t>(b)], part.m11(a, b));
        }
        m.set(ia, col, part.m12(a));
    }
    m.set(col, col, part.m22);
    return m;
}

Vector eigenvalues_sym(const SymMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigenvalue iteration did not converge");
    }
    return solver.eigenvalues();
}

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what)
{
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
    }
}

} // namespace bdnet
