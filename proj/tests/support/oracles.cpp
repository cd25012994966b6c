#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bdnet::oracle {

double laplace_det(const Eigen::MatrixXd& a)
{
    const int p = static_cast<int>(a.rows());
    if (p == 1) return a(0, 0);
    double det = 0.0;
    for (int c = 0; c < p; ++c) {
        Eigen::MatrixXd minor(p - 1, p - 1);
        for (int i = 1; i < p; ++i) {
            int cc = 0;
            for (int j = 0; j < p; ++j) {
                if (j == c) continue;
                minor(i - 1, cc++) = a(i, j);
            }
        }
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a(0, c) * laplace_det(minor);
    }
    return det;
}

std::vector<double> charpoly_eigenvalues(const Eigen::MatrixXd& a)
{
    const int p = static_cast<int>(a.rows());
    if (p > 4) throw std::invalid_argument("charpoly_eigenvalues: p <= 4 only");
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < p; ++i) {
        double r = 0.0;
        for (int j = 0; j < p; ++j) {
            if (j != i) r += std::abs(a(i, j));
        }
        lo = std::min(lo, a(i, i) - r);
        hi = std::max(hi, a(i, i) + r);
    }
    lo -= 1.0;
    hi += 1.0;
    auto f = [&](double x) {
        return laplace_det(a - x * Eigen::MatrixXd::Identity(p, p));
    };
    std::vector<double> roots;
    const int steps = 200000;
    double x0 = lo, f0 = f(lo);
    for (int k = 1; k <= steps; ++k) {
        const double x1 = lo + (hi - lo) * k / steps;
        const double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
            double l = x0, h = x1, fl = f0;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (l + h);
                const double fm = f(m);
                if ((fm < 0) == (fl < 0)) {
                    l = m;
                    fl = fm;
                } else {
                    h = m;
                }
            }
            roots.push_back(0.5 * (l + h));
        }
        x0 = x1;
        f0 = f1;
    }
    if (static_cast<int>(roots.size()) != p) {
        throw std::runtime_error("charpoly_eigenvalues: eigenvalues not separated");
    }
    return roots;
}

double naive_l1(const Eigen::MatrixXd& d)
{
    double best = 0.0;
    for (int j = 0; j < d.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < d.rows(); ++i) s += std::abs(d(i, j));
        best = std::max(best, s);
    }
    return best;
}

double naive_frobenius(const Eigen::MatrixXd& d)
{
    double s = 0.0;
    for (int i = 0; i < d.rows(); ++i) {
        for (int j = 0; j < d.cols(); ++j) s += d(i, j) * d(i, j);
    }
    return std::sqrt(s);
}

double naive_dnet_loss(const Eigen::MatrixXd& d, const Eigen::MatrixXd& s1,
                       const Eigen::MatrixXd& s2)
{
    const int p = static_cast<int>(d.rows());
    // tr(Dᵀ S1 D S2) = sum_{a,b,c,e} D_ba S1_bc D_ce S2_ea
    double quad = 0.0;
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
            for (int c = 0; c < p; ++c)
                for (int e = 0; e < p; ++e) quad += d(b, a) * s1(b, c) * d(c, e) * s2(e, a);
    double lin = 0.0;
    for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) lin += d(i, k) * (s1(k, i) - s2(k, i));
    return 0.5 * quad - lin;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

Eigen::MatrixXd random_spd(int p, unsigned seed, double lo, double hi)
{
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(lo, hi);
    Eigen::MatrixXd g(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) g(i, j) = nd(gen);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd ev(p);
    for (int i = 0; i < p; ++i) ev(i) = ud(gen);
    Eigen::MatrixXd m = q * ev.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd random_symmetric(int p, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    Eigen::MatrixXd m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = ud(gen);
    return m;
}

} // namespace bdnet::oracle
