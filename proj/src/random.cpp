#include "bdnet/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdnet {

double Rng::uniform()
{
    // 53 random bits, shifted off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double Rng::gamma(double shape, double rate)
{
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
        throw std::invalid_argument("gamma: invalid parameters (shape " + std::to_string(shape) +
                                    ", rate " + std::to_string(rate) + ")");
    }
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0, 1.0);
        return g * std::pow(uniform(), 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

double Rng::inverse_gaussian(double mu, double lambda)
{
    if (!(mu > 0.0) || !(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("inverse_gaussian: invalid parameters (mu " +
                                    std::to_string(mu) + ", lambda " + std::to_string(lambda) +
                                    ")");
    }
    const double nu = normal();
    const double y = nu * nu;
    // Smaller root of the quadratic, written as mu / (1 + a + sqrt(a^2 + 2a))
    // with a = mu y / (2 lambda) to avoid cancellation when mu is large.
    double x;
    if (std::isinf(mu)) {
        x = lambda / y;
    } else {
        const double a = mu * y / (2.0 * lambda);
        x = mu / (1.0 + a + std::sqrt(a * a + 2.0 * a));
    }
    const double u = uniform();
    if (std::isinf(mu)) return x;
    if (u <= mu / (mu + x)) return x;
    return mu * (mu / x);
}

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = mix64(parent);
    for (std::uint64_t k : path) s = mix64(s ^ mix64(k + 0x632BE59BD9B4E019ULL));
    return s;
}

} // namespace bdnet
