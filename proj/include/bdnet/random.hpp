#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bdnet {

/// Seedable random source. Only the raw 64-bit engine output is used; every
/// variate is generated by the algorithms below so that draws are identical
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// Gamma in shape/rate form: density ∝ x^(shape-1) exp(-rate x).
    /// Marsaglia-Tsang squeeze; shape < 1 uses the U^(1/shape) boost.
    double gamma(double shape, double rate);

    double chi_square(double dof) { return gamma(0.5 * dof, 0.5); }

    /// Inverse Gaussian IG(mean mu, shape lambda) by the Michael-Schucany-Haas
    /// transformation method.
    double inverse_gaussian(double mu, double lambda);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic child seed from a parent seed and a path of indices.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

} // namespace bdnet
