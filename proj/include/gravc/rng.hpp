#pragma once

#include <cstdint>
#include <random>

namespace gravc {

// Mixes a master seed with a stream index so that Monte-Carlo runs, network
// nodes etc. get decorrelated, reproducible generator states.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic random source. All distributions are sampled through
/// explicit transforms of the mt19937_64 stream, so a given seed produces the
/// same values on every standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01();

    /// Standard normal via Box-Muller; draws come in pairs, the second one
    /// is cached.
    double normal();

    /// Chi-square with integer degrees of freedom (sum of dof squared normals).
    double chi_square(int dof);

    /// Zero-mean Laplace with scale b (variance 2*b^2).
    double laplace(double b);

private:
    std::mt19937_64 gen_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace gravc
