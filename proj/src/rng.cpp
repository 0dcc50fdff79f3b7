#include "gravc/rng.hpp"

#include <cmath>

namespace gravc {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer over master + golden-ratio stepped index
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

double Rng::chi_square(int dof) {
    double sum = 0.0;
    for (int i = 0; i < dof; ++i) {
        const double z = normal();
        sum += z * z;
    }
    return sum;
}

double Rng::laplace(double b) {
    const double u = uniform01() - 0.5;
    return -b * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::fabs(u));
}

}  // namespace gravc
