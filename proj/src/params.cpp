#include "gravc/params.hpp"

#include <cmath>

namespace gravc {

void GcParams::validate() const {
    if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
    if (!(k_damp > 0.0 && k_damp < 1.0))
        throw std::invalid_argument("k_damp must lie in (0,1)");
    if (!(merge_radius > 0.0))
        throw std::invalid_argument("merge_radius must be positive");
    if (!(emission_spread > 0.0))
        throw std::invalid_argument("emission_spread must be positive");
    // mass_threshold == 1 is the deliberately non-robust control setup.
    if (!(mass_threshold >= 1.0))
        throw std::invalid_argument("mass_threshold must be >= 1");
    if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (enumerate_every < 1)
        throw std::invalid_argument("enumerate_every must be >= 1");
    if (!exponent_rule.adaptive && !std::isfinite(exponent_rule.constant_p))
        throw std::invalid_argument("constant exponent must be finite");
}

double exponent(const GcParams& params, std::span<const double> x1,
                std::span<const double> x2) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        const double d = x1[i] - x2[i];
        r2 += d * d;
    }
    return params.exponent_rule(std::sqrt(r2));
}

}  // namespace gravc
