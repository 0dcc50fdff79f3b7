#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace gravc {

/// Distance exponent of the attraction law: either a fixed p, or the
/// distance-adaptive rule p(r) = log10(r + 1) + 2, which is close to 2 for
/// short ranges and weakens far-away attractors.
struct ExponentRule {
    bool adaptive = true;
    double constant_p = 3.0;

    static ExponentRule adaptive_rule() { return {true, 0.0}; }
    static ExponentRule constant(double p) { return {false, p}; }

    double operator()(double distance) const {
        return adaptive ? std::log10(distance + 1.0) + 2.0 : constant_p;
    }
};

/// Tuning constants of the gravitational clustering engine.
struct GcParams {
    double g = 1.0;                 // gravitational gain
    ExponentRule exponent_rule = ExponentRule::adaptive_rule();
    double k_damp = 0.8;            // viscous damping coefficient, in (0,1)
    double merge_radius = 0.0;      // eps_r; <=0 in defaults() means sqrt(q)
    double emission_spread = 1.0;   // r_x, covariance scale of probe emission
    double mass_threshold = 7.0;    // m_min, minimum mass to count as a cluster
    double cutoff = std::numeric_limits<double>::infinity();  // d_max
    double dt = 1.0;                // integration step
    int enumerate_every = 1;        // enumeration cadence in steps

    /// The defaults used throughout the experiments, with merge_radius
    /// resolved to sqrt(q).
    static GcParams defaults(int q) {
        GcParams p;
        p.merge_radius = std::sqrt(static_cast<double>(q));
        return p;
    }

    /// Throws std::invalid_argument on out-of-range settings.
    /// mass_threshold admits 1.0 (the non-robust control configuration).
    void validate() const;
};

/// Exponent applied to the attraction between the points x1 and x2.
double exponent(const GcParams& params, std::span<const double> x1,
                std::span<const double> x2);

}  // namespace gravc
