#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gravc/params.hpp"
#include "gravc/rng.hpp"

namespace gravc {

using Vec = std::vector<double>;

/// Snapshot of one mobile probe.
struct MobileUnit {
    Vec position;
    Vec velocity;
    double mass = 1.0;
};

/// Result of the cluster enumeration: the probes whose accumulated mass
/// reached the threshold, read as cluster count plus centroid estimates.
struct ClusterEstimate {
    int k_hat = 0;
    std::vector<Vec> centroids;
    std::vector<double> masses;
};

/// Single-node gravitational clustering engine.
///
/// Stored feature vectors act as immovable unit-mass attractors. Each
/// ingested vector also emits one mobile probe nearby; probes move in the
/// attraction field, merge when they come within the merge radius, and a
/// probe whose merged mass reaches the threshold marks a cluster.
///
/// Attraction on a probe of mass m at x:
///     f = g * m * mean over visible attractors d of (d - x) / max(r, 1)^p(r)
/// where r = ||d - x||, visible means 0 < r <= cutoff, and p follows the
/// configured exponent rule. The mean (rather than the raw sum) keeps the
/// field scale independent of how many vectors have been stored, and the
/// unit-distance floor in the denominator makes the near field linear in r,
/// so probes settle onto dense regions instead of being slingshotted by
/// close encounters. Exactly coincident attractors are skipped.
///
/// Velocity update per step: v <- v + (f/m - k_damp * v) * dt, then
/// x <- x + v * dt, all probes synchronously from the pre-step state.
///
/// Not thread-safe; one writer per engine. Distinct engines are independent.
class GcEngine {
public:
    GcEngine(int dim, GcParams params, std::uint64_t seed);

    /// Stores coords as a fixed attractor and emits one probe with mass 1,
    /// velocity 0, position drawn from N(coords, emission_spread * I).
    void ingest(std::span<const double> coords);

    /// One integration step (synchronous force/velocity/position update),
    /// followed by the merge pass. Enumeration refreshes every
    /// enumerate_every steps; off-cadence steps return the last enumeration.
    ClusterEstimate step();

    /// Current enumeration without advancing the dynamics.
    ClusterEstimate estimate() const;

    /// Total attraction on a probe of the given mass at the given position.
    Vec gravitational_force(std::span<const double> position, double mass) const;

    /// Merge pass (Algorithm "combine mobile mass units"): from the pairwise
    /// distances of the current probe positions, repeatedly take the closest
    /// remaining pair within merge_radius; the member with the smaller mean
    /// distance to all live probes survives, carrying the pair's summed mass
    /// and the mass-weighted mean position and velocity; the other probe and
    /// every pending pair referencing it are dropped. Distances are not
    /// recomputed within a pass.
    void combine_units();

    /// Places a probe directly (tests and demo dumps; normal operation emits
    /// probes via ingest()).
    void add_mobile_unit(Vec position, Vec velocity, double mass);

    int dim() const { return q_; }
    const GcParams& params() const { return params_; }
    std::size_t fixed_count() const { return fixed_.size() / q_; }
    std::size_t mobile_count() const { return mass_.size(); }
    std::uint64_t emission_count() const { return emissions_; }
    double total_mobile_mass() const;
    std::vector<MobileUnit> mobile_units() const;
    std::span<const double> fixed_flat() const { return fixed_; }

    /// Attraction terms that actually contributed (in range, not skipped)
    /// since construction. Grows with the stored history; a finite cutoff
    /// prunes it.
    std::uint64_t force_terms() const { return force_terms_; }

private:
    int q_;
    GcParams params_;
    std::uint64_t seed_;
    Rng rng_;
    std::uint64_t emissions_ = 0;
    std::uint64_t steps_ = 0;
    mutable std::uint64_t force_terms_ = 0;

    std::vector<double> fixed_;  // attractor coords, q-strided
    std::vector<double> pos_;    // probe positions, q-strided
    std::vector<double> vel_;    // probe velocities, q-strided
    std::vector<double> mass_;
    ClusterEstimate last_estimate_;

    // scratch for the synchronous update
    std::vector<double> accel_;

    void field_at(const double* x, double* out) const;
};

/// Viscous damping force opposing the probe's current velocity.
Vec damping_force(std::span<const double> velocity, double k_damp);

/// Feeds every vector through ingest-then-step and collects the estimates.
std::vector<ClusterEstimate> run_stream(GcEngine& engine,
                                        std::span<const Vec> stream);

}  // namespace gravc
