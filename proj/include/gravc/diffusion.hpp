#pragma once

#include <optional>
#include <vector>

#include "gravc/gc.hpp"

namespace gravc {

/// Fixed communication graph: every node's neighborhood contains the node
/// itself plus its k nearest peers in placement space.
struct NetworkTopology {
    std::vector<Vec> node_positions;
    std::vector<std::vector<int>> neighborhoods;  // sorted, self included

    int size() const { return static_cast<int>(neighborhoods.size()); }
};

/// neighborhoods[j] = {j} + the k_neighbors nodes closest to j (Euclidean,
/// ties broken by node index). Throws std::invalid_argument if
/// k_neighbors >= J.
NetworkTopology build_topology(const std::vector<Vec>& node_positions,
                               int k_neighbors);

enum class ExchangeMode { FeaturesAndEstimates, EstimatesOnly, NonCooperative };

/// Lower median of a nonempty set of count estimates: for odd cardinality the
/// middle value, for even the lower of the two middle values, so the fused
/// estimate is always one a node actually reported. Throws on empty input.
int fuse_median(std::vector<int> estimates);

/// Synchronous multi-node simulation. Each round runs in five
/// phases with a global barrier between them:
///   1. every node stores (and emits a probe for) its own new vector;
///   2. in FeaturesAndEstimates mode the round's vectors are delivered to all
///      neighbors and ingested there, in ascending origin-node order;
///   3. every node runs one engine step and takes its own count estimate;
///   4. neighbors' intermediate estimates are gathered (skipped when
///      non-cooperative);
///   5. the node's final count is the median of the gathered estimates.
/// Centroid estimates are always the node's own.
class DgcNetwork {
public:
    DgcNetwork(NetworkTopology topology, ExchangeMode mode, int dim,
               const GcParams& params, std::uint64_t master_seed);

    /// One synchronous round; per_node_vector[j] is node j's new observation
    /// (or nullopt when the node sees nothing this round).
    std::vector<ClusterEstimate> round(
        const std::vector<std::optional<Vec>>& per_node_vector);

    const GcEngine& node(int j) const { return nodes_[j]; }
    int size() const { return static_cast<int>(nodes_.size()); }
    ExchangeMode mode() const { return mode_; }

private:
    NetworkTopology topo_;
    ExchangeMode mode_;
    std::vector<GcEngine> nodes_;
};

}  // namespace gravc
