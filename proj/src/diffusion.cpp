#include "gravc/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravc {

NetworkTopology build_topology(const std::vector<Vec>& node_positions,
                               int k_neighbors) {
    const int n = static_cast<int>(node_positions.size());
    if (k_neighbors < 0 || k_neighbors >= n)
        throw std::invalid_argument("k_neighbors must be < number of nodes");

    NetworkTopology topo;
    topo.node_positions = node_positions;
    topo.neighborhoods.resize(n);
    for (int j = 0; j < n; ++j) {
        std::vector<std::pair<double, int>> by_dist;
        by_dist.reserve(n - 1);
        for (int l = 0; l < n; ++l) {
            if (l == j) continue;
            double r2 = 0.0;
            for (std::size_t k = 0; k < node_positions[j].size(); ++k) {
                const double d = node_positions[j][k] - node_positions[l][k];
                r2 += d * d;
            }
            by_dist.emplace_back(r2, l);
        }
        std::sort(by_dist.begin(), by_dist.end());  // index breaks distance ties
        auto& hood = topo.neighborhoods[j];
        hood.push_back(j);
        for (int i = 0; i < k_neighbors; ++i) hood.push_back(by_dist[i].second);
        std::sort(hood.begin(), hood.end());
    }
    return topo;
}

int fuse_median(std::vector<int> estimates) {
    if (estimates.empty())
        throw std::invalid_argument("fuse_median: empty estimate set");
    std::sort(estimates.begin(), estimates.end());
    return estimates[(estimates.size() - 1) / 2];  // lower median
}

DgcNetwork::DgcNetwork(NetworkTopology topology, ExchangeMode mode, int dim,
                       const GcParams& params, std::uint64_t master_seed)
    : topo_(std::move(topology)), mode_(mode) {
    nodes_.reserve(topo_.size());
    for (int j = 0; j < topo_.size(); ++j)
        nodes_.emplace_back(dim, params, derive_seed(master_seed, j));
}

std::vector<ClusterEstimate> DgcNetwork::round(
    const std::vector<std::optional<Vec>>& per_node_vector) {
    const int n = size();
    if (static_cast<int>(per_node_vector.size()) != n)
        throw std::invalid_argument("round: expected one entry per node");

    // phase 1: every node stores its own observation
    for (int j = 0; j < n; ++j)
        if (per_node_vector[j]) nodes_[j].ingest(*per_node_vector[j]);

    // phase 2: feature exchange within neighborhoods
    if (mode_ == ExchangeMode::FeaturesAndEstimates) {
        for (int j = 0; j < n; ++j) {
            for (int l : topo_.neighborhoods[j]) {
                if (l == j || !per_node_vector[l]) continue;
                nodes_[j].ingest(*per_node_vector[l]);
            }
        }
    }

    // phase 3: local adaptation
    std::vector<ClusterEstimate> local(n);
    std::vector<int> k0(n);
    for (int j = 0; j < n; ++j) {
        local[j] = nodes_[j].step();
        k0[j] = local[j].k_hat;
    }

    // phases 4-5: gather neighbor estimates, combine by median
    std::vector<ClusterEstimate> out = std::move(local);
    if (mode_ != ExchangeMode::NonCooperative) {
        for (int j = 0; j < n; ++j) {
            std::vector<int> gathered;
            gathered.reserve(topo_.neighborhoods[j].size());
            for (int l : topo_.neighborhoods[j]) gathered.push_back(k0[l]);
            out[j].k_hat = fuse_median(std::move(gathered));
        }
    }
    return out;
}

}  // namespace gravc
