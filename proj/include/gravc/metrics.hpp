#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gravc/gc.hpp"

namespace gravc {

/// One sampled evaluation instant of a run.
struct EvalPoint {
    int per_cluster_count = 0;  // vectors per cluster seen so far
    int k_hat = 0;
    int k_true = 0;
};

using RunSeries = std::vector<EvalPoint>;

/// Root mean square of (k_hat - k_true), pooled over every evaluation point
/// of every run. Throws std::invalid_argument when there is nothing to pool.
double rmse_k(std::span<const RunSeries> runs);

/// Fraction of evaluation points with k_hat == k_true.
double p_correct(std::span<const RunSeries> runs);

struct CentroidMatch {
    double rmse = 0.0;  // over matched pairs
    int matched = 0;
    int unmatched_estimates = 0;
    int unmatched_truths = 0;
};

/// Greedy nearest matching: repeatedly pair the globally closest
/// (estimate, truth), remove both; RMSE over the matched distances.
/// Unmatched leftovers are counted, not penalized. Returns nullopt when
/// either list is empty (metric undefined).
std::optional<CentroidMatch> rmse_centroids(const std::vector<Vec>& estimates,
                                            const std::vector<Vec>& truths);

/// First 1-indexed step from which the series stays below eps for the rest
/// of the recorded horizon; nullopt if it never settles.
std::optional<int> convergence_time(std::span<const double> series, double eps);

}  // namespace gravc
