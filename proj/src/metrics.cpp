#include "gravc/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gravc {

double rmse_k(std::span<const RunSeries> runs) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const RunSeries& run : runs) {
        for (const EvalPoint& p : run) {
            const double e = p.k_hat - p.k_true;
            sum += e * e;
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("rmse_k: no evaluation points");
    return std::sqrt(sum / static_cast<double>(count));
}

double p_correct(std::span<const RunSeries> runs) {
    std::size_t correct = 0, count = 0;
    for (const RunSeries& run : runs) {
        for (const EvalPoint& p : run) {
            correct += (p.k_hat == p.k_true) ? 1 : 0;
            ++count;
        }
    }
    if (count == 0)
        throw std::invalid_argument("p_correct: no evaluation points");
    return static_cast<double>(correct) / static_cast<double>(count);
}

std::optional<CentroidMatch> rmse_centroids(const std::vector<Vec>& estimates,
                                            const std::vector<Vec>& truths) {
    if (estimates.empty() || truths.empty()) return std::nullopt;

    std::vector<char> est_used(estimates.size(), 0);
    std::vector<char> tru_used(truths.size(), 0);
    CentroidMatch result;
    double sum_sq = 0.0;
    const std::size_t pairs = std::min(estimates.size(), truths.size());
    for (std::size_t round = 0; round < pairs; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t be = 0, bt = 0;
        for (std::size_t e = 0; e < estimates.size(); ++e) {
            if (est_used[e]) continue;
            for (std::size_t t = 0; t < truths.size(); ++t) {
                if (tru_used[t]) continue;
                double r2 = 0.0;
                for (std::size_t k = 0; k < truths[t].size(); ++k) {
                    const double d = estimates[e][k] - truths[t][k];
                    r2 += d * d;
                }
                if (r2 < best) {
                    best = r2;
                    be = e;
                    bt = t;
                }
            }
        }
        est_used[be] = 1;
        tru_used[bt] = 1;
        sum_sq += best;
        ++result.matched;
    }
    result.rmse = std::sqrt(sum_sq / static_cast<double>(result.matched));
    result.unmatched_estimates = static_cast<int>(estimates.size() - pairs);
    result.unmatched_truths = static_cast<int>(truths.size() - pairs);
    return result;
}

std::optional<int> convergence_time(std::span<const double> series, double eps) {
    if (series.empty()) return std::nullopt;
    // last index where the series is at or above eps
    std::ptrdiff_t last_bad = -1;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(series.size()); ++i)
        if (!(series[i] < eps)) last_bad = i;
    if (last_bad + 1 >= static_cast<std::ptrdiff_t>(series.size()))
        return std::nullopt;  // never settles within the horizon
    return static_cast<int>(last_bad + 2);  // 1-indexed first settled step
}

}  // namespace gravc
