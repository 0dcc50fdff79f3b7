#pragma once

// Test-side brute-force replay of the merge pass, kept independent of the
// engine implementation. Semantics: pairwise distances taken once from the
// starting configuration; repeatedly pick the closest remaining pair within
// eps_r (ties by lexicographic index); the member with the smaller mean
// distance to all still-live units (self included, tie keeps the lower
// index) survives with the pair's summed mass and mass-weighted mean
// position/velocity; the other unit and every pending pair referencing it
// are discarded.

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

namespace oracle {

struct Unit {
    std::vector<double> pos;
    std::vector<double> vel;
    double mass = 1.0;
};

inline double dist(const Unit& a, const Unit& b) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < a.pos.size(); ++k) {
        const double d = a.pos[k] - b.pos[k];
        r2 += d * d;
    }
    return std::sqrt(r2);
}

inline std::vector<Unit> combine(std::vector<Unit> units, double eps_r,
                                 std::vector<int>* surviving_indices = nullptr) {
    const int n = static_cast<int>(units.size());
    std::map<std::pair<int, int>, double> original;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            original[{a, b}] = dist(units[a], units[b]);

    std::map<std::pair<int, int>, double> pending;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (original[{a, b}] <= eps_r) pending[{a, b}] = original[{a, b}];

    std::set<int> live;
    for (int i = 0; i < n; ++i) live.insert(i);

    while (!pending.empty()) {
        auto best = pending.begin();
        for (auto it = pending.begin(); it != pending.end(); ++it)
            if (it->second < best->second) best = it;
        const auto [a, b] = best->first;
        pending.erase(best);

        double mean_a = 0.0, mean_b = 0.0;
        for (int j : live) {
            mean_a += original[{a, j}];
            mean_b += original[{b, j}];
        }
        mean_a /= static_cast<double>(live.size());
        mean_b /= static_cast<double>(live.size());

        const int keep = (mean_b < mean_a) ? b : a;
        const int drop = (keep == a) ? b : a;

        const double total = units[keep].mass + units[drop].mass;
        for (std::size_t k = 0; k < units[keep].pos.size(); ++k) {
            units[keep].pos[k] = (units[keep].mass * units[keep].pos[k] +
                                  units[drop].mass * units[drop].pos[k]) /
                                 total;
            units[keep].vel[k] = (units[keep].mass * units[keep].vel[k] +
                                  units[drop].mass * units[drop].vel[k]) /
                                 total;
        }
        units[keep].mass = total;
        live.erase(drop);
        for (auto it = pending.begin(); it != pending.end();) {
            if (it->first.first == drop || it->first.second == drop)
                it = pending.erase(it);
            else
                ++it;
        }
    }

    std::vector<Unit> out;
    for (int i : live) out.push_back(units[i]);
    if (surviving_indices)
        surviving_indices->assign(live.begin(), live.end());
    return out;
}

}  // namespace oracle
