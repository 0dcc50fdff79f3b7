#include "gravc/datagen.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace gravc {

ContaminationSpec ContaminationSpec::none() { return {}; }

ContaminationSpec ContaminationSpec::chi_square_data1(double p_e) {
    ContaminationSpec c;
    c.kind = Kind::ChiSquarePerCluster;
    c.p_e = p_e;
    // cluster 1: add chi2(3) on both axes; cluster 2: subtract chi2(5);
    // cluster 3: add chi2(4) on x, subtract chi2(1) on y;
    // cluster 4: add chi2(2) on x, subtract chi2(3) on y;
    // cluster 5 falls back to Gaussian N(0, 3I).
    c.signed_dofs = {{3, 3}, {-5, -5}, {4, -1}, {2, -3}};
    c.outlier_mean = {0.0, 0.0};
    c.outlier_variances = {3.0, 3.0};
    return c;
}

ContaminationSpec ContaminationSpec::gaussian(double p_e, int q, double variance) {
    ContaminationSpec c;
    c.kind = Kind::Gaussian;
    c.p_e = p_e;
    c.outlier_mean.assign(q, 0.0);
    c.outlier_variances.assign(q, variance);
    return c;
}

std::vector<ClusterSpec> dataset_data1() {
    return {
        {{-1.0, 0.0}, {0.2, 0.4}},
        {{4.0, 0.0}, {0.6, 0.6}},
        {{0.0, 5.0}, {0.4, 0.2}},
        {{9.0, 4.0}, {0.2, 0.2}},
        {{3.0, 9.0}, {0.3, 0.5}},
    };
}

std::vector<ClusterSpec> dataset_data2() {
    const double alpha = 0.15;
    std::vector<ClusterSpec> specs = {
        {{-1.0, 0.0, 7.0}, {0.2, 0.4, 0.2}},
        {{3.0, 0.0, 8.0}, {0.6, 0.3, 0.5}},
        {{0.0, 5.0, 1.0}, {0.4, 0.2, 0.1}},
        {{9.0, 4.0, 4.0}, {0.3, 0.3, 0.3}},
        {{3.0, 9.0, 5.0}, {0.3, 0.5, 0.3}},
        {{5.0, 5.0, 1.55}, {0.4, 0.4, 0.4}},
    };
    for (auto& s : specs)
        for (double& v : s.variances) v *= alpha;
    return specs;
}

Vec sample_feature(const ClusterSpec& spec, NoiseFamily noise,
                   const ContaminationSpec& contamination, int cluster_index,
                   Rng& rng, bool* was_outlier) {
    const int q = static_cast<int>(spec.centroid.size());
    Vec x = spec.centroid;
    for (int k = 0; k < q; ++k) {
        const double var = spec.variances[k];
        if (noise == NoiseFamily::Gaussian) {
            x[k] += std::sqrt(var) * rng.normal();
        } else {
            x[k] += rng.laplace(std::sqrt(var / 2.0));  // variance-matched scale
        }
    }

    bool outlier = false;
    if (contamination.kind != ContaminationSpec::Kind::None &&
        contamination.p_e > 0.0 && rng.uniform01() < contamination.p_e) {
        outlier = true;
        const bool chi =
            contamination.kind == ContaminationSpec::Kind::ChiSquarePerCluster &&
            cluster_index < static_cast<int>(contamination.signed_dofs.size());
        if (chi) {
            const auto& dofs = contamination.signed_dofs[cluster_index];
            for (int k = 0; k < q; ++k) {
                const int sd = dofs[k];
                const double draw = rng.chi_square(std::abs(sd));
                x[k] += (sd < 0) ? -draw : draw;
            }
        } else {
            for (int k = 0; k < q; ++k) {
                x[k] += contamination.outlier_mean[k] +
                        std::sqrt(contamination.outlier_variances[k]) * rng.normal();
            }
        }
    }
    if (was_outlier) *was_outlier = outlier;
    return x;
}

std::vector<StreamItem> make_stream(const std::vector<ClusterSpec>& specs,
                                    const StreamSchedule& schedule,
                                    NoiseFamily noise,
                                    const ContaminationSpec& contamination,
                                    Rng& rng) {
    if (schedule.total_clusters > static_cast<int>(specs.size()))
        throw std::invalid_argument("schedule references more clusters than specs");
    std::vector<StreamItem> out;
    for (int phase = 1; phase <= schedule.total_clusters; ++phase) {
        for (int i = 0; i < schedule.vectors_per_cluster_per_phase; ++i) {
            for (int c = 0; c < phase; ++c) {
                StreamItem item;
                item.coords = sample_feature(specs[c], noise, contamination, c,
                                             rng, &item.outlier);
                item.cluster = c;
                item.k_true = phase;
                out.push_back(std::move(item));
            }
        }
    }
    return out;
}

void write_stream_csv(const std::string& path,
                      const std::vector<StreamItem>& items, int node) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    const int q = items.empty() ? 0 : static_cast<int>(items[0].coords.size());
    f << "t,node";
    for (int k = 0; k < q; ++k) f << ",x" << k;
    f << ",true_cluster,is_outlier\n";
    f.precision(17);
    for (std::size_t t = 0; t < items.size(); ++t) {
        f << t + 1 << ',' << node;
        for (double c : items[t].coords) f << ',' << c;
        f << ',' << items[t].cluster + 1 << ',' << (items[t].outlier ? 1 : 0)
          << '\n';
    }
}

}  // namespace gravc
