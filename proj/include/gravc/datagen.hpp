#pragma once

#include <string>
#include <vector>

#include "gravc/gc.hpp"
#include "gravc/rng.hpp"

namespace gravc {

enum class NoiseFamily { Gaussian, Laplace };

/// One synthetic cluster: centroid plus per-axis variances of the noise.
struct ClusterSpec {
    Vec centroid;
    Vec variances;
};

/// Additive contamination: with probability p_e an outlier draw is added to
/// the sample. Outliers are either per-cluster signed chi-square draws
/// (positive entry: add a chi-square(|dof|) draw on that axis, negative:
/// subtract one; clusters beyond the table fall back to the Gaussian), or
/// Gaussian with the given mean and per-axis variances.
struct ContaminationSpec {
    enum class Kind { None, ChiSquarePerCluster, Gaussian };
    Kind kind = Kind::None;
    double p_e = 0.0;
    std::vector<std::vector<int>> signed_dofs;  // [cluster][axis]
    Vec outlier_mean;
    Vec outlier_variances;

    static ContaminationSpec none();
    /// The two-dimensional chi-square scheme used with Data-1 (clusters 1-4
    /// signed dofs, cluster 5 Gaussian N(0, 3I)).
    static ContaminationSpec chi_square_data1(double p_e);
    static ContaminationSpec gaussian(double p_e, int q, double variance = 3.0);
};

/// Streaming schedule: phase c feeds the first c clusters round-robin until
/// each has contributed vectors_per_cluster_per_phase new vectors; the
/// ground truth during phase c is c.
struct StreamSchedule {
    int vectors_per_cluster_per_phase = 50;
    int batch_size = 10;  // per-cluster evaluation cadence
    int total_clusters = 0;
};

/// The 5-cluster two-dimensional dataset.
std::vector<ClusterSpec> dataset_data1();
/// The 6-cluster three-dimensional dataset (variances scaled by 0.15).
std::vector<ClusterSpec> dataset_data2();

/// One feature vector from the cluster: centroid + noise, plus an outlier
/// draw with probability p_e. Sets *was_outlier when non-null.
Vec sample_feature(const ClusterSpec& spec, NoiseFamily noise,
                   const ContaminationSpec& contamination, int cluster_index,
                   Rng& rng, bool* was_outlier = nullptr);

struct StreamItem {
    Vec coords;
    int cluster = 0;
    bool outlier = false;
    int k_true = 1;
};

std::vector<StreamItem> make_stream(const std::vector<ClusterSpec>& specs,
                                    const StreamSchedule& schedule,
                                    NoiseFamily noise,
                                    const ContaminationSpec& contamination,
                                    Rng& rng);

/// CSV export, one row per vector: t,node,coords...,true_cluster,is_outlier.
void write_stream_csv(const std::string& path,
                      const std::vector<StreamItem>& items, int node = 0);

}  // namespace gravc
