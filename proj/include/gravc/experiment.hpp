#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gravc/datagen.hpp"
#include "gravc/diffusion.hpp"
#include "gravc/metrics.hpp"

namespace gravc {

/// Experiment-level GcParams overrides; unset fields keep the experiment's
/// stock values.
struct GcOverrides {
    std::optional<double> g, k_damp, eps_r, r_x, m_min, d_max, dt;
    std::optional<std::string> p;  // "adaptive" or a number
};

struct ExperimentConfig {
    std::string experiment = "single";  // single|distributed|convergence|timing|demo-fig1
    std::string dataset = "data1";      // data1|data2
    std::string noise = "gaussian";     // gaussian|laplace
    std::string contamination = "none"; // none | chi2:<pe> | gauss:<pe>
    std::string mode = "both";          // both|estimates|non-coop
    int runs = 100;
    std::uint64_t seed = 12345;
    std::string out_dir = "out";
    int workers = 0;                    // 0 = hardware concurrency

    // distributed scenario
    int nodes = 10;
    int k_neighbors = 4;
    std::vector<double> node_pe;        // empty = 3x0, 3x5%, 3x10%, 1x20%

    // schedule
    int vectors_per_phase = 50;
    int batch = 10;

    // convergence scenario
    std::vector<double> sigmas = {0.5, 3.0, 7.0};
    int conv_steps = 600;
    double eps_min = 0.5;

    GcOverrides gc;
};

/// Raised for malformed configurations (maps to the usage exit code).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<ClusterSpec> dataset_by_name(const std::string& name);
ContaminationSpec parse_contamination(const std::string& text, int q);
ExchangeMode parse_mode(const std::string& text);

/// Stock engine parameters for an experiment: spec defaults for the dataset
/// dimension, force cutoff 4 for the multi-cluster scenes, plus overrides.
GcParams resolve_params(const ExperimentConfig& cfg, int q,
                        bool multi_cluster_scene);

// ---------------------------------------------------------------------------
// scenario runners (single Monte-Carlo run each; deterministic in run_seed)

struct SingleRunResult {
    RunSeries evals;
    std::vector<double> centroid_rmse;  // per eval point, NaN when undefined
};

SingleRunResult run_single_scenario(const std::vector<ClusterSpec>& specs,
                                    const StreamSchedule& schedule,
                                    NoiseFamily noise,
                                    const ContaminationSpec& contamination,
                                    const GcParams& params,
                                    std::uint64_t run_seed);

struct DistributedRunResult {
    std::vector<RunSeries> node_evals;  // one series per node
    // per-node centroid matching outcomes keyed by per-cluster count:
    // (sum of squared matched distances, matched pair count)
    std::map<int, std::vector<std::pair<double, int>>> centroid_matches;
};

DistributedRunResult run_distributed_scenario(
    const std::vector<ClusterSpec>& specs, const StreamSchedule& schedule,
    const ContaminationSpec& outlier_family, const std::vector<double>& node_pe,
    const NetworkTopology& topology, ExchangeMode mode, const GcParams& params,
    std::uint64_t run_seed);

/// Average probe-to-centroid distance after each step for the single-cluster
/// convergence scenario (features at (3,3), variances 0.3, emission spread
/// sigma).
std::vector<double> run_convergence_scenario(double sigma, int steps,
                                             const GcParams& base,
                                             std::uint64_t run_seed);

struct Fig1RunResult {
    bool reached_five = false;   // median estimate over the last 50 pre-switch steps
    int detected_six_at = -1;    // 1-indexed vector count after the switch, -1 never
    std::vector<int> k_series;
};

/// Fig-1 style replay: five clusters stream round-robin, then a sixth far
/// cluster joins. unit_dump_path, when nonempty, receives one row per probe
/// per step.
Fig1RunResult run_fig1_scenario(std::uint64_t run_seed,
                                const std::string& unit_dump_path = "");

// ---------------------------------------------------------------------------
// experiment orchestration (Monte-Carlo loop + result files)

struct ExperimentSummary {
    double p_corr = 0.0;
    double rmse_k = 0.0;
    double centroid_rmse = 0.0;  // pooled over defined eval points
    int runs = 0;
    std::map<std::string, double> extra;
};

/// Executes the configured experiment and writes series.csv, summary.csv,
/// manifest.txt and timings.csv into cfg.out_dir.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Runs fn(run_index) for every index in [0, runs) on `workers` threads.
/// Outputs must go to per-run slots; aggregation order is then fixed.
void parallel_for_runs(int runs, int workers,
                       const std::function<void(int)>& fn);

std::map<std::string, std::string> manifest_entries(const ExperimentConfig& cfg,
                                                    const GcParams& params);
void write_manifest(const std::string& path,
                    const std::map<std::string, std::string>& entries);

}  // namespace gravc
