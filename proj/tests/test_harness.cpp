#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gravc/experiment.hpp"

using namespace gravc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExperimentConfig tiny_single() {
    ExperimentConfig cfg;
    cfg.experiment = "single";
    cfg.dataset = "data1";
    cfg.runs = 2;
    cfg.vectors_per_phase = 10;
    cfg.batch = 5;
    cfg.seed = 4242;
    cfg.workers = 1;
    return cfg;
}

}  // namespace

TEST_CASE("parameter resolution applies overrides over stock values") {
    ExperimentConfig cfg = tiny_single();
    GcParams p = resolve_params(cfg, 2, true);
    CHECK(p.merge_radius == doctest::Approx(std::sqrt(2.0)));
    CHECK(p.cutoff == 4.0);  // stock cutoff for multi-cluster scenes
    CHECK(p.exponent_rule.adaptive);

    cfg.gc.d_max = 7.5;
    cfg.gc.m_min = 3.0;
    cfg.gc.p = "2";
    p = resolve_params(cfg, 2, true);
    CHECK(p.cutoff == 7.5);
    CHECK(p.mass_threshold == 3.0);
    CHECK(!p.exponent_rule.adaptive);
    CHECK(p.exponent_rule.constant_p == 2.0);

    cfg.gc.p = "bogus";
    CHECK_THROWS_AS(resolve_params(cfg, 2, true), UsageError);
    cfg.gc.p = "adaptive";
    cfg.gc.k_damp = 1.5;
    CHECK_THROWS_AS(resolve_params(cfg, 2, true), UsageError);
}

TEST_CASE("configuration errors surface as usage errors") {
    CHECK_THROWS_AS(dataset_by_name("data3"), UsageError);
    CHECK_THROWS_AS(parse_contamination("chi2:1.5", 2), UsageError);
    CHECK_THROWS_AS(parse_contamination("chi2:0.05", 3), UsageError);
    CHECK_THROWS_AS(parse_contamination("weird:0.05", 2), UsageError);
    CHECK_THROWS_AS(parse_mode("sometimes"), UsageError);
    CHECK_NOTHROW(parse_contamination("gauss:0.05", 3));
    CHECK_NOTHROW(parse_contamination("none", 2));
}

TEST_CASE("experiment runs write the documented files deterministically") {
    ExperimentConfig cfg = tiny_single();
    cfg.out_dir = "harness_out_a";
    const ExperimentSummary s1 = run_experiment(cfg);
    CHECK(s1.runs == 2);
    CHECK(fs::exists("harness_out_a/series.csv"));
    CHECK(fs::exists("harness_out_a/summary.csv"));
    CHECK(fs::exists("harness_out_a/manifest.txt"));
    CHECK(fs::exists("harness_out_a/timings.csv"));

    const std::string header = slurp("harness_out_a/series.csv").substr(0, 38);
    CHECK(header == "per_cluster_count,k_true,mean_khat,std");

    cfg.out_dir = "harness_out_b";
    run_experiment(cfg);
    CHECK(slurp("harness_out_a/series.csv") == slurp("harness_out_b/series.csv"));
    CHECK(slurp("harness_out_a/summary.csv") ==
          slurp("harness_out_b/summary.csv"));
    CHECK(slurp("harness_out_a/manifest.txt") ==
          slurp("harness_out_b/manifest.txt"));

    // the manifest pins the resolved configuration
    const std::string manifest = slurp("harness_out_a/manifest.txt");
    CHECK(manifest.find("dataset=data1") != std::string::npos);
    CHECK(manifest.find("d_max=4") != std::string::npos);
    CHECK(manifest.find("seed=4242") != std::string::npos);

    fs::remove_all("harness_out_a");
    fs::remove_all("harness_out_b");
}

TEST_CASE("worker count does not change the aggregated results") {
    ExperimentConfig cfg = tiny_single();
    cfg.runs = 4;
    cfg.workers = 1;
    cfg.out_dir = "harness_w1";
    run_experiment(cfg);
    cfg.workers = 4;
    cfg.out_dir = "harness_w4";
    run_experiment(cfg);
    CHECK(slurp("harness_w1/series.csv") == slurp("harness_w4/series.csv"));
    CHECK(slurp("harness_w1/summary.csv") == slurp("harness_w4/summary.csv"));
    fs::remove_all("harness_w1");
    fs::remove_all("harness_w4");
}

TEST_CASE("timing runs record growing cost and cutoff pruning") {
    ExperimentConfig cfg;
    cfg.experiment = "timing";
    cfg.dataset = "data1";
    cfg.runs = 1;
    cfg.vectors_per_phase = 30;
    cfg.batch = 10;
    cfg.seed = 9;
    cfg.out_dir = "harness_timing";
    const ExperimentSummary s = run_experiment(cfg);

    CHECK(s.extra.at("pruning_reduces_terms") == 1.0);
    CHECK(s.extra.at("force_terms_dmax_5") <
          s.extra.at("force_terms_dmax_inf"));

    // per-batch rows: wall clock nonzero, force terms grow with the stored set
    std::ifstream f("harness_timing/series.csv");
    std::string line;
    std::getline(f, line);  // header
    double first_terms = -1.0, last_terms = 0.0;
    double max_wall = 0.0;
    int rows = 0;
    while (std::getline(f, line)) {
        std::istringstream ss(line);
        std::string cutoff, bi, cum, wall, terms;
        std::getline(ss, cutoff, ',');
        std::getline(ss, bi, ',');
        std::getline(ss, cum, ',');
        std::getline(ss, wall, ',');
        std::getline(ss, terms, ',');
        if (cutoff == "-1") {  // the uncut pass
            if (first_terms < 0) first_terms = std::stod(terms);
            last_terms = std::stod(terms);
        }
        max_wall = std::max(max_wall, std::stod(wall));
        ++rows;
    }
    CHECK(rows > 0);
    CHECK(max_wall > 0.0);
    CHECK(last_terms > first_terms);  // cost grows with the stored history
    fs::remove_all("harness_timing");
}

TEST_CASE("demo replay dumps per-step probe state for animation") {
    ExperimentConfig cfg;
    cfg.experiment = "demo-fig1";
    cfg.runs = 1;
    cfg.seed = 77;
    cfg.out_dir = "harness_fig1";
    const ExperimentSummary s = run_experiment(cfg);
    CHECK(s.extra.count("replay_pass_fraction") == 1);

    std::ifstream f("harness_fig1/fig1_units.csv");
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "t,x0,x1,mass,is_cluster");
    std::size_t rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows > 500);  // at least one probe row per step
    fs::remove_all("harness_fig1");
}

TEST_CASE("convergence experiment reports per-sigma settling") {
    ExperimentConfig cfg;
    cfg.experiment = "convergence";
    cfg.runs = 3;
    cfg.sigmas = {0.5, 3.0};
    cfg.conv_steps = 250;
    cfg.seed = 21;
    cfg.out_dir = "harness_conv";
    const ExperimentSummary s = run_experiment(cfg);
    CHECK(s.extra.at("unconverged_sigma_0.5") == 0.0);
    CHECK(s.extra.at("unconverged_sigma_3") == 0.0);
    CHECK(s.extra.at("mean_steps_sigma_0.5") <=
          s.extra.at("mean_steps_sigma_3"));
    fs::remove_all("harness_conv");
}
