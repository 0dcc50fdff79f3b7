#include <doctest.h>

#include <cmath>
#include <optional>

#include "gravc/datagen.hpp"
#include "gravc/diffusion.hpp"

using namespace gravc;

TEST_CASE("nearest-neighbor topology construction") {
    SUBCASE("collinear nodes") {
        const std::vector<Vec> pos = {{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}};
        const auto topo = build_topology(pos, 1);
        CHECK(topo.neighborhoods[1] == std::vector<int>{0, 1});  // self + nearest
        CHECK(topo.neighborhoods[0] == std::vector<int>{0, 1});
        CHECK(topo.neighborhoods[2] == std::vector<int>{1, 2});
    }

    SUBCASE("k nearest always yields self plus k") {
        Rng rng(11);
        std::vector<Vec> pos;
        for (int j = 0; j < 10; ++j)
            pos.push_back(Vec{rng.uniform01(), rng.uniform01()});
        const auto topo = build_topology(pos, 4);
        for (int j = 0; j < 10; ++j) {
            CHECK(topo.neighborhoods[j].size() == 5);
            bool has_self = false;
            for (int l : topo.neighborhoods[j]) has_self |= (l == j);
            CHECK(has_self);
        }
    }

    SUBCASE("k = 0 degenerates to isolated nodes") {
        const std::vector<Vec> pos = {{0.0, 0.0}, {1.0, 0.0}};
        const auto topo = build_topology(pos, 0);
        CHECK(topo.neighborhoods[0] == std::vector<int>{0});
        CHECK(topo.neighborhoods[1] == std::vector<int>{1});
    }

    SUBCASE("k must stay below the network size") {
        const std::vector<Vec> pos = {{0.0, 0.0}, {1.0, 0.0}};
        CHECK_THROWS_AS(build_topology(pos, 2), std::invalid_argument);
    }
}

TEST_CASE("median fusion") {
    CHECK(fuse_median({5}) == 5);
    CHECK(fuse_median({4, 5, 6}) == 5);
    CHECK(fuse_median({4, 5, 5, 6, 9}) == 5);
    CHECK(fuse_median({4, 5, 6, 9}) == 5);  // lower median on even sets
    CHECK_THROWS_AS(fuse_median({}), std::invalid_argument);
}

TEST_CASE("median fusion survives a corrupted minority") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform01() * 6);  // 3..8
        const int k = 2 + static_cast<int>(rng.uniform01() * 5);
        const int bad = (n - 1) / 2;  // strictly fewer than half
        std::vector<int> est(n, k);
        for (int i = 0; i < bad; ++i)
            est[i] = static_cast<int>(rng.uniform01() * 100);
        CHECK(fuse_median(est) == k);
    }
}

namespace {

std::vector<std::optional<Vec>> wrap(const std::vector<Vec>& vs) {
    std::vector<std::optional<Vec>> out;
    for (const auto& v : vs) out.emplace_back(v);
    return out;
}

}  // namespace

TEST_CASE("a one-node network equals the single-node engine") {
    const auto specs = dataset_data1();
    const GcParams params = GcParams::defaults(2);
    const std::uint64_t master = 555;

    NetworkTopology topo = build_topology({{0.5, 0.5}}, 0);
    DgcNetwork net(topo, ExchangeMode::FeaturesAndEstimates, 2, params, master);
    GcEngine solo(2, params, derive_seed(master, 0));

    Rng data(556);
    for (int t = 0; t < 120; ++t) {
        const Vec x = sample_feature(specs[t % 2], NoiseFamily::Gaussian,
                                     ContaminationSpec::none(), t % 2, data);
        const auto net_est = net.round(wrap({x}));
        solo.ingest(x);
        const auto solo_est = solo.step();
        CHECK(net_est[0].k_hat == solo_est.k_hat);
        CHECK(net_est[0].centroids == solo_est.centroids);
    }
}

TEST_CASE("non-cooperative nodes ignore other nodes' streams") {
    const GcParams params = GcParams::defaults(2);
    std::vector<Vec> pos = {{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}};
    const auto topo = build_topology(pos, 2);

    DgcNetwork neta(topo, ExchangeMode::NonCooperative, 2, params, 777);
    DgcNetwork netb(topo, ExchangeMode::NonCooperative, 2, params, 777);

    Rng shared(71), other1(72), other2(73);
    for (int t = 0; t < 60; ++t) {
        const Vec mine = {shared.normal(), shared.normal()};
        const Vec oa = {other1.normal(), other1.normal()};
        const Vec ob = {other2.normal(), other2.normal()};
        const auto ea = neta.round(wrap({mine, oa, oa}));
        const auto eb = netb.round(wrap({mine, ob, ob}));
        CHECK(ea[0].k_hat == eb[0].k_hat);
        CHECK(ea[0].centroids == eb[0].centroids);
    }
}

TEST_CASE("feature exchange conserves per-node mass") {
    const GcParams params = GcParams::defaults(3);
    Rng prng(17);
    std::vector<Vec> pos;
    for (int j = 0; j < 6; ++j)
        pos.push_back(Vec{prng.uniform01(), prng.uniform01()});
    const auto topo = build_topology(pos, 2);
    DgcNetwork net(topo, ExchangeMode::FeaturesAndEstimates, 3, params, 31);

    Rng data(32);
    const int rounds = 40;
    for (int t = 0; t < rounds; ++t) {
        std::vector<Vec> vecs;
        for (int j = 0; j < 6; ++j)
            vecs.push_back(Vec{data.normal(), data.normal(), data.normal()});
        net.round(wrap(vecs));
    }
    for (int j = 0; j < 6; ++j) {
        const double expected =
            static_cast<double>(rounds) * topo.neighborhoods[j].size();
        CHECK(net.node(j).total_mobile_mass() == expected);  // exact
    }
}

TEST_CASE("exchange modes differ only as specified") {
    // estimates-only and non-cooperative nodes hold identical local states;
    // only the reported count differs (median vs own)
    const GcParams params = GcParams::defaults(2);
    std::vector<Vec> pos = {{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}};
    const auto topo = build_topology(pos, 2);
    DgcNetwork eo(topo, ExchangeMode::EstimatesOnly, 2, params, 99);
    DgcNetwork nc(topo, ExchangeMode::NonCooperative, 2, params, 99);

    Rng data(98);
    for (int t = 0; t < 50; ++t) {
        std::vector<Vec> vecs;
        for (int j = 0; j < 3; ++j) vecs.push_back(Vec{data.normal(), data.normal()});
        const auto ee = eo.round(wrap(vecs));
        const auto en = nc.round(wrap(vecs));
        // same local centroids; the fused count is the median of the locals
        std::vector<int> locals;
        for (int j = 0; j < 3; ++j) {
            CHECK(ee[j].centroids == en[j].centroids);
            locals.push_back(en[j].k_hat);
        }
        for (int j = 0; j < 3; ++j) CHECK(ee[j].k_hat == fuse_median(locals));
    }
}

TEST_CASE("rounds are deterministic") {
    const GcParams params = GcParams::defaults(2);
    std::vector<Vec> pos = {{0.0, 0.0}, {0.4, 0.2}, {0.9, 0.8}, {0.3, 0.7}};
    const auto topo = build_topology(pos, 2);
    DgcNetwork a(topo, ExchangeMode::FeaturesAndEstimates, 2, params, 1234);
    DgcNetwork b(topo, ExchangeMode::FeaturesAndEstimates, 2, params, 1234);
    Rng da(55), db(55);
    for (int t = 0; t < 40; ++t) {
        std::vector<Vec> va, vb;
        for (int j = 0; j < 4; ++j) {
            va.push_back(Vec{da.normal(), da.normal()});
            vb.push_back(Vec{db.normal(), db.normal()});
        }
        const auto ea = a.round(wrap(va));
        const auto eb = b.round(wrap(vb));
        for (int j = 0; j < 4; ++j) {
            CHECK(ea[j].k_hat == eb[j].k_hat);
            CHECK(ea[j].centroids == eb[j].centroids);
        }
    }
}
