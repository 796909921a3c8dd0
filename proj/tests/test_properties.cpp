#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace siotbridge;

namespace {

constexpr NodeId kNoNode = ~NodeId{0};

std::vector<NodeId> as_vec(const std::set<NodeId>& s) { return {s.begin(), s.end()}; }

bool subset(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NodeId pick_interested(const fixtures::RandomGraph& g, std::mt19937_64& rng) {
    std::vector<NodeId> c;
    for (NodeId v = 0; v < g.interested.size(); ++v) {
        if (g.interested[v]) c.push_back(v);
    }
    return c.empty() ? kNoNode : c[rng() % c.size()];
}

} // namespace

TEST(Property, CommunityMatchesOracle) {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto g = fixtures::random_graph(seed, 40, seed % 2, seed % 3 != 0);
        const NodeId s = pick_interested(g, rng);
        if (s == kNoNode) continue;
        const auto auth = sample_decisions(g.friends.size(), g.policy, seed, 0);
        const int hops = static_cast<int>(rng() % 6);
        DiscoveryContext ctx{&g.friends, g.interested, &auth, hops, g.overlay_ptrs()};
        const auto r = community_of(ctx, s, 3);
        const auto o = oracle::reach(g.friends, g.interested, auth, hops, g.overlay_ptrs(), s);
        EXPECT_EQ(r.community, as_vec(o.community)) << seed;
        EXPECT_EQ(r.direct, as_vec(o.direct)) << seed;
        for (const auto& [v, h] : r.hop_count) EXPECT_EQ(h, o.hop[v]);
    }
}

TEST(Property, OverlaysNeverShrinkReach) {
    std::mt19937_64 rng(12);
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto g = fixtures::random_graph(seed + 1000, 50, true, true);
        const NodeId s = pick_interested(g, rng);
        if (s == kNoNode) continue;
        const auto auth = sample_decisions(g.friends.size(), g.policy, seed, 1);
        ModeInputs plain{&g.friends, g.interested, {}, true, {}};
        ModeInputs enh = plain;
        enh.overlays = g.overlay_ptrs();
        const auto a = run_source(s, plain, auth, 4);
        const auto b = run_source(s, enh, auth, 4);
        EXPECT_TRUE(subset(a.reached_nodes, b.reached_nodes)) << seed;
        EXPECT_GE(b.irn_pct, a.irn_pct);
    }
}

TEST(Property, HopBudgetAndProbabilitiesAreMonotone) {
    std::mt19937_64 rng(13);
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        auto g = fixtures::random_graph(seed + 2000, 45, seed % 2, true);
        const NodeId s = pick_interested(g, rng);
        if (s == kNoNode) continue;
        ModeInputs in{&g.friends, g.interested, {}, true, g.overlay_ptrs()};
        const auto draws = sample_decisions(g.friends.size(), g.policy, seed, 0);
        std::vector<NodeId> prev;
        for (int h = 0; h <= 6; ++h) {
            const auto r = run_source(s, in, draws, h);
            EXPECT_TRUE(subset(prev, r.reached_nodes));
            prev = r.reached_nodes;
        }
        prev.clear();
        for (int k = 0; k <= 10; ++k) {
            const double p = k / 10.0;
            const auto r = run_source(s, in, draws.with_policy({{p}, {1.0}}), 4);
            EXPECT_TRUE(subset(prev, r.reached_nodes)) << seed << " p=" << p;
            prev = r.reached_nodes;
        }
    }
}

TEST(Property, GiantComponentMatchesOracleAndGrowsWithOverlays) {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const auto g = fixtures::random_graph(seed + 3000, 50, true, true);
        if (std::none_of(g.interested.begin(), g.interested.end(), [](auto b) { return b; })) continue;
        const auto ptrs = g.overlay_ptrs();
        const double f = giant_component_pct(g.friends, g.interested);
        const double e = giant_component_pct(g.friends, g.interested, ptrs);
        EXPECT_DOUBLE_EQ(f, oracle::giant_pct(g.friends, g.interested, {}));
        EXPECT_DOUBLE_EQ(e, oracle::giant_pct(g.friends, g.interested, ptrs));
        EXPECT_GE(e, f);
    }
}

TEST(Property, CosineIsSymmetricAndBounded) {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 300; ++i) {
        std::vector<MacroId> a, b;
        for (MacroId k = 1; k <= 8; ++k) {
            if (rng() % 2) a.push_back(k);
            if (rng() % 3 == 0) b.push_back(k);
        }
        const auto da = InterestDescriptor::from_held("a", a), db = InterestDescriptor::from_held("b", b);
        const double c = cosine_similarity(da, db);
        EXPECT_DOUBLE_EQ(c, cosine_similarity(db, da));
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0 + 1e-12);
        if (!a.empty()) EXPECT_NEAR(cosine_similarity(da, da), 1.0, 1e-12);
    }
}

TEST(Property, HaversineSymmetricAndTriangle) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180);
    for (int i = 0; i < 300; ++i) {
        const GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)}, c{lat(rng), lon(rng)};
        EXPECT_NEAR(haversine_m(a, b), haversine_m(b, a), 1e-6);
        EXPECT_LE(haversine_m(a, c), haversine_m(a, b) + haversine_m(b, c) + 1e-6);
        EXPECT_EQ(haversine_m(a, a), 0.0);
    }
}

TEST(Property, UserOverlayIsSymmetricWithoutSelfLoops) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto sc = fixtures::synth(3, 8, 0.2, seed % 5, 0.7, seed, seed % 3, seed % 4);
        const auto o = user_overlay(SiotView(sc.siot, kAllKinds), sc.users);
        for (NodeId u = 0; u < o.size(); ++u) {
            EXPECT_TRUE(std::is_sorted(o[u].begin(), o[u].end()));
            for (NodeId v : o[u]) {
                EXPECT_NE(u, v);
                EXPECT_TRUE(std::binary_search(o[v].begin(), o[v].end(), u));
            }
        }
    }
}

TEST(Property, TtlMonotoneFlood) {
    std::mt19937_64 rng(16);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto sc = fixtures::synth(2, 10, 0.2, 3, 0.8, seed, 2, 2, 0.3);
        const ProtocolEnv env(sc.siot, sc.users, sc.vuips);
        const SiotView view(sc.siot, kTraceKinds);
        const auto dec = sample_decisions(sc.users.size(), {{1.0}, {0.6}}, seed, 0);
        const DeviceIdx src = static_cast<DeviceIdx>(rng() % sc.siot.device_count());
        std::set<DeviceIdx> prev;
        for (int ttl = 1; ttl <= 6; ++ttl) {
            const auto t = propagate_vuip(env, view, src, dec, ttl, seed);
            std::set<DeviceIdx> cur;
            for (const auto& r : t.records) cur.insert(r.holder);
            EXPECT_EQ(cur.size(), t.records.size());
            EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = cur;
        }
    }
}
