#pragma once

// Random fixture generators shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "siotbridge/siotbridge.hpp"

namespace fixtures {

using namespace siotbridge;

struct RandomGraph {
    FriendshipGraph friends{0};
    std::vector<std::uint8_t> interested;
    AuthorizationPolicy policy;
    std::vector<ContactOverlay> overlays;
    std::uint64_t seed = 0;

    std::vector<const ContactOverlay*> overlay_ptrs() const {
        std::vector<const ContactOverlay*> v;
        for (const auto& o : overlays) v.push_back(&o);
        return v;
    }
};

inline double uniform(std::mt19937_64& rng) { return unit_interval(rng()); }

inline std::vector<double> random_probs(std::mt19937_64& rng, bool non_increasing) {
    std::vector<double> v(1 + rng() % 4);
    for (auto& p : v) p = std::floor(uniform(rng) * 11.0) / 10.0;
    if (non_increasing) std::sort(v.rbegin(), v.rend());
    return v;
}

inline ContactOverlay random_overlay(std::mt19937_64& rng, std::size_t n, double p) {
    ContactOverlay o(n);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (uniform(rng) < p) {
                o[u].push_back(v);
                o[v].push_back(u);
            }
        }
    }
    return o;
}

/// Erdos-Renyi friendships, random interest flags, per-hop policy and
/// optional overlays.
inline RandomGraph random_graph(std::uint64_t seed, std::size_t max_nodes, bool with_overlays, bool monotone_policy) {
    std::mt19937_64 rng(seed);
    RandomGraph g;
    g.seed = seed;
    const std::size_t n = 1 + rng() % max_nodes;
    g.friends = FriendshipGraph(n);
    const double p = uniform(rng) * std::min(1.0, 4.0 / static_cast<double>(n));
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (uniform(rng) < p) g.friends.add_edge(u, v);
        }
    }
    const double ip = uniform(rng);
    g.interested.resize(n);
    for (auto& b : g.interested) b = uniform(rng) < ip;
    g.policy = {random_probs(rng, monotone_policy), random_probs(rng, monotone_policy)};
    if (with_overlays) {
        const std::size_t k = 1 + rng() % 2;
        for (std::size_t i = 0; i < k; ++i) g.overlays.push_back(random_overlay(rng, n, uniform(rng) * 2.0 / static_cast<double>(n)));
    }
    return g;
}

inline Scenario synth(std::size_t communities, std::size_t nodes, double intra, std::size_t cross_por,
                      double interest_prob, std::uint64_t seed, std::size_t cross_clor = 0, std::size_t cross_sor = 0,
                      double extra = 0.0) {
    SyntheticParams s;
    s.communities = communities;
    s.nodes_per_community = nodes;
    s.intra_friend_prob = intra;
    s.cross_por = cross_por;
    s.cross_clor = cross_clor;
    s.cross_sor = cross_sor;
    s.interest_prob = interest_prob;
    s.extra_interest_prob = extra;
    s.seed = seed;
    return generate_synthetic(s);
}

/// Friend chain s-a-b-c with ten leaves d01..d10 on c (hop 4 from s). A
/// non-interested hub h links s's phone to every leaf phone by POR.
inline Scenario hop_fixture() {
    std::set<Friendship> friends{canonical_pair("s", "a"), canonical_pair("a", "b"), canonical_pair("b", "c")};
    std::vector<std::string> names{"s", "a", "b", "c", "h"};
    for (int i = 1; i <= 10; ++i) {
        const auto d = std::string(i < 10 ? "d0" : "d") + std::to_string(i);
        friends.insert(canonical_pair("c", d));
        names.push_back(d);
    }
    SiotGraph g;
    std::map<UserId, InterestDescriptor> vuips;
    for (const auto& n : names) {
        g.add_device({device_id_for(n, DeviceKind::Mobile), n, DeviceKind::Mobile, "m", std::nullopt});
        vuips[n] = InterestDescriptor::from_held(n, n == "h" ? std::vector<MacroId>{1} : std::vector<MacroId>{3});
    }
    g.add_edge(0, 4, RelationshipKind::POR);
    for (DeviceIdx d = 5; d < g.device_count(); ++d) g.add_edge(4, d, RelationshipKind::POR);
    return make_scenario(friends, std::move(g), std::move(vuips));
}

/// Scratch directory under the build tree, emptied on creation.
inline std::string temp_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("siotbridge_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace fixtures
