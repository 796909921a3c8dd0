#pragma once

// A scenario is the complete input of a campaign: users, friendships, the
// SIoT device graph and interest descriptors. It is stored as a directory:
//
//   friendships.tsv   user_a<TAB>user_b
//   devices.csv       device_id,owner,kind,model,lat,lon
//   siot_edges.csv    device_a,device_b,kind[,interest_id]
//   vuips.csv         owner,macro_id,count,held
//   communities.csv   user,community          (synthetic scenarios only)

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "human_graph.hpp"
#include "interest_model.hpp"
#include "siot_graph.hpp"
#include "trace_ingest.hpp"

namespace siotbridge {

struct Scenario {
    UserIndex users;
    FriendshipGraph friends;
    SiotGraph siot;
    std::map<UserId, InterestDescriptor> vuips;
    std::map<UserId, int> communities; // optional
};

/// Assembles a scenario; the user set is the union of every name mentioned.
inline Scenario make_scenario(const std::set<Friendship>& friendships, SiotGraph siot,
                              std::map<UserId, InterestDescriptor> vuips, std::map<UserId, int> communities = {},
                              std::set<UserId> extra_users = {}) {
    std::set<UserId> names = std::move(extra_users);
    for (const auto& [a, b] : friendships) {
        names.insert(a);
        names.insert(b);
    }
    for (const auto& d : siot.devices()) names.insert(d.owner);
    for (const auto& [u, d] : vuips) names.insert(u);
    for (const auto& [u, c] : communities) names.insert(u);
    Scenario s;
    s.users = UserIndex(std::move(names));
    s.friends = FriendshipGraph(s.users.size());
    for (const auto& [a, b] : friendships) s.friends.add_edge(s.users.id(a), s.users.id(b));
    s.siot = std::move(siot);
    s.vuips = std::move(vuips);
    s.communities = std::move(communities);
    return s;
}

inline std::set<Friendship> friendships_of(const Scenario& s) {
    std::set<Friendship> out;
    for (NodeId u = 0; u < s.users.size(); ++u) {
        for (NodeId v : s.friends.neighbors(u)) {
            if (u < v) out.insert(canonical_pair(s.users.name(u), s.users.name(v)));
        }
    }
    return out;
}

inline void save_scenario(const Scenario& s, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text((dir / "friendships.tsv").string(), friendships_to_tsv(friendships_of(s)));
    write_text((dir / "devices.csv").string(), devices_to_csv(s.siot));
    write_text((dir / "siot_edges.csv").string(), edges_to_csv(s.siot));
    write_text((dir / "vuips.csv").string(), vuips_to_csv(s.vuips));
    if (!s.communities.empty()) {
        std::string c = "user,community\n";
        for (const auto& [u, k] : s.communities) c += u + ',' + std::to_string(k) + '\n';
        write_text((dir / "communities.csv").string(), c);
    }
}

inline Scenario load_scenario(const std::filesystem::path& dir) {
    for (const char* f : {"friendships.tsv", "devices.csv", "siot_edges.csv", "vuips.csv"}) {
        if (!std::filesystem::exists(dir / f)) throw Error("scenario file missing: " + (dir / f).string());
    }
    Warnings w;
    const auto friendships = parse_friendships((dir / "friendships.tsv").string(), w);
    auto siot = siot_graph_from_files((dir / "devices.csv").string(), (dir / "siot_edges.csv").string());
    auto vuips = vuips_from_csv((dir / "vuips.csv").string());
    std::map<UserId, int> communities;
    if (std::filesystem::exists(dir / "communities.csv")) {
        const auto lines = read_lines((dir / "communities.csv").string());
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (trim(lines[i]).empty()) continue;
            const auto f = split(lines[i], ',');
            long long k = 0;
            if (f.size() != 2 || !parse_int(f[1], k)) throw Error("malformed communities.csv row " + std::to_string(i + 1));
            communities[f[0]] = static_cast<int>(k);
        }
    }
    return make_scenario(friendships, std::move(siot), std::move(vuips), std::move(communities));
}

// --- synthetic scenarios ------------------------------------------------------

/// Disjoint friendship communities bridged only by a fixed number of
/// cross-community SIoT edges per kind.
struct SyntheticParams {
    std::size_t communities = 2;
    std::size_t nodes_per_community = 10;
    double intra_friend_prob = 0.3;
    std::size_t cross_por = 1;
    std::size_t cross_clor = 0;
    std::size_t cross_sor = 0;
    MacroId interest = 3;
    double interest_prob = 1.0;       // P(node holds the target interest)
    std::size_t categories = 6;       // category universe 1..categories
    double extra_interest_prob = 0.0; // P(node holds each other category)
    std::uint64_t seed = 1;

    void validate() const {
        for (double p : {intra_friend_prob, interest_prob, extra_interest_prob}) {
            if (!(p >= 0.0 && p <= 1.0)) throw Error("synthetic probability outside [0,1]");
        }
        if (categories < 1) throw Error("synthetic category universe must be non-empty");
        const std::size_t cross = cross_por + cross_clor + cross_sor;
        if (cross > 0 && communities < 2) throw Error("cross-community edges need at least two communities");
    }
};

inline std::string synthetic_user_name(std::size_t i, std::size_t total) {
    const auto width = std::to_string(total > 0 ? total - 1 : 0).size();
    std::string n = std::to_string(i);
    return "u" + std::string(width > n.size() ? width - n.size() : 0, '0') + n;
}

inline Scenario generate_synthetic(const SyntheticParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    const auto uniform = [&rng] { return unit_interval(rng()); };
    const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); };

    const std::size_t total = params.communities * params.nodes_per_community;
    std::vector<std::string> names(total);
    std::map<UserId, int> communities;
    for (std::size_t i = 0; i < total; ++i) {
        names[i] = synthetic_user_name(i, total);
        communities[names[i]] = static_cast<int>(i / std::max<std::size_t>(params.nodes_per_community, 1));
    }

    std::set<Friendship> friendships;
    for (std::size_t c = 0; c < params.communities; ++c) {
        const std::size_t base = c * params.nodes_per_community;
        for (std::size_t i = 0; i < params.nodes_per_community; ++i) {
            for (std::size_t j = i + 1; j < params.nodes_per_community; ++j) {
                if (uniform() < params.intra_friend_prob) friendships.insert(canonical_pair(names[base + i], names[base + j]));
            }
        }
    }

    std::map<UserId, InterestDescriptor> vuips;
    for (std::size_t i = 0; i < total; ++i) {
        std::vector<MacroId> held;
        if (uniform() < params.interest_prob) held.push_back(params.interest);
        for (std::size_t k = 1; k <= params.categories; ++k) {
            if (static_cast<MacroId>(k) == params.interest) continue;
            if (uniform() < params.extra_interest_prob) held.push_back(static_cast<MacroId>(k));
        }
        if (!held.empty()) vuips[names[i]] = InterestDescriptor::from_held(names[i], held);
    }

    SiotGraph g;
    for (std::size_t i = 0; i < total; ++i) {
        const int c = communities[names[i]];
        const GeoPoint home{10.0 + c, 10.0 + 0.01 * static_cast<double>(i % std::max<std::size_t>(params.nodes_per_community, 1))};
        g.add_device({device_id_for(names[i], DeviceKind::Mobile), names[i], DeviceKind::Mobile, "synthetic", std::nullopt});
        g.add_device({device_id_for(names[i], DeviceKind::Fixed), names[i], DeviceKind::Fixed, "synthetic", home});
    }
    for (std::size_t i = 0; i < total; ++i) {
        g.add_edge(static_cast<DeviceIdx>(2 * i), static_cast<DeviceIdx>(2 * i + 1), RelationshipKind::OOR);
    }

    std::set<std::pair<DeviceIdx, DeviceIdx>> cross;
    const auto add_cross = [&](RelationshipKind kind, std::size_t count) {
        const DeviceIdx offset = kind == RelationshipKind::CLOR ? 1 : 0; // C-LOR binds fixed devices
        std::size_t added = 0;
        for (std::size_t attempt = 0; added < count && attempt < count * 1000 + 1000; ++attempt) {
            const std::size_t ca = pick(params.communities);
            std::size_t cb = pick(params.communities - 1);
            if (cb >= ca) ++cb;
            const std::size_t ua = ca * params.nodes_per_community + pick(params.nodes_per_community);
            const std::size_t ub = cb * params.nodes_per_community + pick(params.nodes_per_community);
            DeviceIdx a = static_cast<DeviceIdx>(2 * ua) + offset;
            DeviceIdx b = static_cast<DeviceIdx>(2 * ub) + offset;
            if (b < a) std::swap(a, b);
            if (!cross.insert({a, b}).second) continue;
            g.add_edge(a, b, kind);
            ++added;
        }
        if (added < count) throw Error("could not place the requested cross-community edges");
    };
    if (params.nodes_per_community > 0) {
        add_cross(RelationshipKind::POR, params.cross_por);
        add_cross(RelationshipKind::CLOR, params.cross_clor);
        add_cross(RelationshipKind::SOR, params.cross_sor);
    }

    std::set<UserId> all(names.begin(), names.end());
    return make_scenario(friendships, std::move(g), std::move(vuips), std::move(communities), std::move(all));
}

} // namespace siotbridge
