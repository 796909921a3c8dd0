#pragma once

// Anonymous, TTL-bounded interest-descriptor propagation over the SIoT graph
// and backward C-IOR establishment.
//
// A source device floods an owner-stripped copy of its owner's descriptor to
// its SIoT neighbors. Each device keeps only (token_id, previous_hop). A
// receiver whose owner's descriptor is similar enough (and, when scoped,
// holds the target interest) sends a request carrying its own identity back
// along the previous_hop chain; the source then binds a C-IOR edge to it.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "common.hpp"
#include "human_graph.hpp"
#include "interest_model.hpp"
#include "siot_graph.hpp"

namespace siotbridge {

inline constexpr int kDefaultTtl = 6;
inline constexpr double kDefaultSimThreshold = 0.5;
// Similarity comparisons tolerate rounding at the threshold.
inline constexpr double kSimTolerance = 1e-12;

struct VuipToken {
    std::uint64_t token_id = 0;
    InterestDescriptor payload; // owner stripped
    int ttl = kDefaultTtl;
};

struct RelayRecord {
    DeviceIdx holder = 0;
    std::uint64_t token_id = 0;
    DeviceIdx previous_hop = 0;
    int received_ttl = 0;
    int hop = 0;
};

struct CiorRequest {
    DeviceIdx requester = 0;
    std::uint64_t token_id = 0;
};

/// What an intermediate device sees while relaying a request backwards.
struct BackwardMessage {
    DeviceIdx from = 0;
    DeviceIdx to = 0;
    std::uint64_t token_id = 0;
    DeviceIdx requester = 0;
};

struct CiorLink {
    DeviceIdx source = 0;
    DeviceIdx requester = 0;
    std::vector<MacroId> interests;
    std::vector<BackwardMessage> path; // requester -> ... -> source

    std::size_t walk_length() const noexcept { return path.size(); }
};

struct PropagationTrace {
    std::uint64_t token_id = 0;
    VuipToken token;
    std::vector<RelayRecord> records; // in delivery order
    std::vector<DeviceIdx> evaluated; // devices that evaluated the token
    std::vector<CiorLink> established;

    // Simulator bookkeeping, never part of a message.
    DeviceIdx origin = 0;

    std::optional<int> hop_of(DeviceIdx d) const {
        for (const auto& r : records) {
            if (r.holder == d) return r.hop;
        }
        return std::nullopt;
    }
    const RelayRecord* record_of(DeviceIdx d) const {
        for (const auto& r : records) {
            if (r.holder == d) return &r;
        }
        return nullptr;
    }
};

/// Device ownership and descriptors resolved against a user index.
class ProtocolEnv {
public:
    ProtocolEnv(const SiotGraph& graph, const UserIndex& users, const std::map<UserId, InterestDescriptor>& vuips)
        : graph_(&graph), owner_(graph.device_count()), vuip_(users.size(), &empty_) {
        for (DeviceIdx d = 0; d < graph.device_count(); ++d) {
            if (users.contains(graph.device(d).owner)) owner_[d] = users.id(graph.device(d).owner);
        }
        for (const auto& [name, desc] : vuips) {
            if (users.contains(name)) vuip_[users.id(name)] = &desc;
        }
    }

    const SiotGraph& graph() const noexcept { return *graph_; }
    std::optional<NodeId> owner(DeviceIdx d) const { return owner_.at(d); }
    const InterestDescriptor& vuip(NodeId u) const { return *vuip_.at(u); }

    std::vector<DeviceIdx> origin_devices(const UserIndex& users, NodeId user, bool both) const {
        const auto [m, f] = graph_->devices_of(users.name(user));
        std::vector<DeviceIdx> out;
        if (m) out.push_back(*m);
        if (f && (both || !m)) out.push_back(*f);
        return out;
    }

private:
    const SiotGraph* graph_;
    std::vector<std::optional<NodeId>> owner_;
    std::vector<const InterestDescriptor*> vuip_;
    InterestDescriptor empty_;
};

namespace detail {

/// Breadth-first flood with duplicate suppression. `on_receive(holder,
/// previous, hop)` fires once per device.
template <typename Forwards, typename OnReceive>
void flood(const SiotView& view, DeviceIdx source, int ttl, Forwards&& forwards, std::vector<int>& hop,
           std::vector<DeviceIdx>& queue, OnReceive&& on_receive) {
    if (hop.size() != view.graph().device_count()) hop.assign(view.graph().device_count(), kUnreached);
    queue.clear();
    hop[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const DeviceIdx u = queue[head];
        const int h = hop[u];
        if (h >= ttl) continue; // expired
        if (u != source && !forwards(u, h)) continue;
        view.for_each_neighbor(u, [&](DeviceIdx v) {
            if (hop[v] != kUnreached) return;
            hop[v] = h + 1;
            queue.push_back(v);
            on_receive(v, u, h + 1);
        });
    }
    for (auto d : queue) hop[d] = kUnreached;
}

} // namespace detail

/// Forwarding decision of a device: its owner's coupled draw at `hop`.
inline auto forward_decider(const ProtocolEnv& env, const AuthorizationMap& decisions) {
    return [&env, &decisions](DeviceIdx d, int hop) {
        const auto o = env.owner(d);
        return o && decisions.forwards(*o, hop);
    };
}

inline VuipToken make_token(const InterestDescriptor& owner_vuip, std::uint64_t token_id, int ttl) {
    return {token_id, owner_vuip.anonymized(), ttl};
}

/// Floods the source owner's descriptor from `source` over `view`.
inline PropagationTrace propagate_vuip(const ProtocolEnv& env, const SiotView& view, DeviceIdx source,
                                       const AuthorizationMap& decisions, int ttl, std::uint64_t token_id) {
    if (source >= view.graph().device_count()) throw Error("unknown source device");
    if (ttl < 1) throw Error("ttl must be >= 1");
    PropagationTrace t;
    t.token_id = token_id;
    t.origin = source;
    const auto owner = env.owner(source);
    t.token = make_token(owner ? env.vuip(*owner) : InterestDescriptor{}, token_id, ttl);
    std::vector<int> hop;
    std::vector<DeviceIdx> queue;
    detail::flood(view, source, ttl, forward_decider(env, decisions), hop, queue,
                  [&](DeviceIdx holder, DeviceIdx prev, int h) {
                      t.records.push_back({holder, token_id, prev, ttl - h, h});
                      t.evaluated.push_back(holder);
                  });
    return t;
}

/// Seeded overload: token id and forwarding draws keyed by (seed, replicate).
inline PropagationTrace propagate_vuip(const ProtocolEnv& env, const SiotView& view, DeviceIdx source,
                                       const AuthorizationPolicy& policy, int ttl, std::uint64_t seed,
                                       std::uint64_t replicate, std::size_t user_count) {
    const auto decisions = sample_decisions(user_count, policy, seed, replicate);
    const auto token = couple_randomness(seed, replicate).bits(DecisionStreams::kToken, source);
    return propagate_vuip(env, view, source, decisions, ttl, token);
}

/// Gate for one receiver: similarity at or above threshold and, when scoped,
/// the target interest held by the receiver.
inline bool accepts(const InterestDescriptor& receiver, const InterestDescriptor& payload, double sim_threshold,
                    std::optional<MacroId> interest) {
    if (interest && !has_interest(receiver, *interest)) return false;
    return cosine_similarity(receiver, payload) >= sim_threshold - kSimTolerance;
}

/// Requests from every receiver passing the gate. The source owner's own
/// devices never request.
inline std::vector<CiorRequest> evaluate_candidates(const PropagationTrace& trace, const ProtocolEnv& env,
                                                    double sim_threshold = kDefaultSimThreshold,
                                                    std::optional<MacroId> interest = std::nullopt) {
    const auto source_owner = env.owner(trace.origin);
    std::vector<CiorRequest> out;
    for (const auto& r : trace.records) {
        const auto o = env.owner(r.holder);
        if (!o || o == source_owner) continue;
        if (accepts(env.vuip(*o), trace.token.payload, sim_threshold, interest)) {
            out.push_back({r.holder, trace.token_id});
        }
    }
    return out;
}

/// Walks the request back along previous_hop links to the source.
inline CiorLink backpropagate(const CiorRequest& request, const PropagationTrace& trace,
                              std::vector<MacroId> interests = {}) {
    if (request.token_id != trace.token_id) throw Error("request token does not match trace");
    CiorLink link;
    link.requester = request.requester;
    link.interests = std::move(interests);
    DeviceIdx cur = request.requester;
    std::size_t guard = 0;
    while (cur != trace.origin) {
        const RelayRecord* r = trace.record_of(cur);
        if (!r || ++guard > trace.records.size()) throw Error("internal error: broken relay chain");
        link.path.push_back({cur, r->previous_hop, request.token_id, request.requester});
        cur = r->previous_hop;
    }
    link.source = trace.origin;
    return link;
}

/// Shared categories of two descriptors, sorted.
inline std::vector<MacroId> shared_interests(const InterestDescriptor& a, const InterestDescriptor& b) {
    std::vector<MacroId> out;
    std::set_intersection(a.held.begin(), a.held.end(), b.held.begin(), b.held.end(), std::back_inserter(out));
    return out;
}

struct CiorParams {
    int ttl = kDefaultTtl;
    double sim_threshold = kDefaultSimThreshold;
    bool both_devices = false;             // originate from mobile only by default
    std::optional<MacroId> interest;       // interest-scoped establishment
};

struct CiorEdgeRecord {
    DeviceIdx a = 0; // a < b
    DeviceIdx b = 0;
    MacroId interest = 0;
    friend auto operator<=>(const CiorEdgeRecord&, const CiorEdgeRecord&) = default;
};

struct CiorRound {
    std::vector<CiorEdgeRecord> edges; // sorted, unique
};

/// One propagation per origin device of every listed source user.
inline CiorRound run_cior_round(const ProtocolEnv& env, const UserIndex& users, const SiotView& view,
                                std::span<const NodeId> sources, const AuthorizationMap& decisions,
                                const CiorParams& params) {
    if (params.ttl < 1) throw Error("ttl must be >= 1");
    const auto forwards = forward_decider(env, decisions);
    std::vector<int> hop;
    std::vector<DeviceIdx> queue;
    std::vector<DeviceIdx> received;
    CiorRound round;
    for (NodeId s : sources) {
        const auto& payload = env.vuip(s);
        if (payload.empty()) continue;
        for (DeviceIdx origin : env.origin_devices(users, s, params.both_devices)) {
            received.clear();
            detail::flood(view, origin, params.ttl, forwards, hop, queue,
                          [&](DeviceIdx holder, DeviceIdx, int) { received.push_back(holder); });
            for (DeviceIdx d : received) {
                const auto o = env.owner(d);
                if (!o || *o == s) continue;
                if (!accepts(env.vuip(*o), payload, params.sim_threshold, params.interest)) continue;
                const auto shared =
                    params.interest ? std::vector<MacroId>{*params.interest} : shared_interests(env.vuip(*o), payload);
                for (MacroId i : shared) round.edges.push_back({std::min(origin, d), std::max(origin, d), i});
            }
        }
    }
    std::sort(round.edges.begin(), round.edges.end());
    round.edges.erase(std::unique(round.edges.begin(), round.edges.end()), round.edges.end());
    return round;
}

inline CiorRound run_cior_round(const ProtocolEnv& env, const UserIndex& users, const SiotView& view,
                                std::span<const NodeId> sources, const AuthorizationPolicy& policy,
                                const CiorParams& params, std::uint64_t seed, std::uint64_t replicate) {
    const auto decisions = sample_decisions(users.size(), policy, seed, replicate);
    return run_cior_round(env, users, view, sources, decisions, params);
}

/// Copy of `base` with the round's C-IOR edges added.
inline SiotGraph with_cior(const SiotGraph& base, const CiorRound& round) {
    SiotGraph g = base;
    for (const auto& e : round.edges) g.add_edge(e.a, e.b, RelationshipKind::CIOR, e.interest);
    return g;
}

/// User-level C-IOR contacts for one interest.
inline ContactOverlay cior_overlay(const CiorRound& round, const ProtocolEnv& env, std::size_t user_count,
                                   MacroId interest) {
    ContactOverlay out(user_count);
    for (const auto& e : round.edges) {
        if (e.interest != interest) continue;
        const auto a = env.owner(e.a), b = env.owner(e.b);
        if (!a || !b || *a == *b) continue;
        out[*a].push_back(*b);
        out[*b].push_back(*a);
    }
    for (auto& l : out) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return out;
}

inline std::string token_hex(std::uint64_t id) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
    return buf;
}

/// Per-token pseudonym of a device as seen in relay state.
inline std::string relay_handle(std::uint64_t token_id, DeviceIdx d) {
    return token_hex(mix_keys(token_id, d, 0x7e1a));
}

/// Debug export `token_id,holder,previous_hop,hop` for anonymity audits.
/// Devices appear only as per-token pseudonyms.
inline std::string trace_to_csv(const PropagationTrace& t) {
    std::string s = "token_id,holder,previous_hop,hop\n";
    for (const auto& r : t.records) {
        s += token_hex(r.token_id) + ',' + relay_handle(r.token_id, r.holder) + ',' +
             relay_handle(r.token_id, r.previous_hop) + ',' + std::to_string(r.hop) + '\n';
    }
    return s;
}

} // namespace siotbridge
