#pragma once

// DOSN layer: friendships, hop-indexed POD authorizations, and per-interest
// reachability (direct, indirect, community) from a source.
//
// Discovery semantics
// -------------------
// A search from a source S is a breadth-first walk over friendships bounded
// by `max_hops`. A node u first reached at hop d exposes its friends when
//   * u is S (its own contact list), or
//   * u authorizes POD access at hop d, or
//   * u holds the interest (it relaunches the search as a Source).
// Direct reachability (D-IRC) uses only the first two rules; the indirect set
// (I-IRC) is everything the relaunch rule adds. In enhanced mode a source or
// relaunching node also reaches the interested owners on its SIoT contact
// list (one hop each). Authorization decisions are evaluated once per node,
// at the hop of its first reach in the full process.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "interest_model.hpp"

namespace siotbridge {

using NodeId = std::uint32_t;
inline constexpr int kUnreached = -1;

/// Dense 0..n-1 numbering of user names (sorted lexicographically).
class UserIndex {
public:
    UserIndex() = default;
    explicit UserIndex(std::set<std::string> names) : names_(names.begin(), names.end()) {
        for (NodeId i = 0; i < names_.size(); ++i) ids_.emplace(names_[i], i);
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(NodeId id) const { return names_.at(id); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    bool contains(const std::string& name) const { return ids_.count(name) != 0; }
    NodeId id(const std::string& name) const {
        const auto it = ids_.find(name);
        if (it == ids_.end()) throw Error("unknown user: " + name);
        return it->second;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> ids_;
};

/// Undirected friendship graph without self-loops or parallel edges.
class FriendshipGraph {
public:
    FriendshipGraph() = default;
    explicit FriendshipGraph(std::size_t n) : adj_(n) {}

    std::size_t size() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId u) const { return adj_.at(u); }

    /// Returns false for self-loops and duplicates.
    bool add_edge(NodeId a, NodeId b) {
        if (a == b || a >= adj_.size() || b >= adj_.size()) return false;
        auto& la = adj_[a];
        const auto it = std::lower_bound(la.begin(), la.end(), b);
        if (it != la.end() && *it == b) return false;
        la.insert(it, b);
        auto& lb = adj_[b];
        lb.insert(std::lower_bound(lb.begin(), lb.end(), a), a);
        ++edges_;
        return true;
    }

    bool has_edge(NodeId a, NodeId b) const {
        const auto& la = adj_.at(a);
        return std::binary_search(la.begin(), la.end(), b);
    }

private:
    std::vector<std::vector<NodeId>> adj_;
    std::size_t edges_ = 0;
};

/// User-level contact lists contributed by the SIoT layer (symmetric).
using ContactOverlay = std::vector<std::vector<NodeId>>;

/// Hop-indexed cooperation probabilities. Index 0 is hop 1; hops past the end
/// reuse the last entry. Sample-wise dominance between runs needs each list
/// to be non-increasing in hop.
struct AuthorizationPolicy {
    std::vector<double> auth_prob_per_hop{1.0};
    std::vector<double> spread_prob_per_hop{1.0};

    static double at(const std::vector<double>& v, int hop) noexcept {
        if (v.empty()) return 0.0;
        const auto i = static_cast<std::size_t>(std::max(hop, 1) - 1);
        return v[std::min(i, v.size() - 1)];
    }
    double auth_at(int hop) const noexcept { return at(auth_prob_per_hop, hop); }
    double spread_at(int hop) const noexcept { return at(spread_prob_per_hop, hop); }

    void validate() const {
        for (const auto* v : {&auth_prob_per_hop, &spread_prob_per_hop}) {
            if (v->empty()) throw Error("probability-per-hop list must be non-empty");
            for (double p : *v) {
                if (!(p >= 0.0 && p <= 1.0)) throw Error("probability outside [0,1]: " + fmt_g6(p));
            }
        }
    }
};

/// Per-(seed, replicate) uniform draws shared by every mode and sweep point.
/// A node cooperates at level p iff its draw is below p, so raising p never
/// withdraws cooperation.
class DecisionStreams {
public:
    enum Stream : std::uint64_t { kAuthorize = 1, kForward = 2, kToken = 3, kSourcePick = 4 };

    DecisionStreams(std::uint64_t seed, std::uint64_t replicate) : seed_(seed), replicate_(replicate) {}

    double draw(Stream s, std::uint64_t entity) const noexcept {
        return unit_interval(mix_keys(seed_, replicate_, static_cast<std::uint64_t>(s), entity));
    }
    std::uint64_t bits(Stream s, std::uint64_t entity) const noexcept {
        return mix_keys(seed_, replicate_, static_cast<std::uint64_t>(s), entity);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t replicate() const noexcept { return replicate_; }

private:
    std::uint64_t seed_;
    std::uint64_t replicate_;
};

inline DecisionStreams couple_randomness(std::uint64_t seed, std::uint64_t replicate) {
    return DecisionStreams(seed, replicate);
}

/// Authorization and forwarding decisions for one replicate. Decisions are
/// resolved at the hop where a node is first reached.
class AuthorizationMap {
public:
    AuthorizationMap() = default;
    AuthorizationMap(std::vector<double> auth_draws, std::vector<double> fwd_draws, AuthorizationPolicy policy)
        : auth_(std::move(auth_draws)), fwd_(std::move(fwd_draws)), policy_(std::move(policy)) {}

    bool authorizes(NodeId node, int hop) const noexcept { return auth_[node] < policy_.auth_at(hop); }
    bool forwards(NodeId node, int hop) const noexcept { return fwd_[node] < policy_.spread_at(hop); }

    std::size_t size() const noexcept { return auth_.size(); }
    const AuthorizationPolicy& policy() const noexcept { return policy_; }
    std::span<const double> auth_draws() const noexcept { return auth_; }
    std::span<const double> forward_draws() const noexcept { return fwd_; }

    /// Same draws under a different policy (coupling across sweep points).
    AuthorizationMap with_policy(AuthorizationPolicy policy) const { return {auth_, fwd_, std::move(policy)}; }

private:
    std::vector<double> auth_;
    std::vector<double> fwd_;
    AuthorizationPolicy policy_;
};

inline AuthorizationMap sample_decisions(std::size_t node_count, const AuthorizationPolicy& policy,
                                         std::uint64_t seed, std::uint64_t replicate) {
    policy.validate();
    const auto streams = couple_randomness(seed, replicate);
    std::vector<double> a(node_count), f(node_count);
    for (NodeId i = 0; i < node_count; ++i) {
        a[i] = streams.draw(DecisionStreams::kAuthorize, i);
        f[i] = streams.draw(DecisionStreams::kForward, i);
    }
    return {std::move(a), std::move(f), policy};
}

inline AuthorizationMap sample_decisions(const FriendshipGraph& graph, const AuthorizationPolicy& policy,
                                         std::uint64_t seed, std::uint64_t replicate) {
    return sample_decisions(graph.size(), policy, seed, replicate);
}

/// Membership vector of V(I_A) over the user index.
inline std::vector<std::uint8_t> interested_nodes(const UserIndex& users,
                                                  const std::map<std::string, InterestDescriptor>& vuips,
                                                  MacroId interest) {
    std::vector<std::uint8_t> v(users.size(), 0);
    for (const auto& [owner, d] : vuips) {
        if (users.contains(owner) && has_interest(d, interest)) v[users.id(owner)] = 1;
    }
    return v;
}

struct ReachabilityResult {
    NodeId source = 0;
    MacroId interest = 0;
    std::vector<NodeId> direct;    // sorted
    std::vector<NodeId> indirect;  // sorted
    std::vector<NodeId> community; // sorted, includes the source
    std::map<NodeId, int> hop_count;

    /// direct ∪ indirect, sorted.
    std::vector<NodeId> reached() const {
        std::vector<NodeId> r;
        std::set_union(direct.begin(), direct.end(), indirect.begin(), indirect.end(), std::back_inserter(r));
        return r;
    }
};

/// Inputs of one discovery. Overlays are user-level SIoT contact lists; an
/// empty list gives the pure Friendships behavior.
struct DiscoveryContext {
    const FriendshipGraph* friends = nullptr;
    std::span<const std::uint8_t> interested;
    const AuthorizationMap* auth = nullptr;
    int max_hops = 4;
    std::vector<const ContactOverlay*> overlays;
};

/// Reusable BFS buffers; one per worker thread.
class ReachScratch {
public:
    void prepare(std::size_t n) {
        if (comb_.size() != n) {
            comb_.assign(n, kUnreached);
            direct_.assign(n, kUnreached);
            touched_.clear();
        } else {
            for (auto v : touched_) comb_[v] = direct_[v] = kUnreached;
            touched_.clear();
        }
    }

    std::vector<int>& comb() noexcept { return comb_; }
    std::vector<int>& direct() noexcept { return direct_; }
    std::vector<NodeId>& queue() noexcept { return queue_; }
    std::vector<NodeId>& touched() noexcept { return touched_; }

private:
    std::vector<int> comb_, direct_;
    std::vector<NodeId> queue_, touched_;
};

namespace detail {

inline void check_context(const DiscoveryContext& ctx, NodeId source) {
    if (!ctx.friends || !ctx.auth) throw Error("discovery context incomplete");
    if (source >= ctx.friends->size()) throw Error("unknown source node " + std::to_string(source));
    if (ctx.interested.size() != ctx.friends->size() || ctx.auth->size() != ctx.friends->size()) {
        throw Error("discovery inputs disagree on node count");
    }
    if (ctx.max_hops < 0) throw Error("max_hops must be >= 0");
    for (const auto* o : ctx.overlays) {
        if (o && o->size() != ctx.friends->size()) throw Error("SIoT overlay disagrees on node count");
    }
}

/// Fills scratch.comb() (full process) and scratch.direct() (authorization
/// chains only) with first-reach hops; touched() lists every reached node.
inline void run_discovery(const DiscoveryContext& ctx, NodeId source, ReachScratch& s) {
    s.prepare(ctx.friends->size());
    auto& dist = s.comb();
    auto& queue = s.queue();
    auto& touched = s.touched();
    const auto& fr = *ctx.friends;
    const auto& auth = *ctx.auth;

    queue.clear();
    dist[source] = 0;
    touched.push_back(source);
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        const int d = dist[u];
        if (d >= ctx.max_hops) continue;
        const bool searcher = u == source || ctx.interested[u];
        if (searcher || auth.authorizes(u, d)) {
            for (NodeId v : fr.neighbors(u)) {
                if (dist[v] != kUnreached) continue;
                dist[v] = d + 1;
                touched.push_back(v);
                queue.push_back(v);
            }
        }
        if (!searcher) continue;
        for (const auto* o : ctx.overlays) {
            if (!o) continue;
            for (NodeId v : (*o)[u]) {
                if (!ctx.interested[v] || dist[v] != kUnreached) continue;
                dist[v] = d + 1;
                touched.push_back(v);
                queue.push_back(v);
            }
        }
    }

    // Direct pass: only the source's own lists and authorization chains.
    auto& dd = s.direct();
    queue.clear();
    dd[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        const int d = dd[u];
        if (d >= ctx.max_hops) continue;
        if (u == source || auth.authorizes(u, dist[u])) {
            for (NodeId v : fr.neighbors(u)) {
                if (dd[v] != kUnreached) continue;
                dd[v] = d + 1;
                queue.push_back(v);
            }
        }
        if (u != source) continue;
        for (const auto* o : ctx.overlays) {
            if (!o) continue;
            for (NodeId v : (*o)[u]) {
                if (!ctx.interested[v] || dd[v] != kUnreached) continue;
                dd[v] = d + 1;
                queue.push_back(v);
            }
        }
    }
}

} // namespace detail

/// Full reachability of `source` for one interest.
inline ReachabilityResult discover(const DiscoveryContext& ctx, NodeId source, MacroId interest,
                                   ReachScratch& scratch) {
    detail::check_context(ctx, source);
    detail::run_discovery(ctx, source, scratch);
    ReachabilityResult r;
    r.source = source;
    r.interest = interest;
    auto nodes = scratch.touched();
    std::sort(nodes.begin(), nodes.end());
    for (NodeId v : nodes) {
        if (v == source) {
            if (ctx.interested[v]) r.community.push_back(v);
            continue;
        }
        if (!ctx.interested[v]) continue;
        r.community.push_back(v);
        r.hop_count[v] = scratch.comb()[v];
        (scratch.direct()[v] != kUnreached ? r.direct : r.indirect).push_back(v);
    }
    return r;
}

inline ReachabilityResult discover(const DiscoveryContext& ctx, NodeId source, MacroId interest) {
    ReachScratch scratch;
    return discover(ctx, source, interest, scratch);
}

/// D-IRC: interested nodes reachable through the source's contact lists and
/// chains of authorizing contacts.
inline std::vector<NodeId> discover_direct(const DiscoveryContext& ctx, NodeId source, MacroId interest) {
    return discover(ctx, source, interest).direct;
}

/// I-IRC: interested nodes added only by interested nodes relaunching the search.
inline std::vector<NodeId> discover_indirect(const DiscoveryContext& ctx, NodeId source, MacroId interest) {
    return discover(ctx, source, interest).indirect;
}

/// C_A = D-IRC ∪ I-IRC ∪ {source}. The source must hold the interest.
inline ReachabilityResult community_of(const DiscoveryContext& ctx, NodeId source, MacroId interest) {
    detail::check_context(ctx, source);
    if (!ctx.interested[source]) {
        throw Error("source " + std::to_string(source) + " does not hold interest " + std::to_string(interest));
    }
    return discover(ctx, source, interest);
}

// --- connectivity ----------------------------------------------------------

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

    NodeId find(NodeId x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }
    std::size_t component_size(NodeId x) { return size_[find(x)]; }

private:
    std::vector<NodeId> parent_;
    std::vector<std::size_t> size_;
};

/// Percentage of V(I_A) in the largest connected component of the graph
/// induced on V(I_A) by friendships plus the given overlays.
inline double giant_component_pct(const FriendshipGraph& friends, std::span<const std::uint8_t> interested,
                                  std::span<const ContactOverlay* const> overlays = {}) {
    const std::size_t n = friends.size();
    if (interested.size() != n) throw Error("membership vector disagrees with graph size");
    std::size_t members = 0;
    for (auto b : interested) members += b ? 1 : 0;
    if (members == 0) throw Error("giant component of an empty node set");
    UnionFind uf(n);
    for (NodeId u = 0; u < n; ++u) {
        if (!interested[u]) continue;
        for (NodeId v : friends.neighbors(u)) {
            if (interested[v]) uf.unite(u, v);
        }
        for (const auto* o : overlays) {
            if (!o) continue;
            for (NodeId v : (*o)[u]) {
                if (interested[v]) uf.unite(u, v);
            }
        }
    }
    std::size_t best = 0;
    for (NodeId u = 0; u < n; ++u) {
        if (interested[u]) best = std::max(best, uf.component_size(u));
    }
    return 100.0 * static_cast<double>(best) / static_cast<double>(members);
}

} // namespace siotbridge
