#pragma once

// Device layer: one mobile and one fixed device per user, and the trace-driven
// SIoT relationships between them (POR, C-LOR, OOR, SOR). C-IOR edges are
// only ever added by the protocol.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"
#include "geo.hpp"
#include "human_graph.hpp"
#include "interest_model.hpp"
#include "trace_ingest.hpp"

namespace siotbridge {

using DeviceIdx = std::uint32_t;

enum class DeviceKind : std::uint8_t { Mobile, Fixed };

inline const char* to_string(DeviceKind k) noexcept { return k == DeviceKind::Mobile ? "mobile" : "fixed"; }

struct Device {
    std::string device_id;
    UserId owner;
    DeviceKind kind = DeviceKind::Mobile;
    std::string model;
    std::optional<GeoPoint> location; // fixed devices only
};

inline std::string device_id_for(const UserId& owner, DeviceKind kind) {
    return owner + (kind == DeviceKind::Mobile ? ":m" : ":f");
}

// Relationship kinds as bit flags so an edge can carry several.
enum class RelationshipKind : std::uint8_t { POR = 1, CLOR = 2, OOR = 4, SOR = 8, CIOR = 16 };

using KindMask = std::uint8_t;

inline constexpr KindMask bit(RelationshipKind k) noexcept { return static_cast<KindMask>(k); }
inline constexpr KindMask kTraceKinds = bit(RelationshipKind::POR) | bit(RelationshipKind::CLOR) |
                                        bit(RelationshipKind::OOR) | bit(RelationshipKind::SOR);
inline constexpr KindMask kAllKinds = kTraceKinds | bit(RelationshipKind::CIOR);
inline constexpr RelationshipKind kKindOrder[] = {RelationshipKind::POR, RelationshipKind::CLOR, RelationshipKind::OOR,
                                                  RelationshipKind::SOR, RelationshipKind::CIOR};

inline const char* to_string(RelationshipKind k) noexcept {
    switch (k) {
    case RelationshipKind::POR: return "POR";
    case RelationshipKind::CLOR: return "C-LOR";
    case RelationshipKind::OOR: return "OOR";
    case RelationshipKind::SOR: return "SOR";
    case RelationshipKind::CIOR: return "C-IOR";
    }
    return "?";
}

inline std::optional<RelationshipKind> parse_kind(std::string_view s) {
    for (auto k : kKindOrder) {
        if (s == to_string(k)) return k;
    }
    if (s == "CLOR") return RelationshipKind::CLOR;
    if (s == "CIOR") return RelationshipKind::CIOR;
    return std::nullopt;
}

/// "POR+SOR" style label in canonical kind order; "none" for an empty mask.
inline std::string kinds_label(KindMask m) {
    std::string s;
    for (auto k : kKindOrder) {
        if (m & bit(k)) {
            if (!s.empty()) s += '+';
            s += to_string(k);
        }
    }
    return s.empty() ? "none" : s;
}

inline KindMask parse_kinds_label(std::string_view s) {
    if (s == "none") return 0;
    if (s == "all") return kTraceKinds;
    KindMask m = 0;
    for (const auto& part : split(s, '+')) {
        const auto k = parse_kind(trim(part));
        if (!k) throw Error("unknown relationship kind: " + part);
        m |= bit(*k);
    }
    return m;
}

struct SiotEdge {
    DeviceIdx a = 0; // a < b
    DeviceIdx b = 0;
    KindMask kinds = 0;
    std::vector<MacroId> cior_interests; // sorted; only with C-IOR
};

/// Device graph with typed, possibly multi-kind edges.
class SiotGraph {
public:
    SiotGraph() = default;
    explicit SiotGraph(std::vector<Device> devices) {
        for (auto& d : devices) add_device(std::move(d));
    }

    DeviceIdx add_device(Device d) {
        if (index_.count(d.device_id)) throw Error("duplicate device id " + d.device_id);
        const auto idx = static_cast<DeviceIdx>(devices_.size());
        index_.emplace(d.device_id, idx);
        auto& slots = by_owner_[d.owner];
        (d.kind == DeviceKind::Mobile ? slots.first : slots.second) = idx;
        devices_.push_back(std::move(d));
        adj_.emplace_back();
        return idx;
    }

    /// Adds `kind` to the (a, b) edge, creating it when absent.
    void add_edge(DeviceIdx a, DeviceIdx b, RelationshipKind kind, std::optional<MacroId> interest = std::nullopt) {
        if (a == b) throw Error("SIoT self-edge on " + devices_.at(a).device_id);
        if (a >= devices_.size() || b >= devices_.size()) throw Error("SIoT edge endpoint out of range");
        if (b < a) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = edge_index_.find(key);
        if (it == edge_index_.end()) {
            it = edge_index_.emplace(key, edges_.size()).first;
            edges_.push_back({a, b, 0, {}});
            adj_[a].push_back({b, static_cast<std::uint32_t>(it->second)});
            adj_[b].push_back({a, static_cast<std::uint32_t>(it->second)});
        }
        auto& e = edges_[it->second];
        e.kinds |= bit(kind);
        if (kind == RelationshipKind::CIOR && interest) {
            auto pos = std::lower_bound(e.cior_interests.begin(), e.cior_interests.end(), *interest);
            if (pos == e.cior_interests.end() || *pos != *interest) e.cior_interests.insert(pos, *interest);
        }
    }

    std::size_t device_count() const noexcept { return devices_.size(); }
    const Device& device(DeviceIdx i) const { return devices_.at(i); }
    const std::vector<Device>& devices() const noexcept { return devices_; }
    const std::vector<SiotEdge>& edges() const noexcept { return edges_; }

    std::optional<DeviceIdx> find(const std::string& device_id) const {
        const auto it = index_.find(device_id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// (mobile, fixed) of an owner; either may be missing.
    std::pair<std::optional<DeviceIdx>, std::optional<DeviceIdx>> devices_of(const UserId& owner) const {
        const auto it = by_owner_.find(owner);
        if (it == by_owner_.end()) return {};
        return it->second;
    }

    /// Neighbors as (device, edge index).
    const std::vector<std::pair<DeviceIdx, std::uint32_t>>& adjacency(DeviceIdx d) const { return adj_.at(d); }

    const SiotEdge* edge_between(DeviceIdx a, DeviceIdx b) const {
        if (b < a) std::swap(a, b);
        const auto it = edge_index_.find((static_cast<std::uint64_t>(a) << 32) | b);
        return it == edge_index_.end() ? nullptr : &edges_[it->second];
    }

private:
    std::vector<Device> devices_;
    std::unordered_map<std::string, DeviceIdx> index_;
    std::map<UserId, std::pair<std::optional<DeviceIdx>, std::optional<DeviceIdx>>> by_owner_;
    std::vector<SiotEdge> edges_;
    std::unordered_map<std::uint64_t, std::size_t> edge_index_;
    std::vector<std::vector<std::pair<DeviceIdx, std::uint32_t>>> adj_;
};

/// Read-only view exposing edges with at least one selected kind.
class SiotView {
public:
    SiotView(const SiotGraph& g, KindMask kinds) : g_(&g), kinds_(kinds) {}

    const SiotGraph& graph() const noexcept { return *g_; }
    KindMask kinds() const noexcept { return kinds_; }
    bool visible(const SiotEdge& e) const noexcept { return (e.kinds & kinds_) != 0; }

    template <typename F>
    void for_each_neighbor(DeviceIdx d, F&& f) const {
        for (const auto& [n, ei] : g_->adjacency(d)) {
            if (visible(g_->edges()[ei])) f(n);
        }
    }

    std::vector<const SiotEdge*> edges() const {
        std::vector<const SiotEdge*> out;
        for (const auto& e : g_->edges()) {
            if (visible(e)) out.push_back(&e);
        }
        return out;
    }

private:
    const SiotGraph* g_;
    KindMask kinds_;
};

inline SiotView select_kinds(const SiotGraph& g, KindMask kinds) {
    if (kinds == 0) throw Error("relationship kind selection must be non-empty");
    return SiotView(g, kinds);
}

// --- device instantiation ---------------------------------------------------

struct ModelCatalog {
    std::vector<std::pair<std::string, double>> models;

    void validate() const {
        if (models.empty()) throw Error("model catalog is empty");
        double sum = 0;
        for (const auto& [m, p] : models) {
            if (!(p >= 0.0)) throw Error("negative model probability for " + m);
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw Error("model probabilities sum to " + fmt_exact(sum) + ", not 1");
    }

    /// Default: `n` models with equal probability.
    static ModelCatalog uniform(std::size_t n = 10) {
        ModelCatalog c;
        for (std::size_t i = 0; i < n; ++i) c.models.emplace_back("model-" + std::to_string(i), 1.0 / static_cast<double>(n));
        return c;
    }

    const std::string& pick(double u) const {
        double acc = 0;
        for (const auto& [m, p] : models) {
            acc += p;
            if (u < acc) return m;
        }
        return models.back().first;
    }
};

inline ModelCatalog load_model_catalog(const std::string& path) {
    ModelCatalog c;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        if (i == 0 && !f.empty() && trim(f[0]) == "model_id") continue;
        double p = 0;
        if (f.size() != 2 || !parse_double(f[1], p)) {
            throw Error(path + ":" + std::to_string(i + 1) + ": malformed model catalog row");
        }
        c.models.emplace_back(std::string(trim(f[0])), p);
    }
    c.validate();
    return c;
}

/// Two devices per user; models drawn from (seed, user, device kind).
inline std::vector<Device> instantiate_devices(const std::set<UserId>& users,
                                               const std::map<UserId, GeoPoint>& home_points,
                                               const ModelCatalog& catalog, std::uint64_t seed) {
    catalog.validate();
    std::vector<Device> out;
    out.reserve(users.size() * 2);
    for (const auto& u : users) {
        const auto home = home_points.find(u);
        if (home == home_points.end()) throw Error("user " + u + " has no home point");
        for (auto kind : {DeviceKind::Mobile, DeviceKind::Fixed}) {
            const double draw = unit_interval(mix_keys(seed, fnv1a(u), static_cast<std::uint64_t>(kind) + 0x51077));
            Device d;
            d.device_id = device_id_for(u, kind);
            d.owner = u;
            d.kind = kind;
            d.model = catalog.pick(draw);
            if (kind == DeviceKind::Fixed) d.location = home->second;
            out.push_back(std::move(d));
        }
    }
    return out;
}

using DevicePair = std::pair<DeviceIdx, DeviceIdx>;

/// POR: every pair of devices sharing a model.
inline std::vector<DevicePair> establish_por(const std::vector<Device>& devices) {
    std::map<std::string, std::vector<DeviceIdx>> by_model;
    for (DeviceIdx i = 0; i < devices.size(); ++i) by_model[devices[i].model].push_back(i);
    std::vector<DevicePair> out;
    for (const auto& [m, ids] : by_model) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) out.emplace_back(ids[i], ids[j]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// C-LOR: fixed devices whose locations lie within `radius_m`.
inline std::vector<DevicePair> establish_clor(const std::vector<Device>& devices, double radius_m = 250.0) {
    std::vector<DeviceIdx> fixed;
    std::vector<GeoPoint> pts;
    for (DeviceIdx i = 0; i < devices.size(); ++i) {
        if (devices[i].kind != DeviceKind::Fixed) continue;
        if (!devices[i].location) throw Error("fixed device " + devices[i].device_id + " has no location");
        fixed.push_back(i);
        pts.push_back(*devices[i].location);
    }
    const GeoGrid grid(pts, radius_m);
    std::vector<DevicePair> out;
    for (std::uint32_t i = 0; i < fixed.size(); ++i) {
        grid.for_each_within(pts[i], [&](std::uint32_t j, double) {
            if (j > i) out.emplace_back(std::min(fixed[i], fixed[j]), std::max(fixed[i], fixed[j]));
        });
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// OOR: the mobile and fixed device of each owner.
inline std::vector<DevicePair> establish_oor(const std::vector<Device>& devices) {
    std::map<UserId, std::pair<std::optional<DeviceIdx>, std::optional<DeviceIdx>>> owners;
    for (DeviceIdx i = 0; i < devices.size(); ++i) {
        auto& s = owners[devices[i].owner];
        (devices[i].kind == DeviceKind::Mobile ? s.first : s.second) = i;
    }
    std::vector<DevicePair> out;
    for (const auto& [o, s] : owners) {
        if (s.first && s.second) out.emplace_back(std::min(*s.first, *s.second), std::max(*s.first, *s.second));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// SOR: mobile devices of user pairs with at least `meet_threshold` co-locations.
inline std::vector<DevicePair> establish_sor(const std::vector<Device>& devices,
                                             const std::vector<CoLocation>& colocations,
                                             std::size_t meet_threshold = 3) {
    if (meet_threshold < 1) throw Error("SOR meeting threshold must be >= 1");
    std::map<std::pair<UserId, UserId>, std::size_t> meetings;
    for (const auto& c : colocations) ++meetings[{c.user_a, c.user_b}];
    std::map<UserId, DeviceIdx> mobile;
    for (DeviceIdx i = 0; i < devices.size(); ++i) {
        if (devices[i].kind == DeviceKind::Mobile) mobile[devices[i].owner] = i;
    }
    std::vector<DevicePair> out;
    for (const auto& [pair, n] : meetings) {
        if (n < meet_threshold) continue;
        const auto a = mobile.find(pair.first);
        const auto b = mobile.find(pair.second);
        if (a == mobile.end() || b == mobile.end()) continue;
        out.emplace_back(std::min(a->second, b->second), std::max(a->second, b->second));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct SiotBuildParams {
    double clor_radius_m = 250.0;
    std::size_t sor_threshold = 3;
};

/// Devices plus every trace-driven relationship.
inline SiotGraph build_siot_graph(const std::vector<Device>& devices, const std::vector<CoLocation>& colocations,
                                  const SiotBuildParams& params = {}) {
    SiotGraph g(devices);
    for (auto [a, b] : establish_por(devices)) g.add_edge(a, b, RelationshipKind::POR);
    for (auto [a, b] : establish_clor(devices, params.clor_radius_m)) g.add_edge(a, b, RelationshipKind::CLOR);
    for (auto [a, b] : establish_oor(devices)) g.add_edge(a, b, RelationshipKind::OOR);
    for (auto [a, b] : establish_sor(devices, colocations, params.sor_threshold)) {
        g.add_edge(a, b, RelationshipKind::SOR);
    }
    return g;
}

/// User-level contact lists from the visible edges of a view. C-IOR edges
/// only count when annotated with `interest` (if given).
inline ContactOverlay user_overlay(const SiotView& view, const UserIndex& users,
                                   std::optional<MacroId> interest = std::nullopt) {
    const auto& g = view.graph();
    std::vector<std::optional<NodeId>> owner(g.device_count());
    for (DeviceIdx d = 0; d < g.device_count(); ++d) {
        if (users.contains(g.device(d).owner)) owner[d] = users.id(g.device(d).owner);
    }
    ContactOverlay out(users.size());
    for (const auto& e : g.edges()) {
        KindMask m = e.kinds & view.kinds();
        if (interest && (m & bit(RelationshipKind::CIOR)) &&
            !std::binary_search(e.cior_interests.begin(), e.cior_interests.end(), *interest)) {
            m &= static_cast<KindMask>(~bit(RelationshipKind::CIOR));
        }
        if (!m) continue;
        const auto ua = owner[e.a], ub = owner[e.b];
        if (!ua || !ub || *ua == *ub) continue;
        out[*ua].push_back(*ub);
        out[*ub].push_back(*ua);
    }
    for (auto& l : out) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return out;
}

/// Users with no friendships and no trace-derived SIoT link to another user.
inline std::vector<std::uint8_t> isolated_users(const FriendshipGraph& friends, const SiotGraph& g,
                                                const UserIndex& users) {
    const auto overlay = user_overlay(SiotView(g, kTraceKinds), users);
    std::vector<std::uint8_t> iso(users.size(), 0);
    for (NodeId u = 0; u < users.size(); ++u) iso[u] = friends.neighbors(u).empty() && overlay[u].empty();
    return iso;
}

// --- file formats -------------------------------------------------------------

inline std::string devices_to_csv(const SiotGraph& g) {
    std::string s = "device_id,owner,kind,model,lat,lon\n";
    for (const auto& d : g.devices()) {
        s += d.device_id + ',' + d.owner + ',' + to_string(d.kind) + ',' + d.model + ',';
        if (d.location) s += fmt_exact(d.location->lat) + ',' + fmt_exact(d.location->lon);
        else s += ',';
        s += '\n';
    }
    return s;
}

/// One line per (edge, kind), and per interest for C-IOR.
inline std::string edges_to_csv(const SiotGraph& g) {
    std::vector<std::string> lines;
    for (const auto& e : g.edges()) {
        const auto& a = g.device(e.a).device_id;
        const auto& b = g.device(e.b).device_id;
        const auto& [lo, hi] = a < b ? std::pair{a, b} : std::pair{b, a};
        for (auto k : kKindOrder) {
            if (!(e.kinds & bit(k))) continue;
            if (k == RelationshipKind::CIOR && !e.cior_interests.empty()) {
                for (auto i : e.cior_interests) lines.push_back(lo + ',' + hi + ',' + to_string(k) + ',' + std::to_string(i));
            } else {
                lines.push_back(lo + ',' + hi + ',' + to_string(k));
            }
        }
    }
    std::sort(lines.begin(), lines.end());
    std::string s;
    for (const auto& l : lines) s += l + '\n';
    return s;
}

inline SiotGraph siot_graph_from_files(const std::string& devices_path, const std::string& edges_path) {
    SiotGraph g;
    const auto dl = read_lines(devices_path);
    for (std::size_t i = 1; i < dl.size(); ++i) {
        if (trim(dl[i]).empty()) continue;
        const auto f = split(dl[i], ',');
        if (f.size() != 6 || (f[2] != "mobile" && f[2] != "fixed")) {
            throw Error(devices_path + ":" + std::to_string(i + 1) + ": malformed device row");
        }
        Device d{f[0], f[1], f[2] == "mobile" ? DeviceKind::Mobile : DeviceKind::Fixed, f[3], std::nullopt};
        GeoPoint p;
        if (!f[4].empty() || !f[5].empty()) {
            if (!parse_double(f[4], p.lat) || !parse_double(f[5], p.lon) || !p.valid()) {
                throw Error(devices_path + ":" + std::to_string(i + 1) + ": bad device location");
            }
            d.location = p;
        }
        g.add_device(std::move(d));
    }
    const auto el = read_lines(edges_path);
    for (std::size_t i = 0; i < el.size(); ++i) {
        if (trim(el[i]).empty()) continue;
        const auto f = split(el[i], ',');
        const std::string where = edges_path + ":" + std::to_string(i + 1);
        if (f.size() != 3 && f.size() != 4) throw Error(where + ": malformed edge line");
        const auto a = g.find(f[0]);
        const auto b = g.find(f[1]);
        const auto k = parse_kind(f[2]);
        if (!a || !b || !k) throw Error(where + ": unknown device or kind");
        std::optional<MacroId> interest;
        if (f.size() == 4) {
            long long v = 0;
            if (!parse_int(f[3], v)) throw Error(where + ": bad interest id");
            interest = static_cast<MacroId>(v);
        }
        g.add_edge(*a, *b, *k, interest);
    }
    return g;
}

/// Per-kind line counts of the edge export, plus totals.
inline std::string graph_stats_csv(const SiotGraph& g) {
    std::map<std::string, std::size_t> per_kind;
    std::size_t lines = 0;
    for (const auto& e : g.edges()) {
        for (auto k : kKindOrder) {
            if (!(e.kinds & bit(k))) continue;
            const std::size_t n = (k == RelationshipKind::CIOR && !e.cior_interests.empty()) ? e.cior_interests.size() : 1;
            per_kind[to_string(k)] += n;
            lines += n;
        }
    }
    std::string s = "stat,value\n";
    s += "devices," + std::to_string(g.device_count()) + '\n';
    s += "edges," + std::to_string(g.edges().size()) + '\n';
    for (auto k : kKindOrder) s += std::string(to_string(k)) + ',' + std::to_string(per_kind[to_string(k)]) + '\n';
    s += "total_lines," + std::to_string(lines) + '\n';
    return s;
}

} // namespace siotbridge
