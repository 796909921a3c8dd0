#pragma once

// Campaign orchestration: per-source discovery in Friendships and Enhanced
// SIoT modes over a parameter sweep. Randomness is shared across modes and
// sweep points.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "cior_protocol.hpp"
#include "common.hpp"
#include "human_graph.hpp"
#include "scenario.hpp"
#include "siot_graph.hpp"

namespace siotbridge {

enum class ModeKind : std::uint8_t { Friendships, Enhanced };

struct Mode {
    ModeKind kind = ModeKind::Friendships;
    bool cior = true; // Enhanced only

    std::string label() const {
        if (kind == ModeKind::Friendships) return "friendships";
        return cior ? "enhanced" : "enhanced_nocior";
    }
    static Mode parse(std::string_view s) {
        if (s == "friendships") return {ModeKind::Friendships, false};
        if (s == "enhanced") return {ModeKind::Enhanced, true};
        if (s == "enhanced_nocior") return {ModeKind::Enhanced, false};
        throw Error("unknown mode: " + std::string(s));
    }
    friend bool operator==(const Mode&, const Mode&) = default;
};

enum class SweepVar : std::uint8_t { None, Spread, Auth, Hops, Kinds };

inline const char* to_string(SweepVar v) noexcept {
    switch (v) {
    case SweepVar::None: return "none";
    case SweepVar::Spread: return "spread";
    case SweepVar::Auth: return "auth";
    case SweepVar::Hops: return "hops";
    case SweepVar::Kinds: return "kinds";
    }
    return "?";
}

inline SweepVar parse_sweep_var(std::string_view s) {
    for (auto v : {SweepVar::None, SweepVar::Spread, SweepVar::Auth, SweepVar::Hops, SweepVar::Kinds}) {
        if (s == to_string(v)) return v;
    }
    throw Error("unknown sweep variable: " + std::string(s));
}

/// Fully resolved parameters of one sweep point.
struct SweepPoint {
    std::string label; // sweep_value column
    double x = 0.0;    // plot abscissa
    AuthorizationPolicy policy;
    int max_hops = 4;
    int ttl = kDefaultTtl;
    KindMask kinds = kTraceKinds;
};

struct ExperimentConfig {
    std::string campaign = "campaign";
    MacroId interest = 3;
    std::vector<Mode> modes{Mode{ModeKind::Friendships, false}, Mode{ModeKind::Enhanced, true}};
    KindMask kinds = kTraceKinds;
    SweepVar sweep_var = SweepVar::None;
    std::vector<std::string> sweep_values; // raw tokens, resolved by sweep_points()
    std::vector<double> spread_prob_per_hop{1.0};
    std::vector<double> auth_prob_per_hop{1.0};
    std::uint32_t replicates = 30;
    std::uint64_t seed = 1;
    bool include_isolated = true;
    int max_hops = 4;
    int ttl = kDefaultTtl;
    double sim_threshold = kDefaultSimThreshold;
    bool origin_both = false;
    std::size_t max_sources = 0; // 0: every eligible source
    bool record_reach = false;
    unsigned threads = 1;

    void validate() const {
        if (replicates < 1) throw Error("replicates must be >= 1");
        if (campaign.empty() || campaign.find_first_of(",\n") != std::string::npos) throw Error("campaign name must be non-empty without commas");
        if (modes.empty()) throw Error("at least one mode is required");
        if (max_hops < 0) throw Error("max_hops must be >= 0");
        if (ttl < 1) throw Error("ttl must be >= 1");
        if (!(sim_threshold >= 0.0 && sim_threshold <= 1.0)) throw Error("sim_threshold outside [0,1]");
        AuthorizationPolicy{auth_prob_per_hop, spread_prob_per_hop}.validate();
        if (sweep_var != SweepVar::None && sweep_values.empty()) throw Error("sweep variable set without sweep values");
    }
};

/// Probability vector token: "0.9" or per-hop "1/0.8/0.5".
inline std::vector<double> parse_prob_vector(std::string_view s) {
    std::vector<double> v;
    for (const auto& part : split(s, s.find('/') != std::string_view::npos ? '/' : ',')) {
        double p = 0;
        if (!parse_double(part, p) || !(p >= 0.0 && p <= 1.0)) throw Error("bad probability: " + part);
        v.push_back(p);
    }
    return v;
}

inline std::string prob_vector_label(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "/" : "") + fmt_g6(v[i]);
    return s;
}

inline std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
    SweepPoint base;
    base.policy = {cfg.auth_prob_per_hop, cfg.spread_prob_per_hop};
    base.max_hops = cfg.max_hops;
    base.ttl = cfg.ttl;
    base.kinds = cfg.kinds;
    if (cfg.sweep_var == SweepVar::None) {
        base.label = "-";
        return {base};
    }
    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
        SweepPoint p = base;
        const std::string tok(trim(cfg.sweep_values[i]));
        p.x = static_cast<double>(i);
        switch (cfg.sweep_var) {
        case SweepVar::Spread:
        case SweepVar::Auth: {
            auto v = parse_prob_vector(tok);
            if (v.size() == 1) p.x = v[0];
            (cfg.sweep_var == SweepVar::Spread ? p.policy.spread_prob_per_hop : p.policy.auth_prob_per_hop) = v;
            p.label = prob_vector_label(v);
            break;
        }
        case SweepVar::Hops: {
            long long h = 0;
            if (!parse_int(tok, h) || h < 1) throw Error("bad hop count: " + tok);
            p.max_hops = p.ttl = static_cast<int>(h);
            p.x = static_cast<double>(h);
            p.label = std::to_string(h);
            break;
        }
        case SweepVar::Kinds:
            p.kinds = parse_kinds_label(tok);
            if (p.kinds == 0) throw Error("empty kind subset in sweep");
            p.label = kinds_label(p.kinds);
            break;
        case SweepVar::None: break;
        }
        out.push_back(std::move(p));
    }
    return out;
}

struct SourceRun {
    NodeId source = 0;
    std::uint32_t mode = 0;  // index into ExperimentResult::modes
    std::uint32_t point = 0; // index into ExperimentResult::points
    std::uint32_t replicate = 0;
    std::uint32_t reached = 0;
    std::uint32_t denominator = 0;
    double irn_pct = 0.0;
    double mean_hops = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::uint32_t> hop_hist; // hop_hist[h]: reached nodes first reached at hop h
    std::vector<NodeId> reached_nodes;   // sorted; only when reach is recorded
    std::vector<std::uint8_t> reached_hops;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<Mode> modes;
    std::vector<SweepPoint> points;
    std::vector<std::string> source_names; // by NodeId
    std::vector<SourceRun> runs;           // ordered by (point, replicate, mode, source)

    std::string kinds_column(std::uint32_t mode, std::uint32_t point) const {
        const Mode& m = modes.at(mode);
        if (m.kind == ModeKind::Friendships) return "none";
        KindMask k = points.at(point).kinds;
        if (m.cior) k |= bit(RelationshipKind::CIOR);
        return kinds_label(k);
    }
};

/// Everything a single-source discovery needs for one mode.
struct ModeInputs {
    const FriendshipGraph* friends = nullptr;
    std::span<const std::uint8_t> interested;
    std::span<const std::uint8_t> isolated; // may be empty
    bool include_isolated = true;
    std::vector<const ContactOverlay*> overlays; // empty for Friendships
};

/// Reach of one source in one mode. The IRN denominator is V(I_A) minus the
/// source, and minus isolated interested users when they are excluded.
inline SourceRun run_source(NodeId source, const ModeInputs& in, const AuthorizationMap& auth, int max_hops,
                            ReachScratch& scratch, bool record_reach = true) {
    if (source >= in.interested.size() || !in.interested[source]) {
        throw Error("source " + std::to_string(source) + " does not hold the campaign interest");
    }
    DiscoveryContext ctx{in.friends, in.interested, &auth, max_hops, in.overlays};
    detail::check_context(ctx, source);
    detail::run_discovery(ctx, source, scratch);

    SourceRun r;
    r.source = source;
    std::uint32_t denom = 0;
    for (NodeId v = 0; v < in.interested.size(); ++v) {
        if (v == source || !in.interested[v]) continue;
        if (!in.include_isolated && !in.isolated.empty() && in.isolated[v]) continue;
        ++denom;
    }
    r.denominator = denom;
    r.hop_hist.assign(static_cast<std::size_t>(max_hops) + 1, 0);
    const auto& dist = scratch.comb();
    double hop_sum = 0;
    auto& touched = scratch.touched();
    if (record_reach) std::sort(touched.begin(), touched.end());
    for (NodeId v : touched) {
        if (v == source || !in.interested[v]) continue;
        const int h = dist[v];
        ++r.reached;
        ++r.hop_hist[static_cast<std::size_t>(h)];
        hop_sum += h;
        if (record_reach) {
            r.reached_nodes.push_back(v);
            r.reached_hops.push_back(static_cast<std::uint8_t>(h));
        }
    }
    r.irn_pct = denom ? 100.0 * r.reached / denom : 0.0;
    if (r.reached) r.mean_hops = hop_sum / r.reached;
    return r;
}

inline SourceRun run_source(NodeId source, const ModeInputs& in, const AuthorizationMap& auth, int max_hops) {
    ReachScratch scratch;
    return run_source(source, in, auth, max_hops, scratch, true);
}

/// Eligible sources: V(I_A), minus isolated users when excluded, optionally
/// subsampled to `max_sources` by a seed-keyed ranking.
inline std::vector<NodeId> eligible_sources(std::span<const std::uint8_t> interested,
                                            std::span<const std::uint8_t> isolated, const ExperimentConfig& cfg) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < interested.size(); ++v) {
        if (!interested[v]) continue;
        if (!cfg.include_isolated && !isolated.empty() && isolated[v]) continue;
        out.push_back(v);
    }
    if (cfg.max_sources > 0 && out.size() > cfg.max_sources) {
        const DecisionStreams pickr(cfg.seed, 0);
        std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
            return std::pair(pickr.bits(DecisionStreams::kSourcePick, a), a) <
                   std::pair(pickr.bits(DecisionStreams::kSourcePick, b), b);
        });
        out.resize(cfg.max_sources);
        std::sort(out.begin(), out.end());
    }
    return out;
}

namespace detail {

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i, 0u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) f(i, w);
            } catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace detail

/// Runs every (sweep point, replicate, mode, eligible source). Decision
/// draws depend only on (seed, replicate, node), never on mode or point.
inline ExperimentResult run_campaign(const ExperimentConfig& cfg, const Scenario& sc) {
    cfg.validate();
    ExperimentResult res;
    res.config = cfg;
    res.modes = cfg.modes;
    res.points = sweep_points(cfg);
    res.source_names = sc.users.names();

    const auto interested = interested_nodes(sc.users, sc.vuips, cfg.interest);
    const auto isolated = isolated_users(sc.friends, sc.siot, sc.users);
    const auto sources = eligible_sources(interested, isolated, cfg);
    if (sources.empty()) throw Error("no eligible sources hold interest " + std::to_string(cfg.interest));

    std::vector<NodeId> cior_sources;
    for (NodeId v = 0; v < interested.size(); ++v) {
        if (interested[v]) cior_sources.push_back(v);
    }

    const bool any_enhanced = std::any_of(cfg.modes.begin(), cfg.modes.end(),
                                          [](const Mode& m) { return m.kind == ModeKind::Enhanced; });
    const bool any_cior = std::any_of(cfg.modes.begin(), cfg.modes.end(),
                                      [](const Mode& m) { return m.kind == ModeKind::Enhanced && m.cior; });

    std::map<KindMask, ContactOverlay> base_overlays;
    if (any_enhanced) {
        for (const auto& p : res.points) {
            if (!base_overlays.count(p.kinds)) {
                base_overlays.emplace(p.kinds, user_overlay(select_kinds(sc.siot, p.kinds), sc.users));
            }
        }
    }
    const ProtocolEnv env(sc.siot, sc.users, sc.vuips);

    const std::size_t n_tasks = res.points.size() * cfg.replicates;
    std::vector<std::vector<SourceRun>> slots(n_tasks);
    std::vector<ReachScratch> scratch(std::max(1u, cfg.threads));

    detail::parallel_for(n_tasks, cfg.threads, [&](std::size_t task, unsigned worker) {
        const auto pi = static_cast<std::uint32_t>(task / cfg.replicates);
        const auto rep = static_cast<std::uint32_t>(task % cfg.replicates);
        const SweepPoint& pt = res.points[pi];
        const auto auth = sample_decisions(sc.users.size(), pt.policy, cfg.seed, rep);

        ContactOverlay cior;
        if (any_cior) {
            CiorParams params;
            params.ttl = pt.ttl;
            params.sim_threshold = cfg.sim_threshold;
            params.both_devices = cfg.origin_both;
            params.interest = cfg.interest;
            const auto round = run_cior_round(env, sc.users, select_kinds(sc.siot, pt.kinds), cior_sources, auth, params);
            cior = cior_overlay(round, env, sc.users.size(), cfg.interest);
        }

        auto& out = slots[task];
        out.reserve(cfg.modes.size() * sources.size());
        for (std::uint32_t mi = 0; mi < cfg.modes.size(); ++mi) {
            const Mode& m = cfg.modes[mi];
            ModeInputs in{&sc.friends, interested, isolated, cfg.include_isolated, {}};
            if (m.kind == ModeKind::Enhanced) {
                in.overlays.push_back(&base_overlays.at(pt.kinds));
                if (m.cior) in.overlays.push_back(&cior);
            }
            for (NodeId s : sources) {
                auto r = run_source(s, in, auth, pt.max_hops, scratch[worker], cfg.record_reach);
                r.mode = mi;
                r.point = pi;
                r.replicate = rep;
                out.push_back(std::move(r));
            }
        }
    });

    std::size_t total = 0;
    for (const auto& s : slots) total += s.size();
    res.runs.reserve(total);
    for (auto& s : slots) {
        for (auto& r : s) res.runs.push_back(std::move(r));
    }
    return res;
}

// --- config file ---------------------------------------------------------------

/// Parses the flat `key = value` config. `#` starts a comment; unknown keys
/// are fatal. `scenario` (a directory) is returned separately.
struct ParsedConfig {
    ExperimentConfig config;
    std::string scenario_dir;
};

inline bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("config key '" + std::string(key) + "': expected boolean, got '" + std::string(v) + "'");
}

inline ParsedConfig parse_config_text(const std::string& text, const std::string& origin = "<config>") {
    ParsedConfig pc;
    auto& c = pc.config;
    std::istringstream in(text);
    std::string raw;
    std::size_t ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        const auto hash = raw.find('#');
        const auto line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw Error(origin + ":" + std::to_string(ln) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string val(trim(line.substr(eq + 1)));
        const auto num = [&](auto& dst, double lo) {
            double d = 0;
            if (!parse_double(val, d) || d < lo) throw Error("config key '" + key + "': bad value '" + val + "'");
            dst = static_cast<std::remove_reference_t<decltype(dst)>>(d);
        };
        if (key == "scenario") pc.scenario_dir = val;
        else if (key == "campaign") c.campaign = val;
        else if (key == "interest") num(c.interest, -1e9);
        else if (key == "modes") {
            c.modes.clear();
            for (const auto& m : split(val, ',')) c.modes.push_back(Mode::parse(trim(m)));
        } else if (key == "kinds") {
            c.kinds = parse_kinds_label(val);
            if (c.kinds == 0) throw Error("config key 'kinds': empty subset");
        } else if (key == "sweep_var") c.sweep_var = parse_sweep_var(val);
        else if (key == "sweep_values") {
            c.sweep_values.clear();
            for (const auto& v : split(val, ';')) {
                if (!trim(v).empty()) c.sweep_values.emplace_back(trim(v));
            }
        } else if (key == "spread_prob_per_hop") c.spread_prob_per_hop = parse_prob_vector(val);
        else if (key == "auth_prob_per_hop") c.auth_prob_per_hop = parse_prob_vector(val);
        else if (key == "replicates") num(c.replicates, 1);
        else if (key == "seed") {
            long long s = 0;
            if (!parse_int(val, s) || s < 0) throw Error("config key 'seed': bad value '" + val + "'");
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "include_isolated") c.include_isolated = parse_bool(key, val);
        else if (key == "max_hops") num(c.max_hops, 0);
        else if (key == "ttl") num(c.ttl, 1);
        else if (key == "sim_threshold") num(c.sim_threshold, 0);
        else if (key == "origin_device") {
            if (val == "mobile") c.origin_both = false;
            else if (val == "both") c.origin_both = true;
            else throw Error("config key 'origin_device': expected mobile or both");
        } else if (key == "max_sources") num(c.max_sources, 0);
        else if (key == "record_reach") c.record_reach = parse_bool(key, val);
        else if (key == "threads") num(c.threads, 1);
        else throw Error(origin + ":" + std::to_string(ln) + ": unknown config key '" + key + "'");
    }
    c.validate();
    return pc;
}

inline ParsedConfig parse_config_file(const std::string& path) {
    std::string text;
    for (const auto& l : read_lines(path)) text += l + '\n';
    return parse_config_text(text, path);
}

// --- result export -------------------------------------------------------------

/// One line of the results table; also the input of metric aggregation.
struct RunRow {
    std::string campaign;
    MacroId interest = 0;
    std::string mode;
    std::string kinds;
    std::string sweep_var;
    std::string sweep_value;
    std::uint32_t replicate = 0;
    std::string source;
    std::uint32_t reached = 0;
    std::uint32_t denominator = 0;
    double irn_pct = 0.0;
    double mean_hops = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::uint32_t> hop_hist; // optional
};

inline std::vector<RunRow> result_rows(const ExperimentResult& res) {
    std::vector<RunRow> rows;
    rows.reserve(res.runs.size());
    for (const auto& r : res.runs) {
        RunRow row;
        row.campaign = res.config.campaign;
        row.interest = res.config.interest;
        row.mode = res.modes[r.mode].label();
        row.kinds = res.kinds_column(r.mode, r.point);
        row.sweep_var = to_string(res.config.sweep_var);
        row.sweep_value = res.points[r.point].label;
        row.replicate = r.replicate;
        row.source = res.source_names[r.source];
        row.reached = r.reached;
        row.denominator = r.denominator;
        row.irn_pct = r.irn_pct;
        row.mean_hops = r.mean_hops;
        row.hop_hist = r.hop_hist;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline constexpr const char* kResultsHeader =
    "campaign,interest,mode,kinds,sweep_var,sweep_value,replicate,source,reached,denominator,irn_pct,mean_hops";

inline std::string results_to_csv(const std::vector<RunRow>& rows) {
    std::string out = std::string(kResultsHeader) + '\n';
    for (const auto& r : rows) {
        out += r.campaign + ',' + std::to_string(r.interest) + ',' + r.mode + ',' + r.kinds + ',' + r.sweep_var + ',' +
               r.sweep_value + ',' + std::to_string(r.replicate) + ',' + r.source + ',' + std::to_string(r.reached) +
               ',' + std::to_string(r.denominator) + ',' + fmt_g6(r.irn_pct) + ',' +
               (std::isnan(r.mean_hops) ? std::string() : fmt_g6(r.mean_hops)) + '\n';
    }
    return out;
}

inline std::string results_to_csv(const ExperimentResult& res) { return results_to_csv(result_rows(res)); }

/// Per-source first-reach hop histogram: one line per (run, hop) with count > 0.
inline std::string hop_hist_to_csv(const std::vector<RunRow>& rows) {
    std::string out = "campaign,mode,kinds,sweep_var,sweep_value,replicate,source,hop,count\n";
    for (const auto& r : rows) {
        for (std::size_t h = 0; h < r.hop_hist.size(); ++h) {
            if (!r.hop_hist[h]) continue;
            out += r.campaign + ',' + r.mode + ',' + r.kinds + ',' + r.sweep_var + ',' + r.sweep_value + ',' +
                   std::to_string(r.replicate) + ',' + r.source + ',' + std::to_string(h) + ',' +
                   std::to_string(r.hop_hist[h]) + '\n';
        }
    }
    return out;
}

inline std::vector<RunRow> results_from_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || trim(lines[0]) != kResultsHeader) throw Error(path + ": not a results table");
    std::vector<RunRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        const auto bad = [&] { return Error(path + ":" + std::to_string(i + 1) + ": malformed results row"); };
        if (f.size() != 12) throw bad();
        RunRow r;
        long long iv = 0;
        r.campaign = f[0];
        if (!parse_int(f[1], iv)) throw bad();
        r.interest = static_cast<MacroId>(iv);
        r.mode = f[2];
        r.kinds = f[3];
        r.sweep_var = f[4];
        r.sweep_value = f[5];
        if (!parse_int(f[6], iv) || iv < 0) throw bad();
        r.replicate = static_cast<std::uint32_t>(iv);
        r.source = f[7];
        if (!parse_int(f[8], iv) || iv < 0) throw bad();
        r.reached = static_cast<std::uint32_t>(iv);
        if (!parse_int(f[9], iv) || iv < 0) throw bad();
        r.denominator = static_cast<std::uint32_t>(iv);
        if (!parse_double(f[10], r.irn_pct)) throw bad();
        if (!trim(f[11]).empty() && !parse_double(f[11], r.mean_hops)) throw bad();
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Attaches hop histograms read from a hop_hist table to matching rows.
inline void attach_hop_hist(std::vector<RunRow>& rows, const std::string& path) {
    std::map<std::tuple<std::string, std::string, std::string, std::uint32_t, std::string>, RunRow*> index;
    for (auto& r : rows) index[{r.mode, r.kinds, r.sweep_value, r.replicate, r.source}] = &r;
    const auto lines = read_lines(path);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        long long rep = 0, hop = 0, count = 0;
        if (f.size() != 9 || !parse_int(f[5], rep) || !parse_int(f[7], hop) || !parse_int(f[8], count) || hop < 0 ||
            count < 0) {
            throw Error(path + ":" + std::to_string(i + 1) + ": malformed hop row");
        }
        auto it = index.find({f[1], f[2], f[4], static_cast<std::uint32_t>(rep), f[6]});
        if (it == index.end()) continue;
        auto& hist = it->second->hop_hist;
        if (hist.size() <= static_cast<std::size_t>(hop)) hist.resize(static_cast<std::size_t>(hop) + 1, 0);
        hist[static_cast<std::size_t>(hop)] = static_cast<std::uint32_t>(count);
    }
}

} // namespace siotbridge
