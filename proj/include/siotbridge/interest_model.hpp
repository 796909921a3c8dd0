#pragma once

// Points of interest, macro-categories and per-owner interest descriptors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "geo.hpp"
#include "trace_ingest.hpp"

namespace siotbridge {

using MacroId = int;

struct PoI {
    std::string poi_id;
    GeoPoint location;
    std::string keyword;
};

struct MacroCategory {
    MacroId id = 0;
    std::string name;
    std::set<std::string> keywords;
};

/// Keyword-to-category lookup. A keyword may belong to several categories.
class MacroMap {
public:
    MacroMap() = default;
    explicit MacroMap(std::vector<MacroCategory> cats) : cats_(std::move(cats)) {
        std::sort(cats_.begin(), cats_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        for (std::size_t i = 1; i < cats_.size(); ++i) {
            if (cats_[i].id == cats_[i - 1].id) throw Error("duplicate macro-category id " + std::to_string(cats_[i].id));
        }
        for (const auto& c : cats_) {
            if (c.keywords.empty()) throw Error("macro-category " + std::to_string(c.id) + " has no keywords");
            for (const auto& k : c.keywords) by_keyword_[k].push_back(c.id);
        }
    }

    const std::vector<MacroCategory>& categories() const noexcept { return cats_; }

    /// Sorted ids of every category containing `keyword`; empty if none.
    const std::vector<MacroId>& categories_of(const std::string& keyword) const {
        static const std::vector<MacroId> none;
        const auto it = by_keyword_.find(keyword);
        return it == by_keyword_.end() ? none : it->second;
    }

    const MacroCategory* find(MacroId id) const {
        const auto it = std::lower_bound(cats_.begin(), cats_.end(), id,
                                         [](const MacroCategory& c, MacroId v) { return c.id < v; });
        return it != cats_.end() && it->id == id ? &*it : nullptr;
    }

private:
    std::vector<MacroCategory> cats_;
    std::map<std::string, std::vector<MacroId>> by_keyword_;
};

/// PoI collection with a radius index built per query radius.
struct PoiCatalog {
    std::vector<PoI> pois;
    Warnings warnings;
};

struct InterestAssignment {
    std::size_t colocation_index = 0;
    std::vector<MacroId> macro_ids;
    std::string poi_id;
    double match_distance_m = 0.0;
};

/// Interest descriptor (VUIP) of one owner: per-category meeting counts and
/// the derived binary set of held categories.
struct InterestDescriptor {
    std::string owner; // empty once anonymized
    std::map<MacroId, std::uint32_t> weights;
    std::vector<MacroId> held; // sorted, unique

    bool empty() const noexcept { return held.empty(); }

    /// Copy with the owner stripped, as carried inside propagation tokens.
    InterestDescriptor anonymized() const {
        InterestDescriptor d = *this;
        d.owner.clear();
        return d;
    }

    static InterestDescriptor from_held(std::string owner, std::vector<MacroId> held) {
        InterestDescriptor d;
        d.owner = std::move(owner);
        std::sort(held.begin(), held.end());
        held.erase(std::unique(held.begin(), held.end()), held.end());
        for (auto id : held) d.weights[id] = 1;
        d.held = std::move(held);
        return d;
    }
};

inline PoiCatalog load_poi_catalog(const std::string& path) {
    PoiCatalog cat;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        if (i == 0 && !f.empty() && trim(f[0]) == "poi_id") continue;
        PoI p;
        const std::string where = path + ":" + std::to_string(i + 1);
        if (f.size() != 4 || !parse_double(f[1], p.location.lat) || !parse_double(f[2], p.location.lon)) {
            cat.warnings.add(where + ": malformed PoI row skipped");
            continue;
        }
        if (!p.location.valid()) {
            cat.warnings.add(where + ": PoI with invalid coordinates skipped");
            continue;
        }
        p.poi_id = std::string(trim(f[0]));
        p.keyword = std::string(trim(f[3]));
        if (p.keyword.empty()) {
            cat.warnings.add(where + ": PoI without keyword skipped");
            continue;
        }
        cat.pois.push_back(std::move(p));
    }
    return cat;
}

/// Reads `macro_id,name,keyword` rows (one keyword per row).
inline MacroMap load_macro_categories(const std::string& path) {
    std::map<MacroId, MacroCategory> cats;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        if (i == 0 && !f.empty() && trim(f[0]) == "macro_id") continue;
        long long id = 0;
        if (f.size() != 3 || !parse_int(f[0], id)) {
            throw Error(path + ":" + std::to_string(i + 1) + ": malformed macro-category row");
        }
        auto& c = cats[static_cast<MacroId>(id)];
        c.id = static_cast<MacroId>(id);
        const std::string name(trim(f[1]));
        if (!c.name.empty() && c.name != name) {
            throw Error(path + ": duplicate macro-category id " + std::to_string(id) + " with different names");
        }
        c.name = name;
        c.keywords.insert(std::string(trim(f[2])));
    }
    std::vector<MacroCategory> v;
    for (auto& [id, c] : cats) v.push_back(std::move(c));
    return MacroMap(std::move(v));
}

/// Keywords present in the catalog but absent from every macro-category.
inline std::set<std::string> unmatched_keywords(const PoiCatalog& catalog, const MacroMap& macros) {
    std::set<std::string> out;
    for (const auto& p : catalog.pois) {
        if (macros.categories_of(p.keyword).empty()) out.insert(p.keyword);
    }
    return out;
}

/// Nearest PoI within `poi_radius_m` for each co-location (ties: smaller
/// poi_id). The assignment credits every category holding that PoI's keyword.
inline std::vector<InterestAssignment> assign_colocation_interests(const std::vector<CoLocation>& colocs,
                                                                   const PoiCatalog& catalog, const MacroMap& macros,
                                                                   double poi_radius_m = 250.0) {
    std::vector<GeoPoint> pts;
    pts.reserve(catalog.pois.size());
    for (const auto& p : catalog.pois) pts.push_back(p.location);
    const GeoGrid grid(std::move(pts), poi_radius_m);

    std::vector<InterestAssignment> out;
    for (std::size_t i = 0; i < colocs.size(); ++i) {
        std::optional<std::uint32_t> best;
        double best_d = 0;
        grid.for_each_within(colocs[i].location, [&](std::uint32_t id, double d) {
            if (!best || d < best_d || (d == best_d && catalog.pois[id].poi_id < catalog.pois[*best].poi_id)) {
                best = id;
                best_d = d;
            }
        });
        if (!best) continue;
        const PoI& p = catalog.pois[*best];
        out.push_back({i, macros.categories_of(p.keyword), p.poi_id, best_d});
    }
    return out;
}

/// Counts assigned co-locations per (user, category); a category is held
/// once its count reaches `interest_threshold`.
inline std::map<UserId, InterestDescriptor> build_vuips(const std::vector<InterestAssignment>& assignments,
                                                        const std::vector<CoLocation>& colocs,
                                                        std::uint32_t interest_threshold = 10) {
    if (interest_threshold < 1) throw Error("interest threshold must be >= 1");
    std::map<UserId, InterestDescriptor> out;
    for (const auto& a : assignments) {
        const auto& c = colocs.at(a.colocation_index);
        for (const UserId* u : {&c.user_a, &c.user_b}) {
            auto& d = out[*u];
            d.owner = *u;
            for (auto id : a.macro_ids) ++d.weights[id];
        }
    }
    for (auto& [u, d] : out) {
        for (const auto& [id, n] : d.weights) {
            if (n >= interest_threshold) d.held.push_back(id);
        }
    }
    return out;
}

/// Cosine of the binary held-category vectors; 0 when either is empty.
inline double cosine_similarity(const InterestDescriptor& a, const InterestDescriptor& b) noexcept {
    if (a.held.empty() || b.held.empty()) return 0.0;
    std::size_t shared = 0;
    auto i = a.held.begin();
    auto j = b.held.begin();
    while (i != a.held.end() && j != b.held.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
    }
    if (shared == a.held.size() && shared == b.held.size()) return 1.0;
    return static_cast<double>(shared) /
           std::sqrt(static_cast<double>(a.held.size()) * static_cast<double>(b.held.size()));
}

inline bool has_interest(const InterestDescriptor& d, MacroId id) noexcept {
    return std::binary_search(d.held.begin(), d.held.end(), id);
}

// --- VUIP export: owner,macro_id,count,held ----------------------------------

inline std::string vuips_to_csv(const std::map<UserId, InterestDescriptor>& vuips) {
    std::string s = "owner,macro_id,count,held\n";
    for (const auto& [owner, d] : vuips) {
        for (const auto& [id, n] : d.weights) {
            s += owner + ',' + std::to_string(id) + ',' + std::to_string(n) + ',' + (has_interest(d, id) ? "1" : "0") +
                 '\n';
        }
    }
    return s;
}

inline std::map<UserId, InterestDescriptor> vuips_from_csv(const std::string& path) {
    std::map<UserId, InterestDescriptor> out;
    const auto lines = read_lines(path);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        long long id = 0, n = 0, held = 0;
        if (f.size() != 4 || !parse_int(f[1], id) || !parse_int(f[2], n) || !parse_int(f[3], held) || n < 0) {
            throw Error(path + ":" + std::to_string(i + 1) + ": malformed VUIP row");
        }
        auto& d = out[f[0]];
        d.owner = f[0];
        d.weights[static_cast<MacroId>(id)] = static_cast<std::uint32_t>(n);
        if (held) d.held.push_back(static_cast<MacroId>(id));
    }
    for (auto& [o, d] : out) {
        std::sort(d.held.begin(), d.held.end());
        d.held.erase(std::unique(d.held.begin(), d.held.end()), d.held.end());
    }
    return out;
}

} // namespace siotbridge
