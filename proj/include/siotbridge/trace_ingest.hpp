#pragma once

// Check-in and friendship ingestion, activity filtering, co-location
// detection and home-point estimation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "common.hpp"
#include "geo.hpp"

namespace siotbridge {

using UserId = std::string;

struct CheckIn {
    UserId user_id;
    std::int64_t timestamp = 0; // seconds since epoch, UTC
    GeoPoint location;
    std::string place_id;

    friend bool operator==(const CheckIn&, const CheckIn&) = default;
};

struct CoLocation {
    UserId user_a; // user_a < user_b
    UserId user_b;
    double time = 0.0; // midpoint of the two timestamps
    GeoPoint location;
    double distance_m = 0.0;
    std::int64_t dt_s = 0;

    friend bool operator==(const CoLocation&, const CoLocation&) = default;
};

using Friendship = std::pair<UserId, UserId>; // first < second

struct TraceCorpus {
    std::vector<CheckIn> checkins; // sorted by (user_id, timestamp)
    std::set<UserId> users;
    std::set<Friendship> friendships;

    std::size_t malformed_lines = 0;
    Warnings warnings;
};

enum class TraceFormat { Brightkite };

inline Friendship canonical_pair(UserId a, UserId b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

/// Parses "YYYY-MM-DDThh:mm:ss[Z]" as UTC seconds since epoch.
inline std::optional<std::int64_t> parse_iso8601_utc(std::string_view s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char tail[8] = {0};
    const std::string str(s);
    const int n = std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%7s", &y, &mo, &d, &h, &mi, &sec, tail);
    if (n < 6) return std::nullopt;
    if (n == 7 && std::string_view(tail) != "Z") return std::nullopt;
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) return std::nullopt;
    const auto days = sys_days{ymd}.time_since_epoch().count();
    const std::int64_t t = static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + sec;
    if (t < 0) return std::nullopt;
    return t;
}

inline std::string format_iso8601_utc(std::int64_t t) {
    using namespace std::chrono;
    const auto days = static_cast<int>(t >= 0 ? t / 86400 : (t - 86399) / 86400);
    const std::int64_t rem = t - static_cast<std::int64_t>(days) * 86400;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
    return buf;
}

namespace detail {

inline void sort_checkins(std::vector<CheckIn>& v) {
    std::sort(v.begin(), v.end(), [](const CheckIn& a, const CheckIn& b) {
        return std::tie(a.user_id, a.timestamp, a.place_id, a.location.lat, a.location.lon) <
               std::tie(b.user_id, b.timestamp, b.place_id, b.location.lat, b.location.lon);
    });
}

// Below this many non-empty lines the malformed ratio is reported but never fatal.
inline constexpr std::size_t kMinLinesForMalformedRatio = 10;

} // namespace detail

/// Reads a check-in file: `user<TAB>timestamp<TAB>lat<TAB>lon<TAB>place`.
///
/// Malformed lines are skipped and counted. When more than half of a file
/// with at least ten records is malformed the whole file is rejected.
inline TraceCorpus parse_checkins(const std::string& path, TraceFormat format = TraceFormat::Brightkite) {
    (void)format; // only the Brightkite layout exists today
    TraceCorpus corpus;
    const auto lines = read_lines(path);
    std::size_t records = 0;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto text = trim(lines[ln]);
        if (text.empty()) continue;
        ++records;
        const auto f = split_ws(text);
        CheckIn c;
        double lat = 0, lon = 0;
        std::optional<std::int64_t> ts;
        bool ok = f.size() == 5;
        if (ok) ts = parse_iso8601_utc(f[1]);
        ok = ok && ts && parse_double(f[2], lat) && parse_double(f[3], lon);
        if (ok) {
            c.user_id = f[0];
            c.timestamp = *ts;
            c.location = {lat, lon};
            c.place_id = f[4];
            ok = c.location.valid() && !c.place_id.empty();
        }
        if (!ok) {
            ++corpus.malformed_lines;
            corpus.warnings.add(path + ":" + std::to_string(ln + 1) + ": malformed check-in line");
            continue;
        }
        corpus.users.insert(c.user_id);
        corpus.checkins.push_back(std::move(c));
    }
    if (records >= detail::kMinLinesForMalformedRatio && corpus.malformed_lines * 2 > records) {
        throw Error(path + ": " + std::to_string(corpus.malformed_lines) + " of " + std::to_string(records) +
                    " lines malformed");
    }
    detail::sort_checkins(corpus.checkins);
    return corpus;
}

/// Reads an undirected friendship list; duplicates and self-loops are dropped.
inline std::set<Friendship> parse_friendships(const std::string& path, Warnings& warnings) {
    std::set<Friendship> out;
    const auto lines = read_lines(path);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const auto text = trim(lines[ln]);
        if (text.empty()) continue;
        const auto f = split_ws(text);
        const std::string where = path + ":" + std::to_string(ln + 1);
        if (f.size() != 2) {
            warnings.add(where + ": malformed friendship line");
            continue;
        }
        if (f[0] == f[1]) {
            warnings.add(where + ": self-loop dropped");
            continue;
        }
        if (!out.insert(canonical_pair(f[0], f[1])).second) warnings.add(where + ": duplicate friendship dropped");
    }
    return out;
}

/// Attaches friendships whose endpoints are both known corpus users.
inline void attach_friendships(TraceCorpus& corpus, const std::set<Friendship>& friendships) {
    std::size_t dropped = 0;
    for (const auto& f : friendships) {
        if (corpus.users.count(f.first) && corpus.users.count(f.second)) {
            corpus.friendships.insert(f);
        } else {
            ++dropped;
        }
    }
    if (dropped > 0) corpus.warnings.add(std::to_string(dropped) + " friendships reference users without check-ins");
}

/// Keeps users with at least `min_checkins` check-ins at `min_places` distinct places.
inline TraceCorpus filter_active_users(const TraceCorpus& corpus, std::size_t min_checkins = 10,
                                       std::size_t min_places = 10) {
    if (min_checkins < 1 || min_places < 1) throw Error("activity thresholds must be >= 1");
    std::map<UserId, std::pair<std::size_t, std::set<std::string>>> stats;
    for (const auto& c : corpus.checkins) {
        auto& s = stats[c.user_id];
        ++s.first;
        s.second.insert(c.place_id);
    }
    TraceCorpus out;
    for (const auto& [user, s] : stats) {
        if (s.first >= min_checkins && s.second.size() >= min_places) out.users.insert(user);
    }
    for (const auto& c : corpus.checkins) {
        if (out.users.count(c.user_id)) out.checkins.push_back(c);
    }
    for (const auto& f : corpus.friendships) {
        if (out.users.count(f.first) && out.users.count(f.second)) out.friendships.insert(f);
    }
    out.malformed_lines = corpus.malformed_lines;
    return out;
}

namespace detail {

inline bool colocation_less(const CoLocation& a, const CoLocation& b) {
    return std::tie(a.time, a.user_a, a.user_b, a.dt_s, a.distance_m, a.location.lat, a.location.lon) <
           std::tie(b.time, b.user_a, b.user_b, b.dt_s, b.distance_m, b.location.lat, b.location.lon);
}

} // namespace detail

/// Canonical co-location record for two check-ins of different users.
inline CoLocation make_colocation(const CheckIn& x, const CheckIn& y) {
    const CheckIn& a = x.user_id < y.user_id ? x : y;
    const CheckIn& b = x.user_id < y.user_id ? y : x;
    CoLocation c;
    c.user_a = a.user_id;
    c.user_b = b.user_id;
    c.time = (static_cast<double>(a.timestamp) + static_cast<double>(b.timestamp)) / 2.0;
    c.location = midpoint(a.location, b.location);
    c.distance_m = haversine_m(a.location, b.location);
    c.dt_s = a.timestamp > b.timestamp ? a.timestamp - b.timestamp : b.timestamp - a.timestamp;
    return c;
}

/// Every pair of check-ins by different users within `radius_m` and
/// `window_s` (both inclusive). One record per qualifying pair; repeated
/// meetings are kept. Output sorted by time, then user pair.
inline std::vector<CoLocation> detect_colocations(const TraceCorpus& corpus, double radius_m = 250.0,
                                                  std::int64_t window_s = 1800) {
    if (!(radius_m > 0) || window_s <= 0) throw Error("co-location radius and window must be positive");
    std::vector<const CheckIn*> by_time;
    by_time.reserve(corpus.checkins.size());
    for (const auto& c : corpus.checkins) by_time.push_back(&c);
    std::sort(by_time.begin(), by_time.end(),
              [](const CheckIn* a, const CheckIn* b) { return a->timestamp < b->timestamp; });

    std::vector<CoLocation> out;
    std::size_t lo = 0;
    for (std::size_t j = 0; j < by_time.size(); ++j) {
        const CheckIn& cj = *by_time[j];
        while (cj.timestamp - by_time[lo]->timestamp > window_s) ++lo;
        for (std::size_t i = lo; i < j; ++i) {
            const CheckIn& ci = *by_time[i];
            if (ci.user_id == cj.user_id) continue;
            if (haversine_m(ci.location, cj.location) <= radius_m) out.push_back(make_colocation(ci, cj));
        }
    }
    std::sort(out.begin(), out.end(), detail::colocation_less);
    return out;
}

/// Home point: densest `cell_deg` grid cell, then the mean of its check-ins.
/// Ties go to the cell whose first check-in is earliest.
inline std::map<UserId, GeoPoint> compute_home_points(const TraceCorpus& corpus, double cell_deg = 0.25,
                                                      Warnings* warnings = nullptr) {
    if (!(cell_deg > 0)) throw Error("home-point cell size must be positive");
    struct Cell {
        std::size_t count = 0;
        std::int64_t first = 0;
        double lat_sum = 0, lon_sum = 0;
    };
    std::map<UserId, std::map<std::pair<std::int64_t, std::int64_t>, Cell>> cells;
    for (const auto& c : corpus.checkins) {
        const std::pair<std::int64_t, std::int64_t> k{static_cast<std::int64_t>(std::floor(c.location.lat / cell_deg)),
                                                      static_cast<std::int64_t>(std::floor(c.location.lon / cell_deg))};
        auto& cell = cells[c.user_id][k];
        if (cell.count == 0 || c.timestamp < cell.first) cell.first = c.timestamp;
        ++cell.count;
        cell.lat_sum += c.location.lat;
        cell.lon_sum += c.location.lon;
    }
    std::map<UserId, GeoPoint> homes;
    for (const auto& [user, grid] : cells) {
        const Cell* best = nullptr;
        for (const auto& [k, cell] : grid) {
            if (!best || cell.count > best->count || (cell.count == best->count && cell.first < best->first)) {
                best = &cell;
            }
        }
        const auto n = static_cast<double>(best->count);
        homes[user] = {best->lat_sum / n, best->lon_sum / n};
    }
    if (warnings) {
        for (const auto& u : corpus.users) {
            if (!homes.count(u)) warnings->add("user " + u + " has no check-ins; no home point");
        }
    }
    return homes;
}

// --- intermediate artifact I/O ------------------------------------------------

inline std::string checkins_to_tsv(const std::vector<CheckIn>& checkins) {
    std::string s;
    for (const auto& c : checkins) {
        s += c.user_id + '\t' + format_iso8601_utc(c.timestamp) + '\t' + fmt_exact(c.location.lat) + '\t' +
             fmt_exact(c.location.lon) + '\t' + c.place_id + '\n';
    }
    return s;
}

inline std::string friendships_to_tsv(const std::set<Friendship>& friendships) {
    std::string s;
    for (const auto& [a, b] : friendships) s += a + '\t' + b + '\n';
    return s;
}

inline std::string colocations_to_csv(const std::vector<CoLocation>& colocs) {
    std::string s = "user_a,user_b,time_s,lat,lon,distance_m,dt_s\n";
    for (const auto& c : colocs) {
        s += c.user_a + ',' + c.user_b + ',' + fmt_exact(c.time) + ',' + fmt_exact(c.location.lat) + ',' +
             fmt_exact(c.location.lon) + ',' + fmt_exact(c.distance_m) + ',' + std::to_string(c.dt_s) + '\n';
    }
    return s;
}

inline std::vector<CoLocation> colocations_from_csv(const std::string& path) {
    std::vector<CoLocation> out;
    const auto lines = read_lines(path);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        CoLocation c;
        long long dt = 0;
        if (f.size() != 7 || !parse_double(f[2], c.time) || !parse_double(f[3], c.location.lat) ||
            !parse_double(f[4], c.location.lon) || !parse_double(f[5], c.distance_m) || !parse_int(f[6], dt)) {
            throw Error(path + ":" + std::to_string(i + 1) + ": malformed co-location row");
        }
        c.user_a = f[0];
        c.user_b = f[1];
        c.dt_s = dt;
        out.push_back(std::move(c));
    }
    return out;
}

inline std::string home_points_to_csv(const std::map<UserId, GeoPoint>& homes) {
    std::string s = "user,lat,lon\n";
    for (const auto& [u, p] : homes) s += u + ',' + fmt_exact(p.lat) + ',' + fmt_exact(p.lon) + '\n';
    return s;
}

inline std::map<UserId, GeoPoint> home_points_from_csv(const std::string& path) {
    std::map<UserId, GeoPoint> out;
    const auto lines = read_lines(path);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], ',');
        GeoPoint p;
        if (f.size() != 3 || !parse_double(f[1], p.lat) || !parse_double(f[2], p.lon) || !p.valid()) {
            throw Error(path + ":" + std::to_string(i + 1) + ": malformed home-point row");
        }
        out[f[0]] = p;
    }
    return out;
}

} // namespace siotbridge
