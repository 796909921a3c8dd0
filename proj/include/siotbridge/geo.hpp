#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <vector>

namespace siotbridge {

inline constexpr double kEarthRadiusM = 6371000.0;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    bool valid() const noexcept {
        return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
               lon >= -180.0 && lon <= 180.0;
    }
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline double deg_to_rad(double d) noexcept { return d * std::numbers::pi / 180.0; }

/// Great-circle distance in meters on a sphere of radius 6371 km.
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept {
    const double phi1 = deg_to_rad(a.lat);
    const double phi2 = deg_to_rad(b.lat);
    const double dphi = phi2 - phi1;
    const double dlambda = deg_to_rad(b.lon - a.lon);
    const double s1 = std::sin(dphi / 2);
    const double s2 = std::sin(dlambda / 2);
    double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

/// Midpoint by coordinate averaging; adequate at co-location scale.
inline GeoPoint midpoint(const GeoPoint& a, const GeoPoint& b) noexcept {
    return {(a.lat + b.lat) / 2.0, (a.lon + b.lon) / 2.0};
}

/// Uniform lat/lon bucket grid for fixed-radius neighbor queries.
///
/// Cells are square in degrees, sized so that one cell of latitude spans the
/// query radius. Longitude coverage widens with 1/cos(lat); near the poles the
/// query falls back to scanning every longitude bucket in the latitude band.
class GeoGrid {
public:
    GeoGrid(std::vector<GeoPoint> points, double radius_m)
        : points_(std::move(points)), radius_m_(radius_m) {
        cell_deg_ = std::max(radius_m / (kEarthRadiusM * std::numbers::pi / 180.0), 1e-6);
        for (std::uint32_t i = 0; i < points_.size(); ++i) {
            cells_[key(row(points_[i].lat), col(points_[i].lon))].push_back(i);
        }
    }

    const std::vector<GeoPoint>& points() const noexcept { return points_; }
    double radius_m() const noexcept { return radius_m_; }

    /// Visits every indexed point within radius_m of `q` as f(index, distance_m).
    template <typename F>
    void for_each_within(const GeoPoint& q, F&& f) const {
        const std::int64_t r0 = row(q.lat);
        const double lat_extent = std::min(std::abs(q.lat) + cell_deg_, 90.0);
        const double c = std::cos(deg_to_rad(lat_extent));
        const std::int64_t total_cols = static_cast<std::int64_t>(std::ceil(360.0 / cell_deg_)) + 1;
        std::int64_t span = total_cols;
        if (c > 1e-9) {
            span = static_cast<std::int64_t>(std::ceil(cell_deg_ / c / cell_deg_)) + 1;
        }
        const std::int64_t c0 = col(q.lon);
        for (std::int64_t r = r0 - 1; r <= r0 + 1; ++r) {
            if (span * 2 + 1 >= total_cols) {
                for (const auto& [k, ids] : cells_) {
                    if (k.first != r) continue;
                    visit(ids, q, f);
                }
                continue;
            }
            for (std::int64_t dc = -span; dc <= span; ++dc) {
                std::int64_t cc = c0 + dc;
                // wrap across the antimeridian
                const std::int64_t lo = col(-180.0), hi = col(180.0);
                if (cc < lo) cc += hi - lo + 1;
                if (cc > hi) cc -= hi - lo + 1;
                const auto it = cells_.find(key(r, cc));
                if (it != cells_.end()) visit(it->second, q, f);
            }
        }
    }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const noexcept {
            return static_cast<std::size_t>(splitmix(static_cast<std::uint64_t>(p.first) * 0x9e3779b97f4a7c15ULL ^
                                                     static_cast<std::uint64_t>(p.second)));
        }
        static std::uint64_t splitmix(std::uint64_t x) noexcept {
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            return x ^ (x >> 31);
        }
    };

    std::int64_t row(double lat) const noexcept { return static_cast<std::int64_t>(std::floor(lat / cell_deg_)); }
    std::int64_t col(double lon) const noexcept { return static_cast<std::int64_t>(std::floor(lon / cell_deg_)); }
    static std::pair<std::int64_t, std::int64_t> key(std::int64_t r, std::int64_t c) noexcept { return {r, c}; }

    template <typename F>
    void visit(const std::vector<std::uint32_t>& ids, const GeoPoint& q, F& f) const {
        for (auto id : ids) {
            const double d = haversine_m(q, points_[id]);
            if (d <= radius_m_) f(id, d);
        }
    }

    std::vector<GeoPoint> points_;
    double radius_m_;
    double cell_deg_;
    std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::uint32_t>, PairHash> cells_;
};

} // namespace siotbridge
