#pragma once

// Aggregation of per-source runs into mean IRN curves, cumulative by-hop
// curves and hop comparisons, plus CSV / plot-data emission.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "common.hpp"
#include "experiment.hpp"

namespace siotbridge {

struct MetricSeries {
    std::string label;
    std::vector<double> x;
    std::vector<std::string> x_label;
    std::vector<double> y;
    std::vector<double> ci; // NaN: absent (fewer than two replicates)

    std::size_t size() const noexcept { return x.size(); }
    void push(double xv, std::string xl, double yv, double c) {
        x.push_back(xv);
        x_label.push_back(std::move(xl));
        y.push_back(yv);
        ci.push_back(c);
    }
    void validate() const {
        const auto n = x.size();
        if (x_label.size() != n || y.size() != n || ci.size() != n) throw Error("series '" + label + "' has ragged columns");
        for (double c : ci) {
            if (c < 0) throw Error("series '" + label + "' has a negative CI half-width");
        }
    }
};

enum class Averaging : std::uint8_t { PerReplicate, Pooled };

/// Sum of values independent of their input order.
inline double stable_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double s = 0;
    for (double x : v) s += x;
    return s;
}

struct MeanCi {
    double mean = 0.0;
    double ci = std::numeric_limits<double>::quiet_NaN();
};

/// Mean and 1.96·s/√R half-width of replicate means.
inline MeanCi mean_ci(const std::vector<double>& replicate_means) {
    MeanCi out;
    const auto r = replicate_means.size();
    if (r == 0) return out;
    out.mean = stable_sum(replicate_means) / static_cast<double>(r);
    if (r >= 2) {
        const auto [lo, hi] = std::minmax_element(replicate_means.begin(), replicate_means.end());
        if (*lo == *hi) {
            out.mean = *lo;
            out.ci = 0.0;
            return out;
        }
        std::vector<double> sq;
        sq.reserve(r);
        for (double v : replicate_means) sq.push_back((v - out.mean) * (v - out.mean));
        const double s = std::sqrt(stable_sum(std::move(sq)) / static_cast<double>(r - 1));
        out.ci = 1.96 * s / std::sqrt(static_cast<double>(r));
    }
    return out;
}

namespace detail {

inline std::string series_label(const RunRow& r) {
    return r.sweep_var == "kinds" ? r.mode : r.mode + ":" + r.kinds;
}

/// x coordinate per sweep value: numeric values as-is, otherwise the order of
/// first appearance (rows come in sweep order).
inline std::map<std::string, double> x_coordinates(const std::vector<RunRow>& rows) {
    std::map<std::string, double> xs;
    bool numeric = true;
    for (const auto& r : rows) {
        double v = 0;
        if (xs.emplace(r.sweep_value, static_cast<double>(xs.size())).second && !parse_double(r.sweep_value, v)) numeric = false;
    }
    if (numeric) {
        for (auto& [label, x] : xs) parse_double(label, x);
    }
    return xs;
}

using Cell = std::pair<std::string, std::string>; // (series label, sweep value)

/// Groups per-run values by series, sweep point and replicate.
template <typename F>
std::map<Cell, std::map<std::uint32_t, std::vector<double>>> group_values(const std::vector<RunRow>& rows, F value) {
    std::map<Cell, std::map<std::uint32_t, std::vector<double>>> g;
    for (const auto& r : rows) g[{series_label(r), r.sweep_value}][r.replicate].push_back(value(r));
    return g;
}

inline MeanCi reduce_cell(const std::map<std::uint32_t, std::vector<double>>& reps, Averaging avg) {
    std::vector<double> means;
    std::vector<double> all;
    for (const auto& [rep, vals] : reps) {
        if (vals.empty()) continue;
        means.push_back(stable_sum(vals) / static_cast<double>(vals.size()));
        all.insert(all.end(), vals.begin(), vals.end());
    }
    MeanCi out = mean_ci(means);
    if (avg == Averaging::Pooled && !all.empty()) out.mean = stable_sum(all) / static_cast<double>(all.size());
    return out;
}

inline std::vector<MetricSeries> to_series(const std::map<std::string, std::vector<std::tuple<double, std::string, MeanCi>>>& acc) {
    std::vector<MetricSeries> out;
    for (const auto& [label, pts] : acc) {
        auto sorted = pts;
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b)); });
        MetricSeries s;
        s.label = label;
        for (const auto& [x, xl, m] : sorted) s.push(x, xl, m.mean, m.ci);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace detail

/// Mean IRN% per (series, sweep point): sources are averaged within a
/// replicate, then replicates are averaged. Series are labeled by mode plus
/// kind subset.
inline std::vector<MetricSeries> mean_irn_pct(const std::vector<RunRow>& rows, Averaging avg = Averaging::PerReplicate,
                                              Warnings* warnings = nullptr) {
    const auto xs = detail::x_coordinates(rows);
    const auto groups = detail::group_values(rows, [](const RunRow& r) { return r.irn_pct; });
    std::map<std::string, std::vector<std::tuple<double, std::string, MeanCi>>> acc;
    for (const auto& [cell, reps] : groups) {
        if (reps.empty()) {
            if (warnings) warnings->add("empty group " + cell.first + " @ " + cell.second + " omitted");
            continue;
        }
        acc[cell.first].emplace_back(xs.at(cell.second), cell.second, detail::reduce_cell(reps, avg));
    }
    return detail::to_series(acc);
}

inline std::vector<MetricSeries> mean_irn_pct(const ExperimentResult& res, Averaging avg = Averaging::PerReplicate) {
    return mean_irn_pct(result_rows(res), avg);
}

/// Mean over sources and replicates of the per-source mean hop (runs that
/// reach nobody are skipped).
inline std::vector<MetricSeries> mean_hops_series(const std::vector<RunRow>& rows) {
    std::vector<RunRow> reached;
    for (const auto& r : rows) {
        if (!std::isnan(r.mean_hops)) reached.push_back(r);
    }
    const auto xs = detail::x_coordinates(rows);
    const auto groups = detail::group_values(reached, [](const RunRow& r) { return r.mean_hops; });
    std::map<std::string, std::vector<std::tuple<double, std::string, MeanCi>>> acc;
    for (const auto& [cell, reps] : groups) {
        acc[cell.first].emplace_back(xs.at(cell.second), cell.second, detail::reduce_cell(reps, Averaging::PerReplicate));
    }
    return detail::to_series(acc);
}

/// Cumulative IRN% counting nodes first reached within h hops, h = 0..max_hops,
/// one series per (mode, sweep point).
inline std::vector<MetricSeries> irn_by_hop(const std::vector<RunRow>& rows, int max_hops) {
    if (max_hops < 0) throw Error("max_hops must be >= 0");
    for (const auto& r : rows) {
        if (r.hop_hist.empty() && r.reached > 0) throw Error("irn_by_hop needs hop annotations");
    }
    std::vector<MetricSeries> out;
    std::map<detail::Cell, std::vector<const RunRow*>> cells;
    for (const auto& r : rows) cells[{detail::series_label(r), r.sweep_value}].push_back(&r);
    for (const auto& [cell, members] : cells) {
        MetricSeries s;
        s.label = cell.second == "-" ? cell.first : cell.first + "@" + cell.second;
        for (int h = 0; h <= max_hops; ++h) {
            std::map<std::uint32_t, std::vector<double>> reps;
            for (const RunRow* r : members) {
                std::uint32_t cum = 0;
                for (int k = 1; k <= h && static_cast<std::size_t>(k) < r->hop_hist.size(); ++k) cum += r->hop_hist[static_cast<std::size_t>(k)];
                reps[r->replicate].push_back(r->denominator ? 100.0 * cum / r->denominator : 0.0);
            }
            const auto m = detail::reduce_cell(reps, Averaging::PerReplicate);
            s.push(h, std::to_string(h), m.mean, m.ci);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<MetricSeries> irn_by_hop(const ExperimentResult& res) {
    int max_hops = 0;
    for (const auto& p : res.points) max_hops = std::max(max_hops, p.max_hops);
    return irn_by_hop(result_rows(res), max_hops);
}

struct HopPair {
    NodeId source = 0;
    std::uint32_t point = 0;
    std::uint32_t replicate = 0;
    std::size_t common = 0;   // nodes reached in both conditions
    double with_cior = 0.0;   // mean first-reach hop over the common nodes
    double without_cior = 0.0;
};

struct HopComparison {
    std::vector<HopPair> pairs;
    double mean_with = std::numeric_limits<double>::quiet_NaN();
    double mean_without = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN(); // mean_with / mean_without
    Warnings warnings;
};

/// Pairs runs by (point, replicate, source) and compares mean hops over
/// nodes reached in both. Needs runs recorded with reach detail.
inline HopComparison mean_hops_comparison(const std::vector<SourceRun>& with_cior, const std::vector<SourceRun>& without) {
    using Key = std::tuple<std::uint32_t, std::uint32_t, NodeId>;
    std::map<Key, const SourceRun*> base;
    for (const auto& r : without) base[{r.point, r.replicate, r.source}] = &r;
    HopComparison out;
    std::map<Key, HopPair> pairs;
    for (const auto& r : with_cior) {
        const Key k{r.point, r.replicate, r.source};
        auto it = base.find(k);
        if (it == base.end()) {
            out.warnings.add("source " + std::to_string(r.source) + " missing from the baseline runs");
            continue;
        }
        const SourceRun& b = *it->second;
        if (r.reached_nodes.size() != r.reached || b.reached_nodes.size() != b.reached) {
            throw Error("mean_hops_comparison needs runs recorded with reach detail");
        }
        HopPair p{r.source, r.point, r.replicate, 0, 0.0, 0.0};
        std::size_t i = 0, j = 0;
        double sw = 0, sb = 0;
        while (i < r.reached_nodes.size() && j < b.reached_nodes.size()) {
            if (r.reached_nodes[i] < b.reached_nodes[j]) ++i;
            else if (b.reached_nodes[j] < r.reached_nodes[i]) ++j;
            else {
                sw += r.reached_hops[i++];
                sb += b.reached_hops[j++];
                ++p.common;
            }
        }
        if (p.common == 0) continue; // nothing to compare
        p.with_cior = sw / static_cast<double>(p.common);
        p.without_cior = sb / static_cast<double>(p.common);
        pairs.emplace(k, p);
    }
    std::vector<double> w, b;
    for (auto& [k, p] : pairs) {
        w.push_back(p.with_cior);
        b.push_back(p.without_cior);
        out.pairs.push_back(p);
    }
    if (!out.pairs.empty()) {
        out.mean_with = stable_sum(w) / static_cast<double>(w.size());
        out.mean_without = stable_sum(b) / static_cast<double>(b.size());
        out.ratio = out.mean_without > 0 ? out.mean_with / out.mean_without : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

/// Convenience over a campaign holding both C-IOR on and off Enhanced modes.
inline HopComparison mean_hops_comparison(const ExperimentResult& res, std::uint32_t mode_with, std::uint32_t mode_without) {
    std::vector<SourceRun> a, b;
    for (const auto& r : res.runs) {
        if (r.mode == mode_with) a.push_back(r);
        else if (r.mode == mode_without) b.push_back(r);
    }
    return mean_hops_comparison(a, b);
}

// --- emission ------------------------------------------------------------------

inline std::string series_to_csv(const std::vector<MetricSeries>& series) {
    std::string out = "series,x,x_label,mean,ci_halfwidth\n";
    for (const auto& s : series) {
        s.validate();
        for (std::size_t i = 0; i < s.size(); ++i) {
            out += s.label + ',' + fmt_g6(s.x[i]) + ',' + s.x_label[i] + ',' + fmt_g6(s.y[i]) + ',' +
                   (std::isnan(s.ci[i]) ? std::string() : fmt_g6(s.ci[i])) + '\n';
        }
    }
    return out;
}

/// Gnuplot-style blocks: "# label" then "x y err" rows, blank line between.
inline std::string series_to_plot_data(const std::vector<MetricSeries>& series) {
    std::string out;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        s.validate();
        if (k) out += "\n\n";
        out += "# " + s.label + '\n';
        for (std::size_t i = 0; i < s.size(); ++i) {
            out += fmt_g6(s.x[i]) + ' ' + fmt_g6(s.y[i]) + ' ' + fmt_g6(std::isnan(s.ci[i]) ? 0.0 : s.ci[i]) + '\n';
        }
    }
    return out;
}

inline void emit_csv(const std::vector<MetricSeries>& series, const std::string& path) {
    write_text(path, series_to_csv(series));
}

inline void emit_plot_data(const std::vector<MetricSeries>& series, const std::string& path) {
    write_text(path, series_to_plot_data(series));
}

inline std::string hop_comparison_to_csv(const HopComparison& c, const std::vector<std::string>& names = {}) {
    std::string out = "point,replicate,source,common,mean_hops_with_cior,mean_hops_without_cior\n";
    for (const auto& p : c.pairs) {
        out += std::to_string(p.point) + ',' + std::to_string(p.replicate) + ',' +
               (p.source < names.size() ? names[p.source] : std::to_string(p.source)) + ',' + std::to_string(p.common) +
               ',' + fmt_g6(p.with_cior) + ',' + fmt_g6(p.without_cior) + '\n';
    }
    out += "# ratio " + (std::isnan(c.ratio) ? std::string("nan") : fmt_g6(c.ratio)) + '\n';
    return out;
}

} // namespace siotbridge
