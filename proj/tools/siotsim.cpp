// siotsim: trace ingest, graph construction, synthetic scenarios, campaigns
// and reports from the command line.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "siotbridge/siotbridge.hpp"

namespace fs = std::filesystem;
using namespace siotbridge;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out = ".";
};

void print_warnings(const Warnings& w, const std::string& stage) {
    constexpr std::size_t kShown = 20;
    for (std::size_t i = 0; i < w.messages.size() && i < kShown; ++i) {
        std::cerr << "warning [" << stage << "]: " << w.messages[i] << '\n';
    }
    if (w.size() > kShown) std::cerr << "warning [" << stage << "]: " << (w.size() - kShown) << " more\n";
}

fs::path out_dir(const Globals& g) {
    fs::create_directories(g.out);
    return fs::path(g.out);
}

void write_file(const fs::path& dir, const char* name, const std::string& text) {
    write_text((dir / name).string(), text);
    std::cout << "wrote " << (dir / name).string() << '\n';
}

Averaging parse_averaging(const std::string& s) {
    if (s == "per_replicate") return Averaging::PerReplicate;
    if (s == "pooled") return Averaging::Pooled;
    throw Error("unknown averaging: " + s);
}

// --- ingest --------------------------------------------------------------------

struct IngestArgs {
    std::string checkins, friendships, poi, macros;
    std::size_t min_checkins = 10, min_places = 10;
    double coloc_radius = 250.0, coloc_window = 1800.0, poi_radius = 250.0, home_cell = 0.25;
    std::uint32_t interest_threshold = 10;
};

void cmd_ingest(const IngestArgs& a, const Globals& g) {
    auto raw = parse_checkins(a.checkins);
    print_warnings(raw.warnings, "checkins");
    Warnings fw;
    const auto friendships = parse_friendships(a.friendships, fw);
    print_warnings(fw, "friendships");
    auto corpus = filter_active_users(raw, a.min_checkins, a.min_places);
    attach_friendships(corpus, friendships);
    print_warnings(corpus.warnings, "corpus");

    const auto colocs = detect_colocations(corpus, a.coloc_radius, a.coloc_window);
    Warnings hw;
    const auto homes = compute_home_points(corpus, a.home_cell, &hw);
    print_warnings(hw, "home points");

    const auto catalog = load_poi_catalog(a.poi);
    print_warnings(catalog.warnings, "poi");
    const auto macros = load_macro_categories(a.macros);
    const auto unmatched = unmatched_keywords(catalog, macros);
    if (!unmatched.empty()) std::cerr << "note: " << unmatched.size() << " PoI keywords map to no macro-category\n";
    const auto assignments = assign_colocation_interests(colocs, catalog, macros, a.poi_radius);
    const auto vuips = build_vuips(assignments, colocs, a.interest_threshold);

    const auto dir = out_dir(g);
    write_file(dir, "corpus_checkins.tsv", checkins_to_tsv(corpus.checkins));
    write_file(dir, "friendships.tsv", friendships_to_tsv(corpus.friendships));
    write_file(dir, "colocations.csv", colocations_to_csv(colocs));
    write_file(dir, "home_points.csv", home_points_to_csv(homes));
    write_file(dir, "vuips.csv", vuips_to_csv(vuips));
    std::cout << corpus.users.size() << " active users, " << corpus.checkins.size() << " check-ins, "
              << colocs.size() << " co-locations, " << vuips.size() << " VUIPs\n";
}

// --- build-graph ---------------------------------------------------------------

struct BuildArgs {
    std::string ingest_dir, models;
    double clor_radius = 250.0;
    std::size_t sor_threshold = 3;
};

void cmd_build_graph(const BuildArgs& a, const Globals& g) {
    const fs::path in(a.ingest_dir);
    for (const char* f : {"home_points.csv", "colocations.csv", "friendships.tsv", "vuips.csv"}) {
        if (!fs::exists(in / f)) throw Error("ingest artifact missing: " + (in / f).string());
    }
    const auto homes = home_points_from_csv((in / "home_points.csv").string());
    const auto colocs = colocations_from_csv((in / "colocations.csv").string());
    Warnings w;
    const auto friendships = parse_friendships((in / "friendships.tsv").string(), w);
    print_warnings(w, "friendships");
    const auto vuips = vuips_from_csv((in / "vuips.csv").string());
    const auto catalog = a.models.empty() ? ModelCatalog::uniform() : load_model_catalog(a.models);

    std::set<UserId> users;
    for (const auto& [u, p] : homes) users.insert(u);
    const auto devices = instantiate_devices(users, homes, catalog, g.seed.value_or(1));
    const auto siot = build_siot_graph(devices, colocs, {a.clor_radius, a.sor_threshold});
    const auto sc = make_scenario(friendships, siot, vuips, {}, users);

    const auto dir = out_dir(g);
    save_scenario(sc, dir);
    write_file(dir, "graph_stats.csv", graph_stats_csv(sc.siot));
    std::cout << sc.users.size() << " users, " << sc.friends.edge_count() << " friendships, "
              << sc.siot.devices().size() << " devices, " << sc.siot.edges().size() << " SIoT edges\n";
}

// --- synth ---------------------------------------------------------------------

void cmd_synth(SyntheticParams params, const Globals& g) {
    if (g.seed) params.seed = *g.seed;
    const auto sc = generate_synthetic(params);
    const auto dir = out_dir(g);
    save_scenario(sc, dir);
    write_file(dir, "graph_stats.csv", graph_stats_csv(sc.siot));
    std::cout << sc.users.size() << " users, " << sc.friends.edge_count() << " friendships, "
              << sc.siot.edges().size() << " SIoT edges\n";
}

// --- run / report --------------------------------------------------------------

void write_reports(const fs::path& dir, const std::vector<RunRow>& rows, Averaging avg, int max_hops) {
    Warnings w;
    const auto irn = mean_irn_pct(rows, avg, &w);
    print_warnings(w, "report");
    write_file(dir, "irn.csv", series_to_csv(irn));
    write_file(dir, "irn.dat", series_to_plot_data(irn));
    write_file(dir, "mean_hops.csv", series_to_csv(mean_hops_series(rows)));
    const bool have_hops = std::all_of(rows.begin(), rows.end(), [](const RunRow& r) { return r.reached == 0 || !r.hop_hist.empty(); });
    if (have_hops && max_hops >= 0) {
        const auto by_hop = irn_by_hop(rows, max_hops);
        write_file(dir, "irn_by_hop.csv", series_to_csv(by_hop));
        write_file(dir, "irn_by_hop.dat", series_to_plot_data(by_hop));
    }
    for (const auto& s : irn) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::cout << s.label << " @ " << s.x_label[i] << ": mean IRN " << fmt_g6(s.y[i]) << "%";
            if (!std::isnan(s.ci[i])) std::cout << " +/- " << fmt_g6(s.ci[i]);
            std::cout << '\n';
        }
    }
}

struct RunArgs {
    std::string config, scenario, averaging = "per_replicate";
};

void cmd_run(const RunArgs& a, const Globals& g) {
    auto pc = parse_config_file(a.config);
    auto& cfg = pc.config;
    if (g.seed) cfg.seed = *g.seed;
    if (g.threads) cfg.threads = *g.threads;
    std::string scen = a.scenario.empty() ? pc.scenario_dir : a.scenario;
    if (scen.empty()) throw Error("no scenario given (config key 'scenario' or --scenario)");
    if (a.scenario.empty() && fs::path(scen).is_relative()) scen = (fs::path(a.config).parent_path() / scen).string();
    const auto sc = load_scenario(scen);
    const auto res = run_campaign(cfg, sc);
    const auto rows = result_rows(res);

    const auto dir = out_dir(g);
    write_file(dir, "results.csv", results_to_csv(rows));
    write_file(dir, "hop_hist.csv", hop_hist_to_csv(rows));
    int max_hops = 0;
    for (const auto& p : res.points) max_hops = std::max(max_hops, p.max_hops);
    write_reports(dir, rows, parse_averaging(a.averaging), max_hops);

    if (cfg.record_reach) {
        std::optional<std::uint32_t> on, off;
        for (std::uint32_t i = 0; i < res.modes.size(); ++i) {
            if (res.modes[i].kind != ModeKind::Enhanced) continue;
            (res.modes[i].cior ? on : off) = i;
        }
        if (on && off) {
            const auto cmp = mean_hops_comparison(res, *on, *off);
            print_warnings(cmp.warnings, "hops");
            write_file(dir, "hop_comparison.csv", hop_comparison_to_csv(cmp, res.source_names));
            std::cout << "mean hops with C-IOR " << fmt_g6(cmp.mean_with) << ", without " << fmt_g6(cmp.mean_without)
                      << ", ratio " << fmt_g6(cmp.ratio) << '\n';
        }
    }
}

struct ReportArgs {
    std::string results, hops, averaging = "per_replicate";
};

void cmd_report(const ReportArgs& a, const Globals& g) {
    auto rows = results_from_csv(a.results);
    int max_hops = -1;
    if (!a.hops.empty()) {
        attach_hop_hist(rows, a.hops);
        for (const auto& r : rows) max_hops = std::max(max_hops, static_cast<int>(r.hop_hist.size()) - 1);
        max_hops = std::max(max_hops, 0);
    }
    write_reports(out_dir(g), rows, parse_averaging(a.averaging), max_hops);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"siotsim: interest-driven content diffusion over human and SIoT graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed (overrides config)");
    app.add_option("--threads", g.threads, "Worker thread cap")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output directory")->capture_default_str();

    IngestArgs ia;
    auto* ingest = app.add_subcommand("ingest", "Parse traces and derive co-locations, home points and VUIPs");
    ingest->add_option("--checkins", ia.checkins, "Check-in file (tab-separated)")->required()->check(CLI::ExistingFile);
    ingest->add_option("--friendships", ia.friendships, "Friendship edge list")->required()->check(CLI::ExistingFile);
    ingest->add_option("--poi", ia.poi, "PoI catalog CSV")->required()->check(CLI::ExistingFile);
    ingest->add_option("--macros", ia.macros, "Macro-category CSV")->required()->check(CLI::ExistingFile);
    ingest->add_option("--min-checkins", ia.min_checkins, "Activity filter: check-ins")->capture_default_str();
    ingest->add_option("--min-places", ia.min_places, "Activity filter: distinct places")->capture_default_str();
    ingest->add_option("--colocation-radius", ia.coloc_radius, "Co-location radius (m)")->capture_default_str();
    ingest->add_option("--colocation-window", ia.coloc_window, "Co-location window (s)")->capture_default_str();
    ingest->add_option("--poi-radius", ia.poi_radius, "PoI match radius (m)")->capture_default_str();
    ingest->add_option("--home-cell", ia.home_cell, "Home-point grid cell (deg)")->capture_default_str();
    ingest->add_option("--interest-threshold", ia.interest_threshold, "Co-locations needed to hold a category")
        ->capture_default_str();

    BuildArgs ba;
    auto* build = app.add_subcommand("build-graph", "Instantiate devices and establish SIoT relationships");
    build->add_option("--ingest-dir", ba.ingest_dir, "Directory written by ingest")->required()->check(CLI::ExistingDirectory);
    build->add_option("--models", ba.models, "Model catalog CSV (default: 10 equiprobable models)")
        ->check(CLI::ExistingFile);
    build->add_option("--clor-radius", ba.clor_radius, "C-LOR radius (m)")->capture_default_str();
    build->add_option("--sor-threshold", ba.sor_threshold, "Co-locations needed for SOR")->capture_default_str();

    SyntheticParams ss;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic community scenario");
    synth->add_option("--communities", ss.communities)->capture_default_str();
    synth->add_option("--nodes", ss.nodes_per_community, "Nodes per community")->capture_default_str();
    synth->add_option("--intra-prob", ss.intra_friend_prob, "Intra-community friendship probability")
        ->capture_default_str();
    synth->add_option("--cross-por", ss.cross_por)->capture_default_str();
    synth->add_option("--cross-clor", ss.cross_clor)->capture_default_str();
    synth->add_option("--cross-sor", ss.cross_sor)->capture_default_str();
    synth->add_option("--interest", ss.interest)->capture_default_str();
    synth->add_option("--interest-prob", ss.interest_prob)->capture_default_str();
    synth->add_option("--categories", ss.categories)->capture_default_str();
    synth->add_option("--extra-interest-prob", ss.extra_interest_prob)->capture_default_str();

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Run a campaign from a config file");
    run->add_option("--config", ra.config, "Experiment config")->required()->check(CLI::ExistingFile);
    run->add_option("--scenario", ra.scenario, "Scenario directory (overrides config)")->check(CLI::ExistingDirectory);
    run->add_option("--averaging", ra.averaging, "per_replicate or pooled")->capture_default_str();

    ReportArgs rp;
    auto* report = app.add_subcommand("report", "Aggregate a results table");
    report->add_option("--results", rp.results, "results.csv from run")->required()->check(CLI::ExistingFile);
    report->add_option("--hops", rp.hops, "hop_hist.csv from run")->check(CLI::ExistingFile);
    report->add_option("--averaging", rp.averaging, "per_replicate or pooled")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) cmd_ingest(ia, g);
        else if (*build) cmd_build_graph(ba, g);
        else if (*synth) cmd_synth(ss, g);
        else if (*run) cmd_run(ra, g);
        else if (*report) cmd_report(rp, g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
