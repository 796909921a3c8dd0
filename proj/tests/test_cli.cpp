#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "fixtures.hpp"

using namespace siotbridge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int rc = -1;
    std::string err;
};

Outcome siotsim(const std::string& args, const std::string& scratch) {
    const auto err = scratch + "/stderr.txt";
    const auto cmd = std::string("\"") + SIOTSIM_EXE + "\" " + args + " >/dev/null 2>\"" + err + "\"";
    const int st = std::system(cmd.c_str());
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, fixtures::slurp(err)};
}

// a and b meet at a donut shop twelve times, c lives elsewhere
std::string trace_fixture(const std::string& name) {
    const auto dir = fixtures::temp_dir(name);
    std::string ck;
    const std::int64_t t0 = 1262304000;
    for (int i = 0; i < 12; ++i) {
        const auto ts = format_iso8601_utc(t0 + i * 86400);
        const auto ts2 = format_iso8601_utc(t0 + i * 86400 + 600);
        ck += "a\t" + ts + "\t40.0\t-105.0\tshop\n";
        ck += "b\t" + ts2 + "\t40.0005\t-105.0\tshop\n";
        ck += "c\t" + ts + "\t45.0\t-100.0\thome_c\n";
    }
    write_text(dir + "/checkins.tsv", ck);
    write_text(dir + "/friends.tsv", "a\tb\nb\tc\n");
    write_text(dir + "/poi.csv", "poi_id,lat,lon,keyword\nshop,40.0002,-105.0,Donut\npark,45.0,-100.0,Park\n");
    return dir;
}

std::string ingest_args(const std::string& in, const std::string& out) {
    return "--out " + out + " ingest --checkins " + in + "/checkins.tsv --friendships " + in + "/friends.tsv --poi " + in +
           "/poi.csv --macros " SIOTBRIDGE_DATA_DIR "/macro_categories.csv --min-checkins 1 --min-places 1";
}

std::map<std::string, std::string> stats(const std::string& path) {
    std::map<std::string, std::string> m;
    std::istringstream in(fixtures::slurp(path));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto c = line.find(',');
        m[line.substr(0, c)] = line.substr(c + 1);
    }
    return m;
}

std::size_t line_count(const std::string& path) {
    const auto s = fixtures::slurp(path);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST(Cli, HelpForEverySubcommand) {
    const auto dir = fixtures::temp_dir("cli_help");
    EXPECT_EQ(siotsim("--help", dir).rc, 0);
    for (const char* sub : {"ingest", "build-graph", "synth", "run", "report"}) {
        EXPECT_EQ(siotsim(std::string(sub) + " --help", dir).rc, 0) << sub;
    }
    EXPECT_EQ(siotsim("", dir).rc, 2);
    EXPECT_EQ(siotsim("frobnicate", dir).rc, 2);
}

TEST(Cli, IngestWritesArtifactsDeterministically) {
    const auto in = trace_fixture("cli_ingest");
    const auto out1 = in + "/o1", out2 = in + "/o2";
    ASSERT_EQ(siotsim(ingest_args(in, out1), in).rc, 0);
    ASSERT_EQ(siotsim(ingest_args(in, out2), in).rc, 0);
    for (const char* f : {"corpus_checkins.tsv", "friendships.tsv", "colocations.csv", "home_points.csv", "vuips.csv"}) {
        ASSERT_TRUE(fs::exists(out1 + "/" + f)) << f;
        EXPECT_EQ(fixtures::slurp(out1 + "/" + f), fixtures::slurp(out2 + "/" + f)) << f;
    }
    EXPECT_EQ(line_count(out1 + "/colocations.csv"), 13u);
    const auto v = fixtures::slurp(out1 + "/vuips.csv");
    EXPECT_NE(v.find("a,3,12,1"), std::string::npos);
    EXPECT_NE(v.find("b,6,12,1"), std::string::npos);
    EXPECT_EQ(v.find("\nc,"), std::string::npos);
}

TEST(Cli, MissingRequiredFlagIsUsageError) {
    const auto in = trace_fixture("cli_missing");
    auto args = ingest_args(in, in + "/o");
    args = args.substr(0, args.find(" --poi")) + args.substr(args.find(" --macros"));
    const auto r = siotsim(args, in);
    EXPECT_EQ(r.rc, 2);
    EXPECT_NE(r.err.find("--poi"), std::string::npos) << r.err;
    const auto nofile = siotsim("run --config " + in + "/nope.cfg", in);
    EXPECT_EQ(nofile.rc, 2);
    EXPECT_NE(nofile.err.find("--config"), std::string::npos);
}

TEST(Cli, BuildGraphFromIngest) {
    const auto in = trace_fixture("cli_build");
    ASSERT_EQ(siotsim(ingest_args(in, in + "/ing"), in).rc, 0);
    write_text(in + "/models.csv", "model_id,probability\nonly,1\n");
    ASSERT_EQ(siotsim("--out " + in + "/g --seed 3 build-graph --ingest-dir " + in + "/ing --models " + in + "/models.csv", in).rc, 0);
    auto st = stats(in + "/g/graph_stats.csv");
    EXPECT_EQ(st["devices"], "6");
    EXPECT_EQ(st["POR"], "15");
    EXPECT_EQ(st["OOR"], "3");
    EXPECT_EQ(st["SOR"], "1");
    EXPECT_EQ(std::stoul(st["total_lines"]), line_count(in + "/g/siot_edges.csv"));
    EXPECT_EQ(line_count(in + "/g/devices.csv"), 7u);

    write_text(in + "/ing/colocations.csv", "user_a,user_b,time_s,lat,lon,distance_m,dt_s\n");
    ASSERT_EQ(siotsim("--out " + in + "/g2 build-graph --ingest-dir " + in + "/ing", in).rc, 0);
    st = stats(in + "/g2/graph_stats.csv");
    EXPECT_EQ(st["SOR"], "0");
    EXPECT_EQ(st["devices"], "6");

    write_text(in + "/bad_models.csv", "model_id,probability\nx,0.4\n");
    const auto bad = siotsim("--out " + in + "/g3 build-graph --ingest-dir " + in + "/ing --models " + in + "/bad_models.csv", in);
    EXPECT_EQ(bad.rc, 1);
    EXPECT_NE(bad.err.find("error:"), std::string::npos);
}

TEST(Cli, SynthPlacesExactCrossEdges) {
    const auto dir = fixtures::temp_dir("cli_synth");
    ASSERT_EQ(siotsim("--out " + dir + " --seed 5 synth --communities 2 --nodes 10 --cross-por 1", dir).rc, 0);
    std::istringstream in(fixtures::slurp(dir + "/siot_edges.csv"));
    std::string line;
    int cross = 0;
    const auto community = [](const std::string& dev) { return std::stoi(dev.substr(1, dev.find(':') - 1)) / 10; };
    while (std::getline(in, line)) {
        const auto f = split(line, ',');
        if (community(f[0]) != community(f[1])) {
            ++cross;
            EXPECT_EQ(f[2], "POR");
        }
    }
    EXPECT_EQ(cross, 1);
}

TEST(Cli, RunReachesEveryoneAndIsReproducible) {
    const auto dir = fixtures::temp_dir("cli_run");
    ASSERT_EQ(siotsim("--out " + dir + "/scen --seed 2 synth --communities 2 --nodes 10 --intra-prob 1 --cross-por 1", dir).rc, 0);
    write_text(dir + "/c.cfg", "scenario = scen\ncampaign = smoke\nmodes = friendships, enhanced\nreplicates = 2\n"
                               "sweep_var = spread\nsweep_values = 0.5;1\nrecord_reach = true\n");
    ASSERT_EQ(siotsim("--out " + dir + "/r1 run --config " + dir + "/c.cfg", dir).rc, 0);
    ASSERT_EQ(siotsim("--out " + dir + "/r2 --threads 2 run --config " + dir + "/c.cfg", dir).rc, 0);
    const auto irn = fixtures::slurp(dir + "/r1/irn.csv");
    EXPECT_NE(irn.find("enhanced:POR+C-LOR+OOR+SOR+C-IOR,1,1,100,0\n"), std::string::npos) << irn;
    EXPECT_NE(irn.find("friendships:none,1,1,47.3684,0\n"), std::string::npos) << irn;
    for (const char* f : {"results.csv", "hop_hist.csv", "irn.csv", "irn.dat", "mean_hops.csv", "irn_by_hop.csv"}) {
        EXPECT_EQ(fixtures::slurp(dir + "/r1/" + f), fixtures::slurp(dir + "/r2/" + f)) << f;
    }

    ASSERT_EQ(siotsim("--out " + dir + "/rep report --results " + dir + "/r1/results.csv --hops " + dir + "/r1/hop_hist.csv", dir).rc, 0);
    EXPECT_EQ(fixtures::slurp(dir + "/rep/irn.csv"), irn);
    EXPECT_EQ(fixtures::slurp(dir + "/rep/mean_hops.csv"), fixtures::slurp(dir + "/r1/mean_hops.csv"));
}

TEST(Cli, UnknownConfigKeyIsNamed) {
    const auto dir = fixtures::temp_dir("cli_badkey");
    ASSERT_EQ(siotsim("--out " + dir + "/scen synth --nodes 4", dir).rc, 0);
    write_text(dir + "/c.cfg", "scenario = scen\nspreed_prob_per_hop = 0.5\n");
    const auto r = siotsim("--out " + dir + "/r run --config " + dir + "/c.cfg", dir);
    EXPECT_EQ(r.rc, 1);
    EXPECT_NE(r.err.find("spreed_prob_per_hop"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(dir + "/r/results.csv"));
}
