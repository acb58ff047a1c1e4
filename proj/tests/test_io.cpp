#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "missnet/io.hpp"

using namespace missnet;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("missnet_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        std::string p = (path / name).string();
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
    std::string at(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kConfigJson = R"({
  "network": {"id": "demo", "synthetic": "default", "synthetic_seed": 11},
  "estimation": {"terms": [{"kind": "edges"}, {"kind": "altkstar", "lambda": 2.0},
                           {"kind": "gwesp", "alpha": 0.6931471805599453}]},
  "missingness": {"models": ["hbern"], "fractions": [0.35], "representations": ["miss", "zero"],
                  "replicates": 2},
  "mle": {"burn_in": 500, "draws": 300, "max_outer": 8},
  "seed": 7,
  "threads": 1,
  "out": "OUTDIR"
})";

}  // namespace

TEST_CASE("load_network dedups undirected rows") {
    TempDir tmp;
    std::string edges = tmp.file("e.csv", "source,target\na,b\nb,a\nb,c\n");
    LoadedNetwork net = load_network(edges);
    CHECK(net.graph.n() == 3);
    CHECK(net.graph.edge_count() == 2);
    CHECK(net.labels == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("load_network rejects self-loops with the line number") {
    TempDir tmp;
    std::string edges = tmp.file("e.csv", "source,target\na,b\na,a\n");
    try {
        load_network(edges);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
        CHECK(std::string(e.what()).find("self-loop") != std::string::npos);
    }
}

TEST_CASE("load_network attribute handling") {
    TempDir tmp;
    std::string edges = tmp.file("e.csv", "source,target\na,b\nb,c\n");

    SUBCASE("numeric and categorical columns are typed by content") {
        std::string attrs = tmp.file("a.csv", "node,age,area\na,30,north\nb,25,south\nc,41,north\n");
        LoadedNetwork net = load_network(edges, attrs);
        CHECK(net.data.numeric("age")[0] == 30);
        CHECK(net.data.categorical("area")[2] == "north");
    }
    SUBCASE("missing attribute row names the node") {
        std::string attrs = tmp.file("a.csv", "node,age\na,30\nb,25\n");
        try {
            load_network(edges, attrs);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("'c'") != std::string::npos);
        }
    }
    SUBCASE("attr-only rows add isolates") {
        std::string attrs = tmp.file("a.csv", "node,age\na,30\nb,25\nc,41\nd,50\n");
        LoadedNetwork net = load_network(edges, attrs);
        CHECK(net.graph.n() == 4);
        CHECK(net.graph.degree(3) == 0);  // d sorts last
    }
    SUBCASE("ragged rows are rejected") {
        std::string attrs = tmp.file("a.csv", "node,age\na,30\nb\nc,41\n");
        CHECK_THROWS_AS(load_network(edges, attrs), ParseError);
    }
    SUBCASE("empty attribute cells are rejected") {
        std::string attrs = tmp.file("a.csv", "node,age\na,30\nb,\nc,41\n");
        CHECK_THROWS_AS(load_network(edges, attrs), ParseError);
    }
    SUBCASE("duplicate attr rows are rejected") {
        std::string attrs = tmp.file("a.csv", "node,age\na,30\nb,25\nb,26\nc,41\n");
        CHECK_THROWS_AS(load_network(edges, attrs), ParseError);
    }
}

TEST_CASE("network and attributes round-trip exactly") {
    TempDir tmp;
    std::string edges = tmp.file("e.csv", "source,target\nalice,bob\nbob,carol\nalice,dave\n");
    std::string attrs =
        tmp.file("a.csv", "node,score,group\nalice,1.25,x\nbob,-3.5,y\ncarol,0.125,x\ndave,7,y\n");
    LoadedNetwork net = load_network(edges, attrs);

    save_network(net.graph, net.labels, tmp.at("e2.csv"));
    save_attributes(net.data, net.labels, tmp.at("a2.csv"));
    LoadedNetwork again = load_network(tmp.at("e2.csv"), tmp.at("a2.csv"));
    CHECK(again.graph == net.graph);
    CHECK(again.labels == net.labels);
    CHECK(again.data.numeric("score") == net.data.numeric("score"));
    CHECK(again.data.categorical("group") == net.data.categorical("group"));
}

TEST_CASE("save_partial writes present and NA dyads only") {
    Graph x(3);
    x.set_edge(0, 1, true);
    MissMask d(3);
    d.set_edge(1, 2, true);
    TempDir tmp;
    save_partial(apply_mask(x, d), {"a", "b", "c"}, tmp.at("p.csv"));
    CHECK(slurp(tmp.at("p.csv")) == "source,target,state\na,b,1\nb,c,NA\n");
}

TEST_CASE("config parsing") {
    TempDir tmp;
    std::string body = kConfigJson;
    body.replace(body.find("OUTDIR"), 6, tmp.at("out"));
    std::string path = tmp.file("c.json", body);

    Config cfg = load_config(path);
    CHECK(cfg.network_id == "demo");
    CHECK(cfg.synthetic_kind == "default");
    CHECK(cfg.terms.size() == 3);
    CHECK(cfg.replicates == 2);
    CHECK(cfg.seed == 7);
    CHECK(cfg.mle.sampler.n_draws == 300);
    CHECK(cfg.config_hash != 0);

    SUBCASE("unknown keys are rejected") {
        std::string bad = body;
        bad.replace(bad.find("\"seed\""), 6, "\"sead\"");
        std::string bad_path = tmp.file("bad.json", bad);
        CHECK_THROWS_AS(load_config(bad_path), ConfigError);
    }
    SUBCASE("fractions outside (0,1) are rejected") {
        std::string bad = body;
        bad.replace(bad.find("[0.35]"), 6, "[1.35]");
        std::string bad_path = tmp.file("bad2.json", bad);
        CHECK_THROWS_AS(load_config(bad_path), ConfigError);
    }
    SUBCASE("malformed json is a config error") {
        std::string bad_path = tmp.file("bad3.json", "{nope");
        CHECK_THROWS_AS(load_config(bad_path), ConfigError);
    }
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("missnet") == fnv1a64("missnet"));
    CHECK(fnv1a64("a") != fnv1a64("b"));
}

TEST_CASE("records CSV pins the documented header and is byte-deterministic") {
    Graph x(6);
    for (int i = 0; i < 6; ++i) x.set_edge(i, (i + 1) % 6, true);
    x.set_edge(0, 2, true);
    ModelSpec spec({Term::edges(), Term::alt_k_star(2.0), Term::gwesp(std::log(2.0))});
    ExperimentPlan plan;
    plan.network_id = "pin";
    plan.spec = spec;
    plan.models = {{"hbern", HomBernoulli{0.35}}};
    plan.fractions = {0.35};
    plan.replicates = 1;
    plan.base_seed = 5;
    plan.mle.sampler.burn_in = 200;
    plan.mle.sampler.n_draws = 150;
    plan.mle.max_outer = 4;
    auto records = run_replicates(plan, x);

    TempDir tmp;
    std::vector<std::string> names{"edges", "altkstar(2)", "gwesp(0.693147)"};
    write_records_csv(tmp.at("r1.csv"), records, names, 0xabcdULL, 5);
    write_records_csv(tmp.at("r2.csv"), records, names, 0xabcdULL, 5);
    std::string r1 = slurp(tmp.at("r1.csv"));
    CHECK(r1 == slurp(tmp.at("r2.csv")));

    std::string expected_header =
        "network,model,fraction,representation,replicate,seed,n_missing,observed_present,"
        "converged,failure,n_iterations,theta_edges,theta_altkstar(2),theta_gwesp(0.693147),"
        "se_edges,se_altkstar(2),se_gwesp(0.693147),stat_edges,stat_altkstar(2),"
        "stat_gwesp(0.693147),centralisation";
    std::size_t second_line = r1.find('\n') + 1;
    CHECK(r1.substr(second_line, expected_header.size()) == expected_header);
    CHECK(r1.rfind("# missnet config=000000000000abcd seed=5", 0) == 0);
    // wall-clock times never reach the files
    CHECK(r1.find("wall") == std::string::npos);
}

TEST_CASE("run_cli wiring: exit codes and determinism") {
    TempDir tmp;
    std::string body = kConfigJson;
    body.replace(body.find("OUTDIR"), 6, tmp.at("out"));
    std::string cfg_path = tmp.file("c.json", body);

    auto cli = [&](std::vector<std::string> args) {
        std::vector<char*> argv;
        args.insert(args.begin(), "missnet");
        for (auto& a : args) argv.push_back(a.data());
        return run_cli(static_cast<int>(argv.size()), argv.data());
    };

    SUBCASE("enumerate bound refusal exits 2") {
        CHECK(cli({"enumerate", "--n", "6"}) == 2);
        CHECK(cli({"enumerate", "--n", "4"}) == 0);
    }
    SUBCASE("missing config exits 2, bad data exits 3") {
        CHECK(cli({"experiment", "--config", tmp.at("absent.json")}) == 2);
        std::string bad_edges = tmp.file("bad_e.csv", "source,target\na,a\n");
        std::string data_cfg = tmp.file("d.json", std::string(R"({
          "network": {"edges": ")") + bad_edges + R"("},
          "estimation": {"terms": [{"kind": "edges"}]},
          "out": ")" + tmp.at("out2") + R"("
        })");
        CHECK(cli({"fit", "--config", data_cfg}) == 3);
    }
    SUBCASE("experiment runs byte-identically under a fixed seed") {
        REQUIRE(cli({"experiment", "--config", cfg_path, "--out", tmp.at("run1")}) == 0);
        REQUIRE(cli({"experiment", "--config", cfg_path, "--out", tmp.at("run2")}) == 0);
        CHECK(slurp(tmp.at("run1") + "/records.csv") == slurp(tmp.at("run2") + "/records.csv"));
        CHECK(slurp(tmp.at("run1") + "/failure_rates.csv") ==
              slurp(tmp.at("run2") + "/failure_rates.csv"));
    }
    SUBCASE("degrade writes masks and partial graphs") {
        REQUIRE(cli({"degrade", "--config", cfg_path, "--out", tmp.at("deg")}) == 0);
        CHECK(fs::exists(tmp.at("deg") + "/mask_hbern_f35_r0.csv"));
        CHECK(fs::exists(tmp.at("deg") + "/partial_hbern_f35_r1.csv"));
        CHECK(fs::exists(tmp.at("deg") + "/labels.csv"));
    }
}

TEST_CASE("sweep outputs: csv rows per level x component and svg plots") {
    Graph x = synthetic_network("default", 11);
    ModelSpec spec({Term::edges(), Term::alt_k_star(2.0), Term::gwesp(std::log(2.0))});
    SweepPlan plan;
    plan.levels = {-0.5, 0.5};
    plan.replicates = 2;
    plan.base_seed = 3;
    plan.mle.sampler.burn_in = 300;
    plan.mle.sampler.n_draws = 200;
    plan.mle.max_outer = 4;
    plan.mask_sampler.burn_in = 500;
    SweepResult res = mnar_sweep(plan, x, spec);

    TempDir tmp;
    write_sweep_csv(tmp.at("s.csv"), res, 1, 3);
    std::string csv = slurp(tmp.at("s.csv"));
    // per level: 3 estimate rows + 3 stat rows + 1 centralisation row
    int rows = 0;
    for (char c : csv) rows += c == '\n';
    CHECK(rows == 2 + 2 * 7);  // provenance + header + data

    auto plots = write_sweep_plots(tmp.at("") + "/", res, 1, 3);
    CHECK(plots.size() == 7);
    for (const auto& p : plots) {
        std::string svg = slurp(p);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("polyline") != std::string::npos);
    }

    SUBCASE("svg emission is deterministic") {
        auto again = write_sweep_plots(tmp.at("") + "/", res, 1, 3);
        CHECK(slurp(plots[0]) == slurp(again[0]));
    }
}
