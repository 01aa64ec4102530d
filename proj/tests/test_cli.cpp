#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hpn/commands.hpp"
#include "hpn/config.hpp"

using namespace hpn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
fs::path tmp_dir(const std::string& name) {
    const char* base = std::getenv("HPN_TEST_TMP");
    fs::path p = fs::path(base ? base : fs::temp_directory_path().string()) / ("cli_" + name);
    fs::remove_all(p);
    return p;
}
std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}
int run(int (*verb)(const CommandOptions&, std::ostream&, std::ostream&), const std::string& cfg,
        const fs::path& out, std::string* err_text = nullptr) {
    CommandOptions o;
    o.config_text = cfg;
    o.out = out.string();
    std::ostringstream so, se;
    const int rc = verb(o, so, se);
    if (err_text) *err_text = se.str();
    return rc;
}
json read_json(const fs::path& p) { return json::parse(slurp(p)); }

const char* kSoliton = R"({
  "grid": {"N": 256, "L": 24.0},
  "flow": {"kind": "mkdv", "t_end": 0.5, "galilean_removed": true, "cfl": 0.25},
  "initial": {"preset": "mkdv_soliton", "a": 2.0},
  "output": {"cadence": 1000}
})";
const char* kKink = R"({
  "grid": {"N": 256, "L": 24.0, "mode": "line"},
  "flow": {"kind": "sg", "dt": 0.005, "t_end": 0.02, "cfl": 0.1, "dealias": false},
  "initial": {"preset": "sg_kink", "a": 2.0},
  "output": {"cadence": 2}
})";
}  // namespace

TEST_CASE("config defaults and validation") {
    const RunConfig c = parse_config("{}");
    CHECK(c.n == 1);
    CHECK(c.grid.N == 256);
    CHECK(c.flow.kind == "mkdv");
    CHECK(c.initial.preset == "random");
    CHECK(c.has_format("csv"));
    CHECK_FALSE(c.has_format("binary"));

    CHECK_THROWS_AS(parse_config(R"({"grid": {"N": 64, "spacing": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"extra": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"N": "many"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"flow": {"kind": "kdv"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"algebra": {"n": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"initial": {"preset": "sg_vector_kink"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.json"), ConfigError);
}

TEST_CASE("config survives a JSON round trip") {
    const RunConfig c = parse_config(R"({
      "algebra": {"n": 2},
      "grid": {"N": 128, "L": 3.5, "mode": "line"},
      "flow": {"kind": "sg", "dt": 0.001, "t_end": 0.01, "sg_branch": "plus"},
      "initial": {"coefficients": [{"component": "v1", "k": 2, "cos": [1, 0, 0, 0]}]},
      "output": {"formats": ["binary"], "curve": true, "wave_map": false}
    })");
    const std::string a = config_to_json(c);
    CHECK(config_to_json(parse_config(a)) == a);
    for (const auto& p : preset_registry()) CHECK(!p.provenance.empty());
}

TEST_CASE("verify reports config errors and passes on the algebra scope") {
    CommandOptions o;
    o.scope = "bogus";
    std::ostringstream so, se;
    CHECK(cmd_verify(o, so, se) == kExitConfig);
    o.scope = "algebra";
    CHECK(cmd_verify(o, so, se) == kExitOk);
    CHECK(so.str().find("criterion 1") != std::string::npos);
}

TEST_CASE("simulate with t_end = 0 writes only the initial snapshot") {
    const fs::path d = tmp_dir("t0");
    REQUIRE(run(cmd_simulate, R"({"grid": {"N": 32}, "initial": {"preset": "zero"}})", d) == kExitOk);
    int count = 0;
    for (const auto& e : fs::directory_iterator(d / "snapshots"))
        if (e.path().extension() == ".csv") ++count;
    CHECK(count == 1);
    CHECK(read_json(d / "summary.json")["steps"] == 0);
}

TEST_CASE("soliton run conserves the Hamiltonians") {
    const fs::path d = tmp_dir("soliton");
    REQUIRE(run(cmd_simulate, kSoliton, d) == kExitOk);
    const json s = read_json(d / "summary.json");
    CHECK(s["drift_H0"].get<double>() < 1e-6);
    CHECK(s["drift_H1"].get<double>() < 1e-6);
}

TEST_CASE("kink run satisfies the wave map check and is deterministic") {
    const fs::path a = tmp_dir("kink_a"), b = tmp_dir("kink_b");
    REQUIRE(run(cmd_simulate, kKink, a) == kExitOk);
    REQUIRE(run(cmd_simulate, kKink, b) == kExitOk);
    CHECK(read_json(a / "wave_map.json")["residual"].get<double>() < 1e-5);
    int compared = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file() || e.path().filename() == "config.json") continue;
        const fs::path rel = fs::relative(e.path(), a);
        CHECK_MESSAGE(slurp(e.path()) == slurp(b / rel), rel.string());
        ++compared;
    }
    CHECK(compared > 3);
}

TEST_CASE("hierarchy tables") {
    {
        const fs::path d = tmp_dir("h0");
        CommandOptions o;
        o.config_text = R"({"algebra": {"n": 2}, "grid": {"N": 64}})";
        o.out = d.string();
        o.lmax = 0;
        std::ostringstream so, se;
        REQUIRE(cmd_hierarchy(o, so, se) == kExitOk);
        const std::string head = slurp(d / "hierarchy.csv").substr(0, 200);
        CHECK(head.find("h0_u_i") != std::string::npos);
        CHECK(head.find("h1_") == std::string::npos);
    }
    {
        const fs::path d = tmp_dir("hz");
        REQUIRE(run(cmd_hierarchy, R"({"grid": {"N": 64}, "initial": {"preset": "zero"}})", d) == kExitOk);
        for (const auto& e : read_json(d / "hierarchy.json")["hamiltonians"]) CHECK(e["H"].get<double>() == 0.0);
    }
    {
        const fs::path d = tmp_dir("h1");
        REQUIRE(run(cmd_hierarchy,
                    R"({"algebra": {"n": 2}, "grid": {"N": 256, "mode": "line"},
                        "initial": {"preset": "random", "seed": 3, "amplitude": 1.0, "localize": true}})",
                    d) == kExitOk);
        for (const auto& e : read_json(d / "hierarchy.json")["hamiltonians"])
            CHECK(e["H"].get<double>() == doctest::Approx(e["local"].get<double>()).epsilon(1e-9));
    }
}

TEST_CASE("a step above the CFL bound is a config error") {
    std::string err;
    const int rc = run(cmd_simulate, R"({"grid": {"N": 128}, "flow": {"dt": 0.1, "t_end": 1.0}})", tmp_dir("cfl"), &err);
    CHECK(rc == kExitConfig);
    CHECK(!err.empty());
}

TEST_CASE("reconstruct writes the curve tables") {
    const fs::path d = tmp_dir("rec");
    REQUIRE(run(cmd_reconstruct, R"({"grid": {"N": 128, "L": 24.0, "mode": "line"}, "initial": {"preset": "sg_kink"}})", d) ==
            kExitOk);
    for (const char* f : {"curve.csv", "chordal.csv", "invariants.csv", "frame.json"}) CHECK(fs::exists(d / f));
}
