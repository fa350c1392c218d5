#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relaycc/cli.hpp"
#include "relaycc/sweep_io.hpp"

using namespace relaycc;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> scenario_args(std::vector<std::string> extra) {
    std::vector<std::string> a = {"--constellation", "qam4",        "--sigma-ds-db", "-10",
                                  "--sigma-rs-db",   "2",           "--sigma-dr-db", "12",
                                  "--fading-samples", "20",         "--noise-samples", "20"};
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
}

std::vector<std::string> cmd(std::string name, std::vector<std::string> extra) {
    auto a = scenario_args(std::move(extra));
    a.insert(a.begin(), std::move(name));
    return a;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    auto d = fs::temp_directory_path() / "relaycc_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("grid syntax") {
    CHECK(cli::parse_grid("-10:40:2").size() == 26);
    CHECK(cli::parse_grid("-10:40:2").back() == 40.0);
    CHECK(cli::parse_grid("0:1:0.1").size() == 11);
    CHECK(cli::parse_grid("0:1:0.1").back() == doctest::Approx(1.0));
    CHECK(cli::parse_grid("0:1:0.3") == std::vector<double>{0, 0.3, 0.6, 0.8999999999999999});
    CHECK(cli::parse_grid("0.3, 0.5,0.7") == std::vector<double>{0.3, 0.5, 0.7});
    CHECK(cli::parse_grid("5") == std::vector<double>{5});
    CHECK_THROWS(cli::parse_grid(""));
    CHECK_THROWS(cli::parse_grid("1:2"));
    CHECK_THROWS(cli::parse_grid("1:2:0"));
    CHECK_THROWS(cli::parse_grid("3:1:1"));
    CHECK_THROWS(cli::parse_grid("1,x"));
}

TEST_CASE("bounds at one power") {
    auto r = run_cli(cmd("bounds", {"--mode", "fd", "--p-db", "0"}));
    REQUIRE(r.code == cli::kOk);
    auto t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].gain.p_db == 0.0);
    CHECK_FALSE(t.rows[0].gain.alpha.has_value());
    CHECK(t.rows[0].bounds.lower_cc.mean > 0.0);
    CHECK(t.rows[0].bounds.direct_gauss.mean > 0.0);
}

TEST_CASE("missing required flag") {
    auto r = run_cli({"bounds", "--mode", "fd", "--sigma-ds-db", "-10", "--p-db", "0"});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("--sigma-rs-db") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);
    auto no_p = run_cli(cmd("bounds", {}));
    CHECK(no_p.code == cli::kUsage);
    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
    CHECK(run_cli(cmd("bounds", {"--p-db", "0", "--mode", "xd"})).code == cli::kUsage);
    CHECK(run_cli(cmd("bounds", {"--p-db", "0", "--constellation", "qam8"})).code == cli::kUsage);
    CHECK(run_cli(cmd("bounds", {"--p-db", "0", "--mode", "hd", "--alpha", "1.2"})).code ==
          cli::kUsage);
}

TEST_CASE("power grid rows") {
    auto r = run_cli(cmd("bounds", {"--p-db", "-10:40:2"}));
    REQUIRE(r.code == cli::kOk);
    auto t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 26);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].gain.p_db > t.rows[i - 1].gain.p_db);
    CHECK(t.rows.front().gain.p_db == -10);
    CHECK(t.rows.back().gain.p_db == 40);
}

TEST_CASE("linear power axis") {
    auto r = run_cli(cmd("bounds", {"--p-db", "0,1,10", "--linear-p"}));
    REQUIRE(r.code == cli::kOk);
    auto t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 3);
    CHECK(std::isinf(t.rows[0].gain.p_db));
    CHECK(t.rows[0].bounds.lower_cc.mean == 0.0);
    CHECK(t.rows[1].gain.p_db == 0.0);
    CHECK(t.rows[2].gain.p_db == doctest::Approx(10.0));
}

TEST_CASE("gain with one alpha and one power") {
    auto r = run_cli(cmd("gain", {"--mode", "hd", "--alpha", "0.6", "--p-db", "5"}));
    REQUIRE(r.code == cli::kOk);
    auto t = parse_csv(r.out);
    REQUIRE(t.rows.size() == 1);
    CHECK(*t.rows[0].gain.alpha == 0.6);
}

TEST_CASE("four duty cycles, one file each") {
    const auto dir = scratch_dir();
    const auto out = dir / "gain.csv";
    auto r = run_cli(cmd("gain", {"--mode", "hd", "--alpha", "0.3,0.5,0.7,0.75", "--p-db", "0:10:5",
                                  "-o", out.string()}));
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.empty());
    for (const char* a : {"0.3", "0.5", "0.7", "0.75"}) {
        const auto path = dir / ("gain_alpha" + std::string(a) + ".csv");
        REQUIRE(fs::exists(path));
        auto t = parse_csv(slurp(path));
        CHECK(t.rows.size() == 3);
        CHECK(*t.rows[0].gain.alpha == std::stod(a));
    }
    CHECK_FALSE(fs::exists(out));

    auto s = run_cli(cmd("gain", {"--mode", "hd", "--alpha", "0.3,0.5,0.7,0.75", "--p-db", "0"}));
    REQUIRE(s.code == cli::kOk);
    std::size_t headers = 0, pos = 0;
    while ((pos = s.out.find("p_db,alpha", pos)) != std::string::npos) {
        ++headers;
        ++pos;
    }
    CHECK(headers == 4);
    CHECK(s.out.find("# alpha=0.75") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("peak report") {
    auto r = run_cli(cmd("gain", {"--p-db", "-10:30:10", "--report-peak"}));
    REQUIRE(r.code == cli::kOk);
    const auto line = r.out.find("# peak,p_db=");
    REQUIRE(line != std::string::npos);
    CHECK(r.out.find("gain_cc=", line) != std::string::npos);
    CHECK(parse_csv(r.out).rows.size() == 5);

    auto refined = run_cli(cmd("gain", {"--p-db", "-10:30:10", "--refine-peak"}));
    REQUIRE(refined.code == cli::kOk);
    CHECK(refined.out.find("# peak,p_db=") != std::string::npos);

    auto hd = run_cli(cmd("gain", {"--mode", "hd", "--alpha", "0.3,0.7", "--p-db", "0,10", "--report-peak"}));
    REQUIRE(hd.code == cli::kOk);
    CHECK(std::count(hd.out.begin(), hd.out.end(), '#') == 4);
}

TEST_CASE("json output") {
    auto r = run_cli(cmd("bounds", {"--p-db", "0,10", "--format", "json"}));
    REQUIRE(r.code == cli::kOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["rows"].size() == 2);
    CHECK(j["manifest"]["mc"]["fading_samples"] == 20);
    CHECK(j["manifest"]["p_grid_db"][1] == 10.0);
    CHECK(j["metadata"]["mode"] == "fd");
    CHECK(run_cli(cmd("bounds", {"--p-db", "0", "--format", "xml"})).code == cli::kUsage);
}

TEST_CASE("manifest reruns bit-identically") {
    const auto dir = scratch_dir();
    const auto manifest = dir / "run.json";
    auto first = run_cli(cmd("gain", {"--mode", "hd", "--alpha", "0.4", "--p-db", "-5:15:10", "--seed",
                                      "17", "--manifest", manifest.string()}));
    REQUIRE(first.code == cli::kOk);
    REQUIRE(fs::exists(manifest));
    auto m = nlohmann::json::parse(slurp(manifest));
    CHECK(m["mc"]["seed"] == 17);
    CHECK(m.contains("wall_clock_utc"));
    CHECK(m["tool_version"] == tool_version());

    auto again = run_cli({"gain", "--from-manifest", manifest.string()});
    REQUIRE(again.code == cli::kOk);
    CHECK(again.out == first.out);

    auto other_seed = run_cli(cmd("gain", {"--mode", "hd", "--alpha", "0.4", "--p-db", "-5:15:10"}));
    CHECK(other_seed.out != first.out);

    std::ofstream(dir / "broken.json") << "{\"mode\": 1}";
    CHECK(run_cli({"gain", "--from-manifest", (dir / "broken.json").string()}).code == cli::kUsage);
    fs::remove_all(dir);
}

TEST_CASE("scenario and constellation files") {
    const auto dir = scratch_dir();
    std::ofstream(dir / "s.json") << R"({"sigma_ds_db": -10, "sigma_rs_db": 2, "sigma_dr_db": 12})";
    std::ofstream(dir / "square.json") << "[[1,1],[-1,1],[1,-1],[-1,-1]]";
    auto by_file = run_cli({"bounds", "--scenario", (dir / "s.json").string(), "--constellation-file",
                            (dir / "square.json").string(), "--p-db", "3", "--fading-samples", "20",
                            "--noise-samples", "20"});
    REQUIRE(by_file.code == cli::kOk);
    auto by_flags = run_cli(cmd("bounds", {"--p-db", "3"}));
    REQUIRE(by_flags.code == cli::kOk);
    auto a = parse_csv(by_file.out);
    auto b = parse_csv(by_flags.out);
    // same points in a different order: equal up to Monte-Carlo noise
    CHECK(a.rows[0].bounds.lower_gauss.mean == b.rows[0].bounds.lower_gauss.mean);
    CHECK(std::abs(a.rows[0].bounds.lower_cc.mean - b.rows[0].bounds.lower_cc.mean) < 0.2);
    fs::remove_all(dir);
}

TEST_CASE("verify subcommand") {
    auto all = run_cli({"verify"});
    CHECK(all.code == cli::kOk);
    CHECK(all.out.find("# all checks passed") != std::string::npos);
    CHECK(all.out.find("FAIL") == std::string::npos);

    auto r3 = run_cli({"verify", "--which", "r3", "--nodes", "64"});
    CHECK(r3.code == cli::kOk);
    std::istringstream lines(r3.out);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') continue;
        CHECK(line.rfind("r3,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 10);

    CHECK(run_cli({"verify", "--which", "r12"}).code == cli::kUsage);
}

TEST_CASE("verify catches a broken estimator") {
    auto wrong_sign = [](RateTerm t, const MiContext& ctx) {
        auto e = estimate_rate(t, ctx);
        e.bits = -e.bits;
        return e;
    };
    std::ostringstream out, err;
    const int code = cli::run({"verify", "--which", "r2,r9", "--points", "2"}, out, err, wrong_sign);
    CHECK(code != cli::kOk);
    CHECK(out.str().find("FAIL") != std::string::npos);
}

TEST_CASE("constellation listing") {
    auto l = run_cli({"constellations", "list"});
    CHECK(l.code == cli::kOk);
    CHECK(l.out.find("qam") != std::string::npos);
    auto d = run_cli({"constellations", "dump", "bpsk"});
    CHECK(d.code == cli::kOk);
    CHECK(nlohmann::json::parse(d.out).size() == 2);
    CHECK(run_cli({"constellations", "dump"}).code == cli::kUsage);
    CHECK(run_cli({"--version"}).out == tool_version() + "\n");
}
