#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "relaycc/errors.hpp"
#include "relaycc/sweep_io.hpp"

using namespace relaycc;

namespace {

SweepTable sample_table(bool with_alpha) {
    SweepTable t;
    t.meta.mode = with_alpha ? RelayMode::HalfDuplex : RelayMode::FullDuplex;
    t.meta.constellation = "qam4";
    t.meta.tool_version = "test";
    const double p_values[] = {-INFINITY, -10, 0.5, 40};
    for (std::size_t i = 0; i < 4; ++i) {
        SweepRow r;
        r.gain.p_db = p_values[i];
        if (with_alpha) r.gain.alpha = 0.75;
        r.bounds.lower_cc = {1.234567891 * double(i), 0.00123456789};
        r.bounds.upper_cc = {1.3 * double(i), 1e-12};
        r.bounds.lower_gauss = {2.0 / 3.0 * double(i), 0};
        r.bounds.upper_gauss = {0.7 * double(i), 0};
        r.bounds.direct_cc = {0.1 * double(i), 0.01};
        r.bounds.direct_gauss = {0.2 * double(i), 0};
        r.gain.gain_cc = {-0.0000123456789, 3.3e-5};
        r.gain.gain_gauss = {1.5, 0};
        r.gain.lower_branch = r.bounds.lower_branch = i % 2 ? Branch::Mac : Branch::Broadcast;
        r.gain.upper_branch = r.bounds.upper_branch = Branch::Broadcast;
        t.rows.push_back(r);
    }
    return t;
}

}  // namespace

TEST_CASE("header and layout") {
    const std::string csv = to_csv(sample_table(false));
    std::istringstream in(csv);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header ==
          "p_db,alpha,lower_cc,lower_cc_se,upper_cc,upper_cc_se,lower_g,upper_g,direct_cc,"
          "direct_cc_se,direct_g,gain_cc,gain_cc_se,gain_g,lower_branch,upper_branch");
    CHECK(first.rfind("-inf,,0,", 0) == 0);
    CHECK(csv.find("1.23457") != std::string::npos);
    CHECK(csv.find("-1.23457e-05") != std::string::npos);
    CHECK(csv.find(",mac,bc") != std::string::npos);
}

TEST_CASE("csv round trip") {
    for (bool alpha : {false, true}) {
        const auto t = sample_table(alpha);
        const std::string once = to_csv(t);
        const auto parsed = parse_csv(once);
        REQUIRE(parsed.rows.size() == t.rows.size());
        CHECK(to_csv(parsed) == once);
        CHECK(parse_csv(to_csv(parsed)).rows[3].bounds.lower_cc.mean ==
              parsed.rows[3].bounds.lower_cc.mean);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& a = t.rows[i];
            const auto& b = parsed.rows[i];
            CHECK(a.gain.alpha.has_value() == b.gain.alpha.has_value());
            CHECK(b.bounds.lower_cc.mean == doctest::Approx(a.bounds.lower_cc.mean).epsilon(1e-5));
            CHECK(b.gain.gain_cc.mean == doctest::Approx(a.gain.gain_cc.mean).epsilon(1e-5));
            CHECK(b.gain.lower_branch == a.gain.lower_branch);
        }
        CHECK(std::isinf(parsed.rows[0].gain.p_db));
    }
}

TEST_CASE("parser tolerates comments and rejects junk") {
    std::string csv = "# alpha=0.3\n" + to_csv(sample_table(true)) + "# peak,p_db=4\n";
    CHECK(parse_csv(csv).rows.size() == 4);
    CHECK_THROWS_AS(parse_csv(""), InvalidArgument);
    CHECK_THROWS_AS(parse_csv("a,b,c\n1,2,3\n"), InvalidArgument);
    std::string bad = to_csv(sample_table(false));
    bad += "1,2,3\n";
    CHECK_THROWS_AS(parse_csv(bad), InvalidArgument);
    std::string bad_branch = to_csv(SweepTable{}) + "0,,1,0,1,0,1,1,1,0,1,0,0,0,xx,bc\n";
    CHECK_THROWS_AS(parse_csv(bad_branch), InvalidArgument);
    std::string bad_number = to_csv(SweepTable{}) + "0,,1x,0,1,0,1,1,1,0,1,0,0,0,bc,bc\n";
    CHECK_THROWS_AS(parse_csv(bad_number), InvalidArgument);
}

TEST_CASE("json mirrors the csv") {
    auto t = sample_table(true);
    auto j = nlohmann::json::parse(to_json(t, R"({"seed": 3})"));
    CHECK(j["metadata"]["mode"] == "hd");
    CHECK(j["metadata"]["constellation"] == "qam4");
    CHECK(j["manifest"]["seed"] == 3);
    CHECK(j["columns"].size() == csv_columns().size());
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][2]["lower_cc"].get<double>() == t.rows[2].bounds.lower_cc.mean);
    CHECK(j["rows"][1]["alpha"] == 0.75);
    CHECK(j["rows"][1]["lower_branch"] == "mac");

    auto fd = nlohmann::json::parse(to_json(sample_table(false)));
    CHECK(fd["rows"][0]["alpha"].is_null());
    CHECK_FALSE(fd.contains("manifest"));
}
