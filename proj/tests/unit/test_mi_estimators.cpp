#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "relaycc/errors.hpp"
#include "relaycc/mi_estimators.hpp"
#include "relaycc/oracle.hpp"

using namespace relaycc;

namespace {

const std::vector<RateTerm> kAll = {RateTerm::R1, RateTerm::R2, RateTerm::R3,
                                    RateTerm::R4, RateTerm::R5, RateTerm::R6,
                                    RateTerm::R7, RateTerm::R8, RateTerm::R9};

MiContext make_ctx(const char* name, double power, FadingDraw f, std::size_t noise = 20000,
                   std::uint64_t seed = 1, double relay_power = -1) {
    auto c = parse_standard(name);
    if (relay_power < 0) relay_power = power;
    return MiContext{scale(c, power), scale(c, relay_power), f, noise, RandomStream(seed)};
}

void check_oracle(RateTerm term, const MiContext& ctx) {
    const auto mc = estimate_rate(term, ctx);
    const double ref = oracle_rate(term, ctx, {48});
    INFO(to_string(term), " mc=", mc.bits, " se=", mc.std_error, " oracle=", ref);
    CHECK(std::abs(mc.bits - ref) < std::max(3 * mc.std_error, 1e-3));
}

}  // namespace

TEST_CASE("names") {
    CHECK(to_string(RateTerm::R7) == "r7");
    CHECK(parse_rate_term("r3") == RateTerm::R3);
    CHECK(parse_rate_term("R9") == RateTerm::R9);
    CHECK_FALSE(parse_rate_term("r10").has_value());
    CHECK_FALSE(parse_rate_term("x1").has_value());
}

TEST_CASE("silent links carry nothing") {
    for (auto t : kAll) {
        auto ctx = make_ctx("qam4", 3.0, {0, 0, 0});
        auto e = estimate_rate(t, ctx);
        CHECK(e.bits == 0.0);
        CHECK(e.std_error == 0.0);
    }
    auto zero = make_ctx("qam4", 0.0, {1, 1, 1});
    for (auto t : kAll) CHECK(estimate_rate(t, zero).bits == 0.0);
}

TEST_CASE("high power reaches the entropy ceiling") {
    auto q = make_ctx("qam4", 1e6, {1, 1, 0.5}, 500);
    CHECK(r1(q).bits == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(r5(q).bits == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r9(q).bits == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r7(q).bits == doctest::Approx(4.0).epsilon(1e-6));
    // Equal gains fold the 16 sums onto a 3 x 3 grid with weights 1/4, 1/2, 1/4
    // per axis, so the ceiling is the entropy of the sum: 2 * 1.5 bits.
    auto folded = make_ctx("qam4", 1e6, {1, 1, 1}, 500);
    CHECK(r1(folded).bits == doctest::Approx(3.0).epsilon(1e-6));
    auto b = make_ctx("bpsk", 1e6, {1, 1, 1}, 500);
    CHECK(r2(b).bits == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r3(b).bits == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rate_cap_bits(RateTerm::R1, q) == 4.0);
    CHECK(rate_cap_bits(RateTerm::R8, q) == 2.0);
}

TEST_CASE("agreement with quadrature at fixed points") {
    check_oracle(RateTerm::R1, make_ctx("bpsk", 1.0, {1.0, 0.0, 0.5}));
    check_oracle(RateTerm::R2, make_ctx("bpsk", 1.0, {0.0, 1.0, 0.0}));
    check_oracle(RateTerm::R3, make_ctx("bpsk", 1.0, {1.0, 1.0, 0.0}));
    check_oracle(RateTerm::R4, make_ctx("bpsk", 1.0, {0.0, 1.0, 0.0}));
    check_oracle(RateTerm::R5, make_ctx("qam4", 1.0, {1.0, 0.0, 0.0}));
    check_oracle(RateTerm::R6, make_ctx("qam4", 1.0, {1.0, 0.0, 0.0}));
    check_oracle(RateTerm::R7, make_ctx("bpsk", 1.0, {1.0, 0.0, 0.5}, 20000, 1, 2.0));
    check_oracle(RateTerm::R8, make_ctx("bpsk", 1.0, {1.0, 1.0, 0.0}));
    check_oracle(RateTerm::R9, make_ctx("bpsk", 2.0, {1.0, 0.0, 0.0}));
}

TEST_CASE("agreement with quadrature for 4-qam mac") {
    check_oracle(RateTerm::R1, make_ctx("qam4", 1.0, {0.8, 0.0, 1.1}, 20000, 4));
    check_oracle(RateTerm::R7, make_ctx("qam4", 0.5, {1.2, 0.0, 0.6}, 20000, 5, 1.0));
    check_oracle(RateTerm::R8, make_ctx("qam4", 0.7, {0.9, 1.3, 0.0}, 20000, 6));
}

TEST_CASE("silent second observation") {
    auto a = make_ctx("qam4", 2.0, {0.0, 0.8, 0}, 20000, 7);
    auto b = make_ctx("qam4", 2.0, {0.0, 0.8, 0}, 20000, 8);
    auto e3 = r3(a);
    auto e2 = r2(b);
    CHECK(std::abs(e3.bits - e2.bits) < 3 * std::hypot(e3.std_error, e2.std_error));
}

TEST_CASE("extra observation cannot hurt") {
    RandomStream pick(2024);
    std::uniform_real_distribution<double> mag(0.2, 1.5);
    for (int i = 0; i < 6; ++i) {
        FadingDraw f{mag(pick.engine()), mag(pick.engine()), mag(pick.engine())};
        auto ctx = make_ctx("qam4", 1.5, f, 4000, 100 + i);
        auto e3 = r3(ctx);
        auto e2 = r2(ctx);
        auto e8 = r8(ctx);
        auto e6 = r6(ctx);
        CHECK(e3.bits >= e2.bits - 3 * std::hypot(e3.std_error, e2.std_error));
        CHECK(e8.bits >= e6.bits - 3 * std::hypot(e8.std_error, e6.std_error));
    }
}

TEST_CASE("mac symmetry under swapping the two senders") {
    auto src = scale(parse_standard("bpsk"), 1.0);
    auto rel = scale(parse_standard("qam4"), 1.0);
    MiContext a{src, rel, {0.7, 0, 1.3}, 20000, RandomStream(9)};
    MiContext b{rel, src, {1.3, 0, 0.7}, 20000, RandomStream(10)};
    auto ea = r1(a);
    auto eb = r1(b);
    CHECK(std::abs(ea.bits - eb.bits) < 3 * std::hypot(ea.std_error, eb.std_error));
}

TEST_CASE("rates grow with power") {
    FadingDraw f{0.6, 1.1, 0.9};
    for (auto t : kAll) {
        double prev = 0.0, prev_se = 0.0;
        for (double p_db : {-10.0, -3.0, 0.0, 5.0, 10.0, 20.0}) {
            auto e = estimate_rate(t, make_ctx("qam4", std::pow(10.0, p_db / 10), f, 2000, 3));
            CHECK(e.bits >= prev - 3 * std::hypot(e.std_error, prev_se));
            prev = e.bits;
            prev_se = e.std_error;
        }
    }
}

TEST_CASE("estimates stay in range") {
    RandomStream pick(77);
    std::uniform_real_distribution<double> mag(0.0, 2.0);
    std::uniform_real_distribution<double> pdb(-20.0, 30.0);
    for (int i = 0; i < 8; ++i) {
        FadingDraw f{mag(pick.engine()), mag(pick.engine()), mag(pick.engine())};
        auto ctx = make_ctx(i % 2 ? "qam4" : "psk8", std::pow(10.0, pdb(pick.engine()) / 10), f,
                            1000, 40 + i);
        for (auto t : kAll) {
            auto e = estimate_rate(t, ctx);
            CHECK(e.bits >= -3 * e.std_error);
            CHECK(e.bits <= rate_cap_bits(t, ctx) + 3 * e.std_error);
        }
    }
}

TEST_CASE("finite at very high power") {
    for (const char* name : {"bpsk", "qam4", "qam16"}) {
        auto ctx = make_ctx(name, 1e6, {0.3, 1.7, 2.5}, 200);
        for (auto t : kAll) {
            auto e = estimate_rate(t, ctx);
            CHECK(std::isfinite(e.bits));
            CHECK(std::isfinite(e.std_error));
        }
    }
}

TEST_CASE("same stream gives the same estimate") {
    auto ctx = make_ctx("qam4", 1.0, {0.5, 0.5, 0.5}, 300, 12);
    CHECK(r1(ctx).bits == r1(ctx).bits);
    auto other = make_ctx("qam4", 1.0, {0.5, 0.5, 0.5}, 300, 13);
    CHECK(r1(ctx).bits != r1(other).bits);
}

TEST_CASE("signal table edge cases") {
    std::vector<cdouble> same{{1, 1}, {1, 1}, {1, 1}};
    CHECK(signal_set_mi(same, 1, 10, RandomStream(0)).bits == 0.0);
    std::vector<cdouble> odd{{1, 0}, {0, 1}, {2, 2}};
    CHECK_THROWS_AS(signal_set_mi(odd, 2, 10, RandomStream(0)), InvalidArgument);
    CHECK_THROWS_AS(signal_set_mi(odd, 1, 0, RandomStream(0)), InvalidArgument);

    MiContext no_relay{parse_standard("bpsk"), std::nullopt, {1, 1, 1}, 10, RandomStream(0)};
    CHECK_THROWS_AS(r1(no_relay), InvalidArgument);
    CHECK_THROWS_AS(r7(no_relay), InvalidArgument);
    CHECK_NOTHROW(r2(no_relay));
}

TEST_CASE("fading usage table") {
    CHECK(fading_use(RateTerm::R1).dr);
    CHECK_FALSE(fading_use(RateTerm::R1).rs);
    CHECK(fading_use(RateTerm::R8).rs);
    CHECK(fading_use(RateTerm::R8).ds);
    CHECK_FALSE(fading_use(RateTerm::R4).ds);
    CHECK(uses_relay_constellation(RateTerm::R7));
    CHECK_FALSE(uses_relay_constellation(RateTerm::R9));
}
