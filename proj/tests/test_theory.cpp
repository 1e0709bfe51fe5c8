#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pscb/env.hpp"
#include "pscb/errors.hpp"
#include "pscb/policies.hpp"
#include "pscb/theory.hpp"

using namespace pscb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("delay bound: reference values", "[theory]") {
    CHECK(delay_bound_d(6, 0.05, 0.01, 5000, 0.5) == 102673);
    CHECK(delay_bound_d(6, 0.05, 0.01, 5000, 0.25) == 410329);
    CHECK(delay_bound_d(1, 1.0, 0.01, 1000, 0.6) == 546);
    CHECK(delay_bound_d(1, 1.0, 0.01, 2000, 0.6) == 568);
    CHECK(delay_bound_d(1, 1.0, 0.01, 3000, 0.6) == 580);
    CHECK_THROWS_AS(delay_bound_d(6, 0.05, 0.01, 5000, 0.0), InvalidArgument);
    CHECK_THROWS_AS(delay_bound_d(6, 0.0, 0.01, 5000, 0.5), InvalidArgument);
}

TEST_CASE("delay bound: monotone in every argument", "[theory][property]") {
    for (int K = 1; K <= 8; ++K) {
        for (double p : {0.01, 0.1, 0.5}) {
            for (double gap : {0.1, 0.3, 0.6}) {
                const auto d = delay_bound_d(K, p, 0.01, 5000, gap);
                REQUIRE(delay_bound_d(K + 1, p, 0.01, 5000, gap) >= d);
                REQUIRE(delay_bound_d(K, p * 1.5, 0.01, 5000, gap) <= d);
                REQUIRE(delay_bound_d(K, p, 0.01, 5000, gap * 1.5) <= d);
                REQUIRE(delay_bound_d(K, p, 0.02, 5000, gap) <= d);
                REQUIRE(delay_bound_d(K, p, 0.01, 10000, gap) >= d);
            }
        }
    }
}

TEST_CASE("gap assumption: violated on the default synthetic instance", "[theory]") {
    const auto params = default_params(PolicyKind::glr_cucb, 5000, 6, 2, 5);
    const auto report = check_gap_assumption(build_synthetic().table(), params.p, params.delta);
    REQUIRE(report.delays.size() == 4);
    CHECK(report.delays[0] == 883927);
    CHECK_FALSE(report.satisfied());
    CHECK(report.segments[0].required == 2 * report.delays[0]);
}

TEST_CASE("gap assumption: satisfied on a long two-segment stream", "[theory]") {
    const SegmentTable table(1, 100000, {{1, {0.2}}, {50001, {0.8}}});
    const auto report = check_gap_assumption(table, 1.0, 0.01);
    REQUIRE(report.delays.size() == 1);
    CHECK(report.delays[0] == delay_bound_d(1, 1.0, 0.01, 100000, 0.6));
    CHECK(report.satisfied());
    CHECK(report.segments.size() == 2);
    CHECK(report.segments[1].required == 2 * report.delays[0]);

    const SegmentTable stationary(2, 100, {{1, {0.2, 0.4}}});
    CHECK(check_gap_assumption(stationary, 0.5, 0.1).segments.empty());
    CHECK(check_gap_assumption(stationary, 0.5, 0.1).satisfied());
}

TEST_CASE("regret upper bound: hand-computed stationary instance", "[theory]") {
    // K = 2, m = 1, mu = (0.9, 0.5), T = 100, p = 0.1, delta = 0.01, L = 1.
    const SegmentTable table(2, 100, {{1, {0.9, 0.5}}});
    const auto b = regret_upper_bound(table, 1, 1.0, 0.1, 0.01, 1.0);
    CHECK_THAT(b.ucb_term, WithinRel(277.76818478602485, 1e-12));
    CHECK_THAT(b.uniform_term, WithinRel(4.0, 1e-12));
    CHECK(b.delay_term == 0.0);
    CHECK_THAT(b.false_alarm_term, WithinRel(2.4, 1e-12));
    CHECK_THAT(b.total, WithinRel(284.1681847860248, 1e-12));
}

TEST_CASE("regret upper bound: degenerate gaps", "[theory]") {
    const SegmentTable table(2, 100, {{1, {0.5, 0.5}}});
    CHECK_THROWS_AS(regret_upper_bound(table, 1, 1.0, 0.1, 0.01, 1.0), DegenerateGaps);
}

TEST_CASE("regret upper bound: terms add up", "[theory][property]") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int K = 2 + trial % 4;
        const int m = 1 + trial % (K - 1);
        const auto env = build_synthetic(3000, K, m, 1 + trial % 5);
        const double p = 0.01 + 0.5 * u(rng);
        const double delta = 0.001 + 0.1 * u(rng);
        const auto b = regret_upper_bound(env.table(), m, 1.0, p, delta, std::sqrt(m));
        REQUIRE_THAT(b.total, WithinAbs(b.ucb_term + b.uniform_term + b.delay_term + b.false_alarm_term, 1e-9));
        REQUIRE(b.ucb_term > 0.0);
    }
}

TEST_CASE("tuned parameters", "[theory]") {
    const auto known = tuned_params(5000, 6, 5);
    CHECK_THAT(known.delta, WithinRel(1.0 / 5000, 1e-15));
    CHECK_THAT(known.p, WithinRel(0.22606007862623032, 1e-12));
    CHECK_THAT(known.p * known.p * 5000 / std::log(5000.0), WithinRel(30.0, 1e-12));
    CHECK_THAT(tuned_params(5000, 6, std::nullopt).p, WithinRel(0.10109714056143965, 1e-12));
    CHECK(tuned_params(10, 6, 5).p == 1.0);
}

TEST_CASE("minimax lower bound", "[theory]") {
    CHECK_THAT(lower_bound_m1(), WithinRel(3.4760594967822085, 1e-12));
    CHECK_THAT(lower_bound_m2(), WithinRel(0.07768413940597456, 1e-12));
    CHECK_THAT(minimax_lower_bound(5, 6, 5000), WithinRel(30.08693781837948, 1e-12));
    CHECK_THROWS_AS(minimax_lower_bound(5, 2, 5000), HypothesisNotMet);
    CHECK_THROWS_AS(minimax_lower_bound(5, 6, 10), HypothesisNotMet);
}
