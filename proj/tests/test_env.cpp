#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "pscb/env.hpp"
#include "pscb/errors.hpp"
#include "pscb/oracle.hpp"

using namespace pscb;
using Catch::Matchers::WithinAbs;

TEST_CASE("build_synthetic: default instance layout", "[env]") {
    const auto env = build_synthetic(5000, 6, 2, 5);
    const auto& table = env.table();
    REQUIRE(table.num_segments() == 5);
    CHECK(table.change_points() == std::vector<int>{1000, 2000, 3000, 4000});
    for (std::size_t i = 0; i < 5; ++i) CHECK(table.segment_length(i) == 1000);

    for (std::size_t i = 0; i + 1 < table.num_segments(); ++i) {
        int changed = 0;
        for (std::size_t k = 0; k < 6; ++k) changed += table.segment(i).means[k] != table.segment(i + 1).means[k];
        CHECK(changed == 1);
    }

    const auto report = change_point_report(env, 2);
    CHECK_THAT(report.change_gaps[0], WithinAbs(0.6, 1e-12));
    // The top-2 set is constant across the last three segments.
    CHECK(report.optimal_super_arm_changes == std::vector<int>{1000, 2000});
    CHECK(top_m(table.segment(2).means, 2) == top_m(table.segment(4).means, 2));
}

TEST_CASE("build_synthetic: stationary and remainder layouts", "[env]") {
    const auto stationary = build_synthetic(100, 3, 1, 1);
    CHECK(stationary.table().change_points().empty());
    const auto report = change_point_report(stationary, 1);
    CHECK(report.change_points.empty());
    CHECK(report.optimal_super_arm_changes.empty());

    const auto ragged = build_synthetic(103, 6, 2, 5);
    CHECK(ragged.table().segment_length(0) == 20);
    CHECK(ragged.table().segment_length(4) == 23);

    const auto generic = build_synthetic(400, 4, 2, 8);
    REQUIRE(generic.table().num_segments() == 8);
    const auto& t = generic.table();
    for (std::size_t i = 0; i + 1 < t.num_segments(); ++i) {
        int changed = 0;
        for (std::size_t k = 0; k < 4; ++k) changed += t.segment(i).means[k] != t.segment(i + 1).means[k];
        CHECK(changed == 1);
    }
}

TEST_CASE("build_synthetic: invalid configurations", "[env]") {
    CHECK_THROWS_AS(build_synthetic(4, 6, 2, 5), InvalidConfiguration);
    CHECK_THROWS_AS(build_synthetic(100, 2, 3, 1), InvalidConfiguration);
    CHECK_THROWS_AS(build_synthetic(100, 2, 0, 1), InvalidConfiguration);
}

TEST_CASE("build_hard_instance: epsilon and layout", "[env]") {
    // Closed form (K-1)/(4 sqrt(T K ln(4/3))) evaluated independently.
    CHECK_THAT(hard_instance_epsilon(6, 5000), WithinAbs(0.013455287639341148, 1e-15));

    const auto env = build_hard_instance(6, 5000, 5, 42);
    const auto& table = env.table();
    const double eps = hard_instance_epsilon(6, 5000);
    REQUIRE(table.num_segments() == 5);
    for (std::size_t i = 0; i < 4; ++i) CHECK(table.segment_length(i) == 1000);

    int prev_best = -1;
    for (std::size_t i = 0; i < table.num_segments(); ++i) {
        const auto& mu = table.segment(i).means;
        int high = 0;
        int best = -1;
        for (std::size_t k = 0; k < mu.size(); ++k) {
            if (mu[k] == 0.5 + eps) {
                ++high;
                best = static_cast<int>(k);
            } else {
                CHECK(mu[k] == 0.5);
            }
        }
        CHECK(high == 1);
        CHECK(best != prev_best);
        prev_best = best;
        CHECK_THAT(std::accumulate(mu.begin(), mu.end(), 0.0), WithinAbs(3.0 + eps, 1e-12));
    }

    const auto single = build_hard_instance(6, 5000, 1, 3);
    CHECK(single.table().num_segments() == 1);

    const auto again = build_hard_instance(6, 5000, 5, 42);
    CHECK(again.table() == table);
}

TEST_CASE("build_hard_instance: ceil-length layout leaves the remainder to the last segment", "[env]") {
    const auto env = build_hard_instance(3, 1000, 3, 1);
    CHECK(env.table().segment_length(0) == 334);
    CHECK(env.table().segment_length(1) == 334);
    CHECK(env.table().segment_length(2) == 332);
}

TEST_CASE("build_hard_instance: consecutive optimal arms always differ", "[env][property]") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto env = build_hard_instance(3, 20000, 10, seed);
        const auto& t = env.table();
        for (std::size_t i = 0; i + 1 < t.num_segments(); ++i) {
            REQUIRE(top_m(t.segment(i).means, 1) != top_m(t.segment(i + 1).means, 1));
        }
    }
}

TEST_CASE("build_hard_instance: hypothesis violations", "[env]") {
    CHECK_THROWS_AS(build_hard_instance(2, 5000, 5, 0), InvalidConfiguration);
    CHECK_THROWS_AS(build_hard_instance(6, 10, 5, 0), InvalidConfiguration);
    CHECK(lower_bound_hypothesis_failure(5, 6, 5000) == std::nullopt);
    CHECK(lower_bound_hypothesis_failure(5, 2, 5000).has_value());
}

TEST_CASE("sample_rewards: degenerate and fair arms", "[env]") {
    const Environment env(SegmentTable(3, 10000, {{1, {1.0, 0.0, 0.5}}}), 99);
    double ones = 0.0;
    for (int t = 1; t <= 10000; ++t) {
        const auto x = sample_rewards(env, t);
        REQUIRE(x.size() == 3);
        REQUIRE(x[0] == 1.0);
        REQUIRE(x[1] == 0.0);
        REQUIRE((x[2] == 0.0 || x[2] == 1.0));
        ones += x[2];
    }
    // Binomial standard error sqrt(0.25/10000) = 0.005; 3 sigma.
    CHECK_THAT(ones / 10000.0, WithinAbs(0.5, 0.015));
    CHECK_THROWS_AS(sample_rewards(env, 0), InvalidArgument);
    CHECK_THROWS_AS(sample_rewards(env, 10001), InvalidArgument);
}

TEST_CASE("sample_rewards: counter-based determinism", "[env][property]") {
    const auto env = build_synthetic(500, 6, 2, 5).with_seed(1234);
    std::vector<std::vector<double>> forward;
    for (int t = 1; t <= 500; ++t) forward.push_back(sample_rewards(env, t));

    const auto same = build_synthetic(500, 6, 2, 5).with_seed(1234);
    for (int t = 500; t >= 1; --t) {
        for (int k = 5; k >= 0; --k) {
            REQUIRE(sample_reward(same, t, k) == forward[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(k)]);
        }
    }

    const auto other = env.with_seed(1235);
    int differences = 0;
    for (int t = 1; t <= 500; ++t) differences += sample_rewards(other, t) != forward[static_cast<std::size_t>(t - 1)];
    CHECK(differences > 0);
}

TEST_CASE("change_point_report: swapped means", "[env]") {
    const Environment env(SegmentTable(2, 10, {{1, {0.1, 0.9}}, {6, {0.9, 0.1}}}));
    const auto report = change_point_report(env, 1);
    REQUIRE(report.change_points == std::vector<int>{5});
    CHECK_THAT(report.change_gaps[0], WithinAbs(0.8, 1e-12));
    CHECK(report.optimal_super_arm_changes == std::vector<int>{5});
    CHECK_THROWS_AS(change_point_report(env, 3), InvalidArgument);
}
