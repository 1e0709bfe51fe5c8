#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pscb/segment_table.hpp"

namespace pscb {

// A piecewise-stationary Bernoulli environment. Immutable; copies share the mean table.
//
// Rewards are drawn from a counter-based stream: the reward of arm k at time t depends only on
// (seed, t, k), so sampling order and partial sampling never change the realized rewards.
class Environment {
public:
    explicit Environment(SegmentTable table, std::uint64_t seed = 0);

    const SegmentTable& table() const noexcept { return *table_; }
    std::uint64_t seed() const noexcept { return seed_; }
    int num_arms() const noexcept { return table_->num_arms(); }
    int horizon() const noexcept { return table_->horizon(); }

    Environment with_seed(std::uint64_t seed) const;

    std::span<const double> means_at(int t) const { return table_->means_at(t); }

private:
    std::shared_ptr<const SegmentTable> table_;
    std::uint64_t seed_;
};

// Full reward vector at time t (values in {0,1}); semi-bandit masking is the caller's job.
std::vector<double> sample_rewards(const Environment& env, int t);
double sample_reward(const Environment& env, int t, int arm);

struct ChangePointReport {
    std::vector<int> change_points;              // last step of each non-final segment
    std::vector<double> change_gaps;             // max_k |mu_k^{i+1} - mu_k^i|, parallel to change_points
    std::vector<int> optimal_super_arm_changes;  // subset of change_points where top-m changes
};

ChangePointReport change_point_report(const Environment& env, int m);

// Synthetic m-set instance: Bernoulli arms, equal-length segments (last one absorbs T mod N),
// exactly one arm changes at every change-point. For K=6, N=5 a fixed table is used whose first
// change has magnitude 0.6 and whose top-2 set is the same over the last three segments.
Environment build_synthetic(int horizon = 5000, int num_arms = 6, int m = 2, int num_segments = 5,
                            std::uint64_t seed = 0);

// Randomized minimax hard instance: each segment has one arm at 1/2 + eps and the rest at 1/2;
// the next segment's optimal arm is uniform over the other K-1 arms.
Environment build_hard_instance(int num_arms, int horizon, int num_segments, std::uint64_t seed);

double hard_instance_epsilon(int num_arms, int horizon);

// Returns a description of the first violated lower-bound hypothesis (K >= 3 and
// T >= N (K-1)^2 / (K log(4/3))), or nullopt when both hold.
std::optional<std::string> lower_bound_hypothesis_failure(int num_segments, int num_arms, int horizon);

}  // namespace pscb
