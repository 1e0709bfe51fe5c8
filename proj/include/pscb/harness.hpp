#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pscb/env.hpp"
#include "pscb/policies.hpp"

namespace pscb {

struct RunTrace {
    std::vector<double> cumulative_regret;  // entry t-1 holds the regret after step t
    std::vector<PolicyEvent> events;
    std::vector<std::uint64_t> actions;     // bit mask of the played super arm per step; empty if not recorded

    bool operator==(const RunTrace&) const = default;
};

struct EpisodeOptions {
    bool record_actions = true;
};

// Plays one episode over [1, T]. Regret is measured against the true means:
// alpha * max_S r(S, mu_t) - r(S_t, mu_t) per step. Rewards and the policy's random stream are
// derived from `seed` alone.
RunTrace run_episode(const Environment& env, int m, Policy& policy, double alpha, std::uint64_t seed,
                     EpisodeOptions options = {});
RunTrace run_episode(const Environment& env, int m, const PolicyParams& params, double alpha, std::uint64_t seed,
                     EpisodeOptions options = {});

// Fills environment-dependent parameters: Oracle-CUCB restarts at the change-points where the
// optimal super arm changes, unless restart times were given explicitly.
PolicyParams bind_to_environment(PolicyParams params, const Environment& env, int m);

struct LabeledPolicy {
    std::string label;
    PolicyParams params;
};

struct ExperimentConfig {
    Environment env;
    int m = 1;
    std::vector<LabeledPolicy> policies;
    int replications = 100;
    std::uint64_t base_seed = 1;
    double alpha = 1.0;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct PolicyCurve {
    std::string label;
    std::vector<double> mean;
    std::vector<double> std;  // population standard deviation across replications
    double mean_detections = 0.0;

    double final_mean() const { return mean.empty() ? 0.0 : mean.back(); }
    double final_std() const { return std.empty() ? 0.0 : std.back(); }
};

struct Aggregate {
    int horizon = 0;
    std::vector<PolicyCurve> curves;

    const PolicyCurve& curve(std::string_view label) const;
};

// Seed of replication r of a labelled policy; independent of the policy's position in a list.
std::uint64_t episode_seed(std::uint64_t base_seed, std::string_view label, int replication);

// Per-step mean and standard deviation over a set of traces with a common horizon.
PolicyCurve summarize(std::string label, const std::vector<RunTrace>& traces);

class EpisodeFailure : public std::runtime_error {
public:
    EpisodeFailure(std::string label, int replication, const std::string& what);

    const std::string& label() const noexcept { return label_; }
    int replication() const noexcept { return replication_; }

private:
    std::string label_;
    int replication_;
};

// Runs every (policy, replication) episode, in parallel when threads allow, and aggregates in
// list order. Throws EpisodeFailure naming the first failing (label, replication).
Aggregate run_experiment(const ExperimentConfig& cfg);

}  // namespace pscb
