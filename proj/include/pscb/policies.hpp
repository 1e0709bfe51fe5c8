#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pscb/detect.hpp"
#include "pscb/oracle.hpp"

namespace pscb {

enum class PolicyKind { glr_cucb, lr_glr_cucb, cucb, cts, ducb, mucb, oracle_cucb };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);
const std::vector<PolicyKind>& all_policy_kinds();

struct PolicyParams {
    PolicyKind kind = PolicyKind::cucb;

    // GLR-CUCB family.
    double p = 0.05;
    double delta = 0.05;
    int check_every = 1;
    int min_samples = 2;

    // Discounted UCB.
    double gamma_d = 0.99;
    double xi = 0.5;

    // Monitored UCB.
    int w = 150;
    double b = 10.0;
    double gamma_m = 0.05;

    // Oracle-CUCB restarts at the end of these steps.
    std::vector<int> restart_times;
};

// Throws InvalidConfiguration when a parameter the kind uses is out of range.
void validate(const PolicyParams& params);

// Tuned defaults for a horizon T, K base arms, m-sets, N segments:
//   GLR:  delta = 20/T, p = 0.05 sqrt((N-1) log T / T)
//   DUCB: gamma = 1 - sqrt(1/T)/4, xi = 0.5
//   MUCB: w = 150, b = sqrt(w/2 log(2|F| T^2)), gamma = 0.05 sqrt((N-1)|F|(2b + 3 sqrt w)/(2T))
// N-1 is floored at 1 so stationary instances still explore.
PolicyParams default_params(PolicyKind kind, int horizon, int num_arms, int m, int num_segments);

using Rng = std::mt19937_64;

enum class EventKind { detection, global_restart, local_restart };
std::string_view to_string(EventKind kind);

struct PolicyEvent {
    int time = 0;
    EventKind kind = EventKind::detection;
    std::vector<int> arms;  // base arms; empty for super-arm policies

    bool operator==(const PolicyEvent&) const = default;
};

// UCB index mean + sqrt(3 log t / (2 n)); +infinity for an unplayed arm.
double ucb_index(double mean, long long plays, long long t);

// Deterministic forced-exploration schedule: with M = floor(K/p), arm (t-1) mod M is forced when
// it is below K, i.e. t = 1..K (mod M). Throws InvalidConfiguration when M < K.
std::optional<int> forced_arm(long long t, int num_arms, double p);

// One bandit policy behind a select/update interface. A policy instance belongs to one episode.
class Policy {
public:
    virtual ~Policy() = default;

    virtual PolicyKind kind() const = 0;
    virtual SuperArm select(int t, Rng& rng) = 0;
    // `rewards` holds one value in [0,1] per arm of `played`, in ascending arm order.
    virtual std::vector<PolicyEvent> update(int t, const SuperArm& played, std::span<const double> rewards) = 0;
};

std::unique_ptr<Policy> make_policy(const PolicyParams& params, int num_arms, int m);

struct BaseArmStats {
    long long plays = 0;
    double sum = 0.0;
    GlrBuffer buffer;

    double mean() const { return plays > 0 ? sum / static_cast<double>(plays) : 0.0; }
};

// CUCB, GLR-CUCB, LR-GLR-CUCB and Oracle-CUCB: an oracle over per-arm UCB indices, differing in
// forced exploration and restart rule.
class CucbPolicy final : public Policy {
public:
    CucbPolicy(const PolicyParams& params, int num_arms, int m);

    PolicyKind kind() const override { return params_.kind; }
    SuperArm select(int t, Rng& rng) override;
    std::vector<PolicyEvent> update(int t, const SuperArm& played, std::span<const double> rewards) override;

    const std::vector<BaseArmStats>& arms() const noexcept { return stats_; }
    int last_restart() const noexcept { return last_restart_; }

private:
    bool uses_detector() const noexcept;
    void restart_all(int t);

    PolicyParams params_;
    GlrConfig glr_;
    int num_arms_;
    int m_;
    std::vector<BaseArmStats> stats_;
    int last_restart_ = 0;
    std::size_t next_restart_ = 0;
    std::vector<double> scratch_;
};

// Combinatorial Thompson sampling with Beta(1,1) priors.
class CtsPolicy final : public Policy {
public:
    CtsPolicy(int num_arms, int m);

    PolicyKind kind() const override { return PolicyKind::cts; }
    SuperArm select(int t, Rng& rng) override;
    std::vector<PolicyEvent> update(int t, const SuperArm& played, std::span<const double> rewards) override;

    double successes(int arm) const { return successes_.at(static_cast<std::size_t>(arm)); }
    double failures(int arm) const { return failures_.at(static_cast<std::size_t>(arm)); }
    void set_posterior(int arm, double successes, double failures);

private:
    int num_arms_;
    int m_;
    std::vector<double> successes_;
    std::vector<double> failures_;
    std::vector<double> theta_;
};

// Discounted UCB treating every super arm as one arm with reward in [0, m].
class DucbPolicy final : public Policy {
public:
    DucbPolicy(const PolicyParams& params, int num_arms, int m);

    PolicyKind kind() const override { return PolicyKind::ducb; }
    SuperArm select(int t, Rng& rng) override;
    std::vector<PolicyEvent> update(int t, const SuperArm& played, std::span<const double> rewards) override;

    double discounted_count(std::size_t super_arm) const { return counts_.at(super_arm); }

private:
    PolicyParams params_;
    int num_arms_;
    int m_;
    std::vector<SuperArm> super_arms_;
    std::vector<double> counts_;
    std::vector<double> sums_;
};

// Monitored UCB treating every super arm as one arm: a two-half window test per super arm,
// UCB1 since the last restart, and round-robin forced exploration.
class MucbPolicy final : public Policy {
public:
    MucbPolicy(const PolicyParams& params, int num_arms, int m);

    PolicyKind kind() const override { return PolicyKind::mucb; }
    SuperArm select(int t, Rng& rng) override;
    std::vector<PolicyEvent> update(int t, const SuperArm& played, std::span<const double> rewards) override;

    int last_restart() const noexcept { return last_restart_; }
    long long plays(std::size_t super_arm) const { return plays_.at(super_arm); }

private:
    PolicyParams params_;
    int num_arms_;
    int m_;
    std::vector<SuperArm> super_arms_;
    long long forced_period_;
    std::vector<long long> plays_;
    std::vector<double> sums_;
    std::vector<std::vector<double>> windows_;  // circular buffers of the last w rewards
    std::vector<std::size_t> window_pos_;
    int last_restart_ = 0;
};

}  // namespace pscb
