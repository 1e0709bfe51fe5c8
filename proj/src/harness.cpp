#include "pscb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "pscb/errors.hpp"
#include "pscb/oracle.hpp"
#include "pscb/rng.hpp"

namespace pscb {

namespace {

constexpr std::uint64_t kRewardStream = 0x5245574152445331ULL;
constexpr std::uint64_t kPolicyStream = 0x504f4c4943595331ULL;

}  // namespace

PolicyParams bind_to_environment(PolicyParams params, const Environment& env, int m) {
    if (params.kind == PolicyKind::oracle_cucb && params.restart_times.empty()) {
        params.restart_times = change_point_report(env, m).optimal_super_arm_changes;
    }
    return params;
}

RunTrace run_episode(const Environment& env, int m, Policy& policy, double alpha, std::uint64_t seed,
                     EpisodeOptions options) {
    const int horizon = env.horizon();
    const int num_arms = env.num_arms();
    if (m < 1 || m > num_arms) throw InvalidConfiguration("episode needs 1 <= m <= K");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidConfiguration("alpha must lie in (0,1]");

    const Environment stream = env.with_seed(hash_combine(seed, kRewardStream));
    Rng rng(hash_combine(seed, kPolicyStream));

    RunTrace trace;
    trace.cumulative_regret.reserve(static_cast<std::size_t>(horizon));
    if (options.record_actions) trace.actions.reserve(static_cast<std::size_t>(horizon));

    std::size_t cached_segment = env.table().num_segments();
    double optimum = 0.0;
    double regret = 0.0;
    std::vector<double> rewards;
    for (int t = 1; t <= horizon; ++t) {
        const SuperArm played = policy.select(t, rng);
        if (played.size() != static_cast<std::size_t>(m) || played.arms().back() >= num_arms) {
            throw ContractViolation("policy selected " + played.to_string() + " which is not an m-set over K arms");
        }
        rewards.clear();
        for (int k : played) rewards.push_back(sample_reward(stream, t, k));
        auto events = policy.update(t, played, rewards);
        trace.events.insert(trace.events.end(), std::make_move_iterator(events.begin()),
                            std::make_move_iterator(events.end()));

        const std::size_t segment = env.table().segment_index(t);
        const auto& mu = env.table().segment(segment).means;
        if (segment != cached_segment) {
            optimum = reward(top_m(mu, m), mu);
            cached_segment = segment;
        }
        regret += alpha * optimum - reward(played, mu);
        trace.cumulative_regret.push_back(regret);
        if (options.record_actions) trace.actions.push_back(played.mask());
    }
    return trace;
}

RunTrace run_episode(const Environment& env, int m, const PolicyParams& params, double alpha, std::uint64_t seed,
                     EpisodeOptions options) {
    auto policy = make_policy(bind_to_environment(params, env, m), env.num_arms(), m);
    return run_episode(env, m, *policy, alpha, seed, options);
}

const PolicyCurve& Aggregate::curve(std::string_view label) const {
    for (const auto& c : curves) {
        if (c.label == label) return c;
    }
    throw InvalidArgument("no curve labelled '" + std::string(label) + "'");
}

std::uint64_t episode_seed(std::uint64_t base_seed, std::string_view label, int replication) {
    return hash_combine(hash_combine(base_seed, fnv1a(label)), static_cast<std::uint64_t>(replication));
}

PolicyCurve summarize(std::string label, const std::vector<RunTrace>& traces) {
    PolicyCurve curve;
    curve.label = std::move(label);
    if (traces.empty()) return curve;
    const std::size_t horizon = traces.front().cumulative_regret.size();
    for (const auto& tr : traces) {
        if (tr.cumulative_regret.size() != horizon) throw InvalidArgument("traces have different horizons");
    }
    const double n = static_cast<double>(traces.size());
    curve.mean.assign(horizon, 0.0);
    curve.std.assign(horizon, 0.0);
    for (std::size_t t = 0; t < horizon; ++t) {
        double sum = 0.0;
        for (const auto& tr : traces) sum += tr.cumulative_regret[t];
        const double mean = sum / n;
        double sq = 0.0;
        for (const auto& tr : traces) {
            const double d = tr.cumulative_regret[t] - mean;
            sq += d * d;
        }
        curve.mean[t] = mean;
        curve.std[t] = std::sqrt(sq / n);
    }
    double detections = 0.0;
    for (const auto& tr : traces) {
        detections += static_cast<double>(std::count_if(tr.events.begin(), tr.events.end(), [](const PolicyEvent& e) {
            return e.kind == EventKind::detection;
        }));
    }
    curve.mean_detections = detections / n;
    return curve;
}

EpisodeFailure::EpisodeFailure(std::string label, int replication, const std::string& what)
    : std::runtime_error("policy '" + label + "' replication " + std::to_string(replication) + ": " + what),
      label_(std::move(label)),
      replication_(replication) {}

Aggregate run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replications < 1) throw InvalidConfiguration("replications must be >= 1");
    std::set<std::string> labels;
    for (const auto& p : cfg.policies) {
        if (p.label.empty() || p.label.find_first_of(",\n\r") != std::string::npos) {
            throw InvalidConfiguration("policy label '" + p.label + "' must be non-empty without commas or newlines");
        }
        if (!labels.insert(p.label).second) throw InvalidConfiguration("duplicate policy label '" + p.label + "'");
    }

    std::vector<PolicyParams> bound;
    for (const auto& p : cfg.policies) {
        bound.push_back(bind_to_environment(p.params, cfg.env, cfg.m));
        validate(bound.back());
    }

    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const std::size_t jobs = cfg.policies.size() * reps;
    std::vector<RunTrace> traces(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            const std::size_t pi = job / reps;
            const int r = static_cast<int>(job % reps);
            try {
                auto policy = make_policy(bound[pi], cfg.env.num_arms(), cfg.m);
                traces[job] = run_episode(cfg.env, cfg.m, *policy, cfg.alpha,
                                          episode_seed(cfg.base_seed, cfg.policies[pi].label, r), {false});
            } catch (...) {
                errors[job] = std::current_exception();
            }
        }
    };

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    for (std::size_t job = 0; job < jobs; ++job) {
        if (!errors[job]) continue;
        const auto& label = cfg.policies[job / reps].label;
        const int r = static_cast<int>(job % reps);
        try {
            std::rethrow_exception(errors[job]);
        } catch (const std::exception& e) {
            throw EpisodeFailure(label, r, e.what());
        } catch (...) {
            throw EpisodeFailure(label, r, "unknown error");
        }
    }

    Aggregate agg;
    agg.horizon = cfg.env.horizon();
    for (std::size_t pi = 0; pi < cfg.policies.size(); ++pi) {
        std::vector<RunTrace> slice(std::make_move_iterator(traces.begin() + static_cast<std::ptrdiff_t>(pi * reps)),
                                    std::make_move_iterator(traces.begin() + static_cast<std::ptrdiff_t>((pi + 1) * reps)));
        agg.curves.push_back(summarize(cfg.policies[pi].label, slice));
    }
    return agg;
}

}  // namespace pscb
