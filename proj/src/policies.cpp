#include "pscb/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "pscb/errors.hpp"

namespace pscb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<PolicyKind, std::string_view>, 7> kPolicyNames{{
    {PolicyKind::glr_cucb, "glr_cucb"},
    {PolicyKind::lr_glr_cucb, "lr_glr_cucb"},
    {PolicyKind::cucb, "cucb"},
    {PolicyKind::cts, "cts"},
    {PolicyKind::ducb, "ducb"},
    {PolicyKind::mucb, "mucb"},
    {PolicyKind::oracle_cucb, "oracle_cucb"},
}};

void check_feedback(int num_arms, int t, const SuperArm& played, std::span<const double> rewards) {
    if (t < 1) throw ContractViolation("time steps start at 1");
    if (played.empty()) throw InvalidArgument("played super arm is empty");
    if (rewards.size() != played.size()) {
        throw InvalidArgument("expected one reward per played arm (" + std::to_string(played.size()) + "), got " +
                              std::to_string(rewards.size()));
    }
    if (played.arms().back() >= num_arms) throw InvalidArgument("played arm index out of range");
    for (double x : rewards) {
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("reward outside [0,1]");
    }
}

std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

std::vector<int> all_arms(int num_arms) {
    std::vector<int> out(static_cast<std::size_t>(num_arms));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
    for (const auto& [k, name] : kPolicyNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
    for (const auto& [k, n] : kPolicyNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

const std::vector<PolicyKind>& all_policy_kinds() {
    static const std::vector<PolicyKind> kinds = [] {
        std::vector<PolicyKind> out;
        for (const auto& entry : kPolicyNames) out.push_back(entry.first);
        return out;
    }();
    return kinds;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::detection: return "detection";
        case EventKind::global_restart: return "global_restart";
        case EventKind::local_restart: return "local_restart";
    }
    return "unknown";
}

void validate(const PolicyParams& params) {
    switch (params.kind) {
        case PolicyKind::glr_cucb:
        case PolicyKind::lr_glr_cucb:
            if (!(params.p > 0.0 && params.p <= 1.0)) throw InvalidConfiguration("p must lie in (0,1]");
            validate(GlrConfig{params.delta, params.check_every, params.min_samples});
            break;
        case PolicyKind::ducb:
            if (!(params.gamma_d > 0.0 && params.gamma_d < 1.0)) throw InvalidConfiguration("DUCB gamma must lie in (0,1)");
            if (!(params.xi > 0.0)) throw InvalidConfiguration("DUCB xi must be positive");
            break;
        case PolicyKind::mucb:
            if (params.w < 2 || params.w % 2 != 0) throw InvalidConfiguration("MUCB window w must be even and >= 2");
            if (!(params.b > 0.0)) throw InvalidConfiguration("MUCB threshold b must be positive");
            if (!(params.gamma_m > 0.0 && params.gamma_m <= 1.0)) {
                throw InvalidConfiguration("MUCB exploration rate must lie in (0,1]");
            }
            break;
        case PolicyKind::oracle_cucb:
            for (std::size_t i = 0; i < params.restart_times.size(); ++i) {
                if (params.restart_times[i] < 1 || (i > 0 && params.restart_times[i] <= params.restart_times[i - 1])) {
                    throw InvalidConfiguration("restart times must be positive and strictly increasing");
                }
            }
            break;
        case PolicyKind::cucb:
        case PolicyKind::cts:
            break;
    }
}

PolicyParams default_params(PolicyKind kind, int horizon, int num_arms, int m, int num_segments) {
    if (horizon < 2) throw InvalidConfiguration("default parameters need T >= 2");
    PolicyParams params;
    params.kind = kind;
    const double T = horizon;
    const double log_t = std::log(T);
    const double changes = std::max(1, num_segments - 1);

    params.delta = 20.0 / T;
    params.p = std::min(1.0, 0.05 * std::sqrt(changes * log_t / T));

    params.gamma_d = 1.0 - std::sqrt(1.0 / T) / 4.0;
    params.xi = 0.5;

    const double num_super_arms = static_cast<double>(binomial(num_arms, m));
    params.w = 150;
    params.b = std::sqrt(params.w / 2.0 * std::log(2.0 * num_super_arms * T * T));
    params.gamma_m = std::min(
        1.0, 0.05 * std::sqrt(changes * num_super_arms * (2.0 * params.b + 3.0 * std::sqrt(params.w)) / (2.0 * T)));
    return params;
}

double ucb_index(double mean, long long plays, long long t) {
    if (t < 1) throw InvalidArgument("ucb_index needs t >= 1");
    if (plays <= 0) return kInf;
    return mean + std::sqrt(3.0 * std::log(static_cast<double>(t)) / (2.0 * static_cast<double>(plays)));
}

std::optional<int> forced_arm(long long t, int num_arms, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidConfiguration("forced exploration needs p in (0,1]");
    const auto period = static_cast<long long>(std::floor(num_arms / p));
    if (period < num_arms) throw InvalidConfiguration("forced exploration period floor(K/p) is below K");
    // Same as r = t mod M with r in 1..K when M > K; also covers M = K, where r = K never occurs.
    const long long r = (((t - 1) % period) + period) % period;
    if (r < num_arms) return static_cast<int>(r);
    return std::nullopt;
}

std::unique_ptr<Policy> make_policy(const PolicyParams& params, int num_arms, int m) {
    if (num_arms < 1 || m < 1 || m > num_arms) throw InvalidConfiguration("policies need 1 <= m <= K");
    validate(params);
    switch (params.kind) {
        case PolicyKind::glr_cucb:
        case PolicyKind::lr_glr_cucb:
        case PolicyKind::cucb:
        case PolicyKind::oracle_cucb: return std::make_unique<CucbPolicy>(params, num_arms, m);
        case PolicyKind::cts: return std::make_unique<CtsPolicy>(num_arms, m);
        case PolicyKind::ducb: return std::make_unique<DucbPolicy>(params, num_arms, m);
        case PolicyKind::mucb: return std::make_unique<MucbPolicy>(params, num_arms, m);
    }
    throw InvalidConfiguration("unknown policy kind");
}

// CUCB family ---------------------------------------------------------------------------------

CucbPolicy::CucbPolicy(const PolicyParams& params, int num_arms, int m)
    : params_(params),
      glr_{params.delta, params.check_every, params.min_samples},
      num_arms_(num_arms),
      m_(m),
      stats_(static_cast<std::size_t>(num_arms)),
      scratch_(static_cast<std::size_t>(num_arms)) {
    if (num_arms < 1 || m < 1 || m > num_arms) throw InvalidConfiguration("policies need 1 <= m <= K");
    if (params_.kind == PolicyKind::cts || params_.kind == PolicyKind::ducb || params_.kind == PolicyKind::mucb) {
        throw InvalidConfiguration("CucbPolicy does not implement " + std::string(to_string(params_.kind)));
    }
    validate(params_);
}

bool CucbPolicy::uses_detector() const noexcept {
    return params_.kind == PolicyKind::glr_cucb || params_.kind == PolicyKind::lr_glr_cucb;
}

SuperArm CucbPolicy::select(int t, Rng& /*rng*/) {
    // Local restarts keep the global clock; global restarts rewind it.
    const long long clock = params_.kind == PolicyKind::lr_glr_cucb ? t : t - last_restart_;
    if (clock < 1) throw ContractViolation("select called at or before the last restart");
    for (std::size_t k = 0; k < stats_.size(); ++k) scratch_[k] = ucb_index(stats_[k].mean(), stats_[k].plays, clock);

    if (uses_detector()) {
        if (auto forced = forced_arm(t, num_arms_, params_.p)) return top_m_with(scratch_, m_, *forced);
    }
    return top_m(scratch_, m_);
}

void CucbPolicy::restart_all(int t) {
    for (auto& s : stats_) {
        s.plays = 0;
        s.sum = 0.0;
        s.buffer.reset();
    }
    last_restart_ = t;
}

std::vector<PolicyEvent> CucbPolicy::update(int t, const SuperArm& played, std::span<const double> rewards) {
    check_feedback(num_arms_, t, played, rewards);
    const bool detect = uses_detector();
    std::size_t i = 0;
    for (int k : played) {
        auto& s = stats_[static_cast<std::size_t>(k)];
        ++s.plays;
        s.sum += rewards[i];
        if (detect) s.buffer.push(rewards[i]);
        ++i;
    }

    std::vector<PolicyEvent> events;
    if (detect) {
        std::vector<int> fired;
        for (int k : played) {
            const auto& buf = stats_[static_cast<std::size_t>(k)].buffer;
            if (buf.size() % static_cast<std::size_t>(glr_.check_every) == 0 && glr_test(buf, glr_)) fired.push_back(k);
        }
        if (!fired.empty()) {
            events.push_back({t, EventKind::detection, fired});
            if (params_.kind == PolicyKind::glr_cucb) {
                events.push_back({t, EventKind::global_restart, all_arms(num_arms_)});
                restart_all(t);
            } else {
                for (int k : fired) {
                    auto& s = stats_[static_cast<std::size_t>(k)];
                    s.plays = 0;
                    s.sum = 0.0;
                    s.buffer.reset();
                }
                events.push_back({t, EventKind::local_restart, std::move(fired)});
            }
        }
    } else if (params_.kind == PolicyKind::oracle_cucb) {
        if (std::binary_search(params_.restart_times.begin(), params_.restart_times.end(), t)) {
            events.push_back({t, EventKind::global_restart, all_arms(num_arms_)});
            restart_all(t);
        }
    }
    return events;
}

// CTS -----------------------------------------------------------------------------------------

CtsPolicy::CtsPolicy(int num_arms, int m)
    : num_arms_(num_arms),
      m_(m),
      successes_(static_cast<std::size_t>(num_arms), 0.0),
      failures_(static_cast<std::size_t>(num_arms), 0.0),
      theta_(static_cast<std::size_t>(num_arms)) {
    if (num_arms < 1 || m < 1 || m > num_arms) throw InvalidConfiguration("policies need 1 <= m <= K");
}

void CtsPolicy::set_posterior(int arm, double successes, double failures) {
    if (successes < 0.0 || failures < 0.0) throw InvalidArgument("posterior counts must be non-negative");
    successes_.at(static_cast<std::size_t>(arm)) = successes;
    failures_.at(static_cast<std::size_t>(arm)) = failures;
}

SuperArm CtsPolicy::select(int /*t*/, Rng& rng) {
    for (std::size_t k = 0; k < theta_.size(); ++k) {
        std::gamma_distribution<double> a(1.0 + successes_[k], 1.0);
        std::gamma_distribution<double> b(1.0 + failures_[k], 1.0);
        const double x = a(rng);
        const double y = b(rng);
        theta_[k] = x + y > 0.0 ? x / (x + y) : 0.5;
    }
    return top_m(theta_, m_);
}

std::vector<PolicyEvent> CtsPolicy::update(int t, const SuperArm& played, std::span<const double> rewards) {
    check_feedback(num_arms_, t, played, rewards);
    std::size_t i = 0;
    for (int k : played) {
        successes_[static_cast<std::size_t>(k)] += rewards[i];
        failures_[static_cast<std::size_t>(k)] += 1.0 - rewards[i];
        ++i;
    }
    return {};
}

// DUCB ----------------------------------------------------------------------------------------

DucbPolicy::DucbPolicy(const PolicyParams& params, int num_arms, int m)
    : params_(params),
      num_arms_(num_arms),
      m_(m),
      super_arms_(enumerate_superarms(num_arms, m)),
      counts_(super_arms_.size(), 0.0),
      sums_(super_arms_.size(), 0.0) {
    validate(params_);
}

SuperArm DucbPolicy::select(int /*t*/, Rng& /*rng*/) {
    const double total = std::max(1.0, std::accumulate(counts_.begin(), counts_.end(), 0.0));
    const double log_total = std::log(total);
    std::vector<double> index(super_arms_.size());
    for (std::size_t a = 0; a < super_arms_.size(); ++a) {
        if (counts_[a] <= 0.0) {
            index[a] = kInf;
        } else {
            index[a] = sums_[a] / counts_[a] + 2.0 * m_ * std::sqrt(params_.xi * log_total / counts_[a]);
        }
    }
    return super_arms_[argmax_lowest(index)];
}

std::vector<PolicyEvent> DucbPolicy::update(int t, const SuperArm& played, std::span<const double> rewards) {
    check_feedback(num_arms_, t, played, rewards);
    if (played.size() != static_cast<std::size_t>(m_)) throw InvalidArgument("DUCB expects an m-set");
    for (std::size_t a = 0; a < counts_.size(); ++a) {
        counts_[a] *= params_.gamma_d;
        sums_[a] *= params_.gamma_d;
    }
    const std::size_t a = superarm_rank(played, num_arms_);
    counts_[a] += 1.0;
    sums_[a] += std::accumulate(rewards.begin(), rewards.end(), 0.0);
    return {};
}

// MUCB ----------------------------------------------------------------------------------------

MucbPolicy::MucbPolicy(const PolicyParams& params, int num_arms, int m)
    : params_(params),
      num_arms_(num_arms),
      m_(m),
      super_arms_(enumerate_superarms(num_arms, m)),
      forced_period_(0),
      plays_(super_arms_.size(), 0),
      sums_(super_arms_.size(), 0.0),
      windows_(super_arms_.size()),
      window_pos_(super_arms_.size(), 0) {
    validate(params_);
    forced_period_ = static_cast<long long>(std::ceil(static_cast<double>(super_arms_.size()) / params_.gamma_m));
}

SuperArm MucbPolicy::select(int t, Rng& /*rng*/) {
    const long long clock = t - last_restart_;
    if (clock < 1) throw ContractViolation("select called at or before the last restart");
    const long long slot = clock % forced_period_;
    if (slot >= 1 && slot <= static_cast<long long>(super_arms_.size())) {
        return super_arms_[static_cast<std::size_t>(slot - 1)];
    }
    std::vector<double> index(super_arms_.size());
    const double log_clock = std::log(static_cast<double>(clock));
    for (std::size_t a = 0; a < super_arms_.size(); ++a) {
        if (plays_[a] == 0) {
            index[a] = kInf;
        } else {
            const double n = static_cast<double>(plays_[a]);
            index[a] = sums_[a] / n + m_ * std::sqrt(2.0 * log_clock / n);
        }
    }
    return super_arms_[argmax_lowest(index)];
}

std::vector<PolicyEvent> MucbPolicy::update(int t, const SuperArm& played, std::span<const double> rewards) {
    check_feedback(num_arms_, t, played, rewards);
    if (played.size() != static_cast<std::size_t>(m_)) throw InvalidArgument("MUCB expects an m-set");
    const std::size_t a = superarm_rank(played, num_arms_);
    const double x = std::accumulate(rewards.begin(), rewards.end(), 0.0);
    ++plays_[a];
    sums_[a] += x;

    const auto w = static_cast<std::size_t>(params_.w);
    auto& window = windows_[a];
    if (window.size() < w) {
        window.push_back(x);
    } else {
        window[window_pos_[a]] = x;
    }
    window_pos_[a] = (window_pos_[a] + 1) % w;
    if (window.size() < w) return {};

    // window_pos_ now points at the oldest entry.
    double older = 0.0;
    double newer = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
        const double v = window[(window_pos_[a] + i) % w];
        (i < w / 2 ? older : newer) += v;
    }
    if (std::abs(newer - older) <= params_.b) return {};

    std::fill(plays_.begin(), plays_.end(), 0);
    std::fill(sums_.begin(), sums_.end(), 0.0);
    for (auto& wnd : windows_) wnd.clear();
    std::fill(window_pos_.begin(), window_pos_.end(), 0);
    last_restart_ = t;
    return {{t, EventKind::detection, {}}, {t, EventKind::global_restart, {}}};
}

}  // namespace pscb
